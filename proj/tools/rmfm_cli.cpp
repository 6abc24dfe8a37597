// rmfm: exact ANOVA sums of squares and verification suites.

#include "rmfm/dataset.hpp"
#include "rmfm/dominance.hpp"
#include "rmfm/fixtures.hpp"
#include "rmfm/report.hpp"
#include "rmfm/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rmfm;

EffectSet parse_model(const std::string& text, std::size_t factors) {
    if (text == "saturated") return EffectSet::all(factors);
    if (text == "additive") return EffectSet::additive(factors);
    if (text == "a-only") return EffectSet::a_only(factors);
    if (text.rfind("custom:", 0) == 0) return EffectSet::parse(text.substr(7), factors);
    throw std::invalid_argument("unknown model '" + text + "'");
}

std::vector<SsType> parse_types(const std::string& text) {
    if (text == "all") return {SsType::Type1, SsType::Type2, SsType::Type3};
    std::vector<SsType> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "1") out.push_back(SsType::Type1);
        else if (item == "2") out.push_back(SsType::Type2);
        else if (item == "3") out.push_back(SsType::Type3);
        else throw std::invalid_argument("unknown SS type '" + item + "'");
    }
    return out;
}

std::vector<EffectId> parse_effects(const std::string& text, const Dataset& data) {
    std::vector<EffectId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        // Factor names from the header are accepted as well as letters.
        auto it = std::find(data.factor_names.begin(), data.factor_names.end(), item);
        if (it != data.factor_names.end()) {
            std::vector<std::uint8_t> bits(data.factors(), 0);
            bits[static_cast<std::size_t>(it - data.factor_names.begin())] = 1;
            out.emplace_back(std::move(bits));
        } else {
            out.push_back(EffectId::parse(item, data.factors()));
        }
    }
    if (out.empty()) throw std::invalid_argument("no effect given");
    return out;
}

// List of rows; entries are numbers or rational strings such as "1/3".
RatMatrix matrix_from_json(const nlohmann::json& rows, const std::string& what) {
    if (!rows.is_array()) throw std::invalid_argument(what + " must be a list of rows");
    const std::size_t m = rows.size();
    const std::size_t cols = m == 0 ? 0 : rows.front().size();
    RatMatrix c(m, cols);
    for (std::size_t r = 0; r < m; ++r) {
        if (!rows[r].is_array() || rows[r].size() != cols) throw std::invalid_argument("ragged " + what);
        for (std::size_t j = 0; j < cols; ++j)
            c(r, j) = rows[r][j].is_string() ? parse_rational(rows[r][j].get<std::string>())
                                             : parse_rational(rows[r][j].dump());
    }
    return c;
}

// {"<factor>": [[row], ...]} with numbers or rational strings.
ContrastScheme load_contrasts(const std::string& path, const Dataset& data) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open contrasts file '" + path + "'");
    const auto doc = nlohmann::json::parse(in);
    std::vector<std::optional<RatMatrix>> per_factor(data.factors());
    for (const auto& [name, rows] : doc.items()) {
        auto it = std::find(data.factor_names.begin(), data.factor_names.end(), name);
        if (it == data.factor_names.end()) throw std::invalid_argument("contrasts given for unknown factor '" + name + "'");
        RatMatrix c = matrix_from_json(rows, "contrast matrix for '" + name + "'");
        per_factor[static_cast<std::size_t>(it - data.factor_names.begin())] = std::move(c);
    }
    return ContrastScheme::user_supplied(std::move(per_factor));
}

std::vector<std::size_t> parse_dims(const std::string& text) {
    std::vector<std::size_t> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(static_cast<std::size_t>(std::stoul(item)));
    return dims;
}

int report_suite(const SuiteResult& r) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.checks << " checks, " << r.failures.size()
              << " failures\n";
    const std::size_t shown = std::min<std::size_t>(r.failures.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) std::cout << "  " << r.failures[i] << "\n";
    if (r.failures.size() > shown) std::cout << "  ... " << r.failures.size() - shown << " more\n";
    return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact RMFM sums of squares for ANOVA models"};
    app.require_subcommand(1);

    std::string data_path, model = "saturated", effect = "A", type = "all", contrasts = "paper", output = "table";
    auto* anova = app.add_subcommand("anova", "Sums of squares, F tests and testing targets for a dataset");
    anova->add_option("--data", data_path, "CSV with factor columns and a 'y' column")->required();
    anova->add_option("--model", model, "saturated | additive | a-only | custom:J (e.g. custom:00,10,01)");
    anova->add_option("--effect", effect, "Effect(s) to test: A, B, AB, ... or bit strings");
    anova->add_option("--type", type, "SS type: 1, 2, 3 or all");
    anova->add_option("--contrasts", contrasts, "'paper' or a JSON file of per-factor contrast matrices");
    anova->add_option("--output", output, "table | json")->check(CLI::IsMember({"table", "json"}));

    std::string suite;
    std::uint64_t seed = 7;
    std::size_t trials = 0;
    std::size_t factors = 0;
    std::string dims_text;
    std::string reference = default_reference_path();
    auto* verify = app.add_subcommand("verify", "Run an exact verification suite");
    verify->add_option("suite", suite, "table1 | prop1 | prop2 | dominance | prop3 | fdist | all")
        ->required()
        ->check(CLI::IsMember({"table1", "prop1", "prop2", "dominance", "prop3", "fdist", "all"}));
    verify->add_option("--seed", seed, "Seed for randomized suites");
    verify->add_option("--trials", trials, "Instances (prop1, prop2) or Monte Carlo draws (fdist)");
    verify->add_option("--factors", factors, "Factor count for prop3");
    verify->add_option("--dims", dims_text, "Levels per factor for prop3, e.g. 2,3,2");
    verify->add_option("--reference", reference, "Reference table JSON for table1");

    std::string dominance_path;
    auto* dominance = app.add_subcommand("dominance", "Compare a numerator matrix L against H for a model X");
    dominance->add_option("--input", dominance_path, "JSON file with row lists \"x\", \"h\" and \"l\"")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (anova->parsed()) {
            const Dataset data = read_csv(data_path);
            AnovaRequest request{parse_model(model, data.factors()), model, parse_effects(effect, data),
                                 parse_types(type), ContrastScheme::paper_helmert()};
            if (contrasts != "paper") request.scheme = load_contrasts(contrasts, data);
            const AnovaReport report = run_anova(data, request);
            if (output == "json")
                std::cout << to_json(report).dump(2) << "\n";
            else
                std::cout << render_table(report);
            return 0;
        }

        if (dominance->parsed()) {
            std::ifstream in(dominance_path);
            if (!in) throw std::runtime_error("cannot open '" + dominance_path + "'");
            const auto doc = nlohmann::json::parse(in);
            const DominanceReport r = check_dominance(matrix_from_json(doc.at("x"), "x"), matrix_from_json(doc.at("h"), "h"),
                                                      matrix_from_json(doc.at("l"), "l"));
            auto verdict = [](bool ok) { return ok ? "yes" : "NO"; };
            std::cout << "sp(P_X L) = sp(H)                 " << verdict(r.span_recovered) << "\n"
                      << "sp(L) in sp(H) + sp(X)^perp       " << verdict(r.containment) << "\n"
                      << "X'P_H X - X'P_L X nnd             " << verdict(r.nnd_holds) << "\n"
                      << "df: nu_H " << r.df.nu_h << ", nu_(P_X L) " << r.df.nu_pxl << ", nu_L " << r.df.nu_l
                      << ", bound " << r.df.upper << "  " << verdict(r.df.holds()) << "\n"
                      << "P_H + I - P_X - P_L a projector   " << verdict(r.q_idempotent) << "\n";
            return r.all_hold() ? 0 : 1;
        }

        int status = 0;
        auto run = [&](const std::string& name) { return suite == name || suite == "all"; };
        if (run("table1")) status |= report_suite(verify_reference_table(load_reference_table(reference)));
        if (run("prop1")) status |= report_suite(verify_restriction(seed, trials ? trials : 500));
        if (run("prop2") || suite == "dominance") status |= report_suite(verify_dominance(seed, trials ? trials : 200));
        if (run("prop3")) {
            std::vector<std::vector<std::size_t>> dims_list;
            if (!dims_text.empty()) {
                dims_list.push_back(parse_dims(dims_text));
                if (factors && dims_list.front().size() != factors)
                    throw std::invalid_argument("--dims lists " + std::to_string(dims_list.front().size()) +
                                                " factors, --factors says " + std::to_string(factors));
            } else {
                for (auto d : std::vector<std::vector<std::size_t>>{
                         {2}, {3}, {4}, {2, 2}, {2, 3}, {3, 3}, {4, 4}, {2, 2, 2}, {2, 3, 2}, {4, 4, 3}})
                    if (!factors || d.size() == factors) dims_list.push_back(d);
            }
            status |= report_suite(verify_effect_models(dims_list));
        }
        if (run("fdist")) status |= report_suite(verify_fdist(seed, trials ? trials : 1000000));
        return status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

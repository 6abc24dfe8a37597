#include "rmfm/report.hpp"

#include "doctest.h"

#include <sstream>

using namespace rmfm;

namespace {

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

// Layout with counts (0,1,1 / 1,1,1 / 1,1,1) plus one extra replicate per
// nonempty cell so that F is defined.
Dataset empty_corner() {
    std::ostringstream csv;
    csv << "A,B,y\n";
    int v = 1;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            if (i == 1 && j == 1) continue;
            csv << i << "," << j << "," << v * v % 13 << "\n";
            csv << i << "," << j << "," << (v * 7) % 11 << ".5\n";
            ++v;
        }
    return parse(csv.str());
}

AnovaRequest saturated_a(std::vector<SsType> types) {
    return {EffectSet::all(2), "saturated", {EffectId::from_bits("10")}, std::move(types)};
}

}  // namespace

TEST_CASE("empty corner cell: type 3 tests one A contrast") {
    const AnovaReport rep = run_anova(empty_corner(), saturated_a({SsType::Type3}));
    REQUIRE(rep.entries.size() == 1);
    const AnovaEntry& e = rep.entries[0];
    CHECK(e.result.nu_num == 1);
    CHECK(e.target.dim() == 1);
    CHECK(e.estimable_dim == 1);
    const RatMatrix expect = kron(RatMatrix{{0}, {1}, {-1}}, RatMatrix::ones(3, 1));
    CHECK((e.target_basis == expect || e.target_basis == -expect));
    bool described = false;
    for (const auto& n : e.notes) described |= n.find("mean[A=2] - mean[A=3]") != std::string::npos;
    CHECK(described);
    CHECK(e.result.f_value);

    const std::string table = render_table(rep);
    CHECK(table.find("df        1") != std::string::npos);
    CHECK(table.find("proportional to mean[A=2] - mean[A=3]") != std::string::npos);
}

TEST_CASE("describe_main_effect_contrast") {
    const CellLayout layout = CellLayout::uniform({3, 2}, 1);
    const std::vector<std::string> names{"A", "B"};
    const std::vector<std::vector<std::string>> labels{{"lo", "mid", "hi"}, {"x", "y"}};
    const EffectId a = EffectId::from_bits("10");
    CHECK(describe_main_effect_contrast(kron(RatMatrix{{2}, {-1}, {-1}}, RatMatrix::ones(2, 1)), a, layout, names,
                                        labels) == "2*mean[A=lo] - mean[A=mid] - mean[A=hi]");
    CHECK(describe_main_effect_contrast(RatMatrix{{1}, {0}, {0}, {0}, {0}, {-1}}, a, layout, names, labels).empty());
    CHECK(describe_main_effect_contrast(RatMatrix::ones(6, 1), EffectId::from_bits("11"), layout, names, labels).empty());
}

TEST_CASE("balanced data: identical SS for all types") {
    std::ostringstream csv;
    csv << "A,B,y\n";
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int r = 0; r < 2; ++r) csv << i << "," << j << "," << (i * 3 + j * j + r * 5) % 7 << "\n";
    const AnovaReport rep = run_anova(parse(csv.str()), saturated_a({SsType::Type1, SsType::Type2, SsType::Type3}));
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.entries[0].result.ss_num == rep.entries[1].result.ss_num);
    CHECK(rep.entries[1].result.ss_num == rep.entries[2].result.ss_num);
    for (const auto& e : rep.entries) CHECK(e.estimable_dim == e.target.dim());
}

TEST_CASE("one observation per cell leaves F undefined") {
    const Dataset d = parse("A,B,y\n1,1,1\n1,2,4\n2,1,2\n2,2,9\n");
    const AnovaReport rep = run_anova(d, saturated_a({SsType::Type3}));
    const auto& r = rep.entries[0].result;
    CHECK(r.nu_den == 0);
    CHECK_FALSE(r.f_value);
    CHECK_FALSE(r.p_value);
    CHECK(r.ss_num == 9);  // row means 2.5 and 5.5 around 4, times 2 per row
    CHECK(render_table(rep).find("F         undefined") != std::string::npos);
}

TEST_CASE("effect outside the model is rejected") {
    const AnovaRequest req{EffectSet::a_only(2), "a-only", {EffectId::from_bits("01")}, {SsType::Type1}};
    CHECK_THROWS_AS(run_anova(empty_corner(), req), std::invalid_argument);
}

TEST_CASE("json layout") {
    const AnovaReport rep = run_anova(empty_corner(), saturated_a({SsType::Type2, SsType::Type3}));
    const nlohmann::json doc = to_json(rep);
    CHECK(doc["factors"] == nlohmann::json({"A", "B"}));
    CHECK(doc["cell_counts"][0] == 0);
    REQUIRE(doc["entries"].size() == 2);
    const auto& e = doc["entries"][1];
    CHECK(e["effect"] == "A");
    CHECK(e["type"] == 3);
    CHECK(e["df"] == 1);
    CHECK(e["ss"].contains("num"));
    CHECK(e["ss"].contains("den"));
    CHECK(parse_rational(e["ss"]["num"].get<std::string>() + "/" + e["ss"]["den"].get<std::string>()) ==
          rep.entries[1].result.ss_num);
    CHECK(e["target_basis"].size() == 1);
    CHECK(e["target_basis"][0].size() == 9);
    CHECK(e["estimable_dim"] == 1);
    CHECK(e["p"].is_number());
    CHECK(to_json(rep).dump() == doc.dump());
}

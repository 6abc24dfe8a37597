#include "rmfm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rmfm {

namespace {

std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool is_integer_label(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

void sort_labels(std::vector<std::string>& labels) {
    bool numeric = std::all_of(labels.begin(), labels.end(), is_integer_label);
    if (numeric)
        std::sort(labels.begin(), labels.end(),
                  [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });
    else
        std::sort(labels.begin(), labels.end());
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) -> DataError {
        return DataError(source + ":" + std::to_string(line_no) + ": " + what);
    };

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line).front() == '#') continue;
        header = split_fields(line);
        break;
    }
    if (header.empty()) throw DataError(source + ": missing header line");

    Dataset data;
    std::size_t y_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].empty()) throw fail("empty column name");
        if (header[c] == "y") {
            if (y_col != header.size()) throw fail("more than one 'y' column");
            y_col = c;
        } else {
            if (std::count(data.factor_names.begin(), data.factor_names.end(), header[c]))
                throw fail("duplicate column '" + header[c] + "'");
            data.factor_names.push_back(header[c]);
        }
    }
    if (y_col == header.size()) throw fail("header has no 'y' column");
    if (data.factor_names.empty()) throw fail("header has no factor columns");

    const std::size_t f = data.factor_names.size();
    std::vector<std::vector<std::string>> raw_labels;
    std::vector<std::size_t> raw_lines;
    RatVector ys;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line).front() == '#') continue;
        auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        std::vector<std::string> labels;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == y_col) continue;
            if (fields[c].empty()) throw fail("empty level label for factor '" + header[c] + "'");
            labels.push_back(fields[c]);
        }
        try {
            ys.push_back(parse_rational(fields[y_col]));
        } catch (const std::invalid_argument&) {
            throw fail("response '" + fields[y_col] + "' is not a number");
        }
        raw_labels.push_back(std::move(labels));
        raw_lines.push_back(line_no);
    }
    if (raw_labels.empty()) throw DataError(source + ": no observations");

    data.level_labels.resize(f);
    for (std::size_t k = 0; k < f; ++k) {
        auto& labels = data.level_labels[k];
        for (const auto& row : raw_labels) labels.push_back(row[k]);
        sort_labels(labels);
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        if (labels.size() < 2)
            throw DataError(source + ": factor '" + data.factor_names[k] + "' has fewer than two levels");
    }

    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
        Observation obs;
        for (std::size_t k = 0; k < f; ++k) {
            const auto& labels = data.level_labels[k];
            obs.levels.push_back(static_cast<std::size_t>(
                std::find(labels.begin(), labels.end(), raw_labels[i][k]) - labels.begin()));
        }
        obs.y = ys[i];
        data.rows.push_back(std::move(obs));
    }
    return data;
}

Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_csv(in, path);
}

std::string to_decimal_string(const Rat& value) {
    mpz_class den = value.get_den();
    unsigned long twos = 0;
    unsigned long fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return value.get_str();

    const unsigned long places = std::max(twos, fives);
    if (places == 0) return value.get_num().get_str();
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = value.get_num() * scale / value.get_den();
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return (negative ? "-" : "") + digits;
}

std::string to_csv(const Dataset& data) {
    std::ostringstream out;
    for (const auto& name : data.factor_names) out << name << ',';
    out << "y\n";
    for (const auto& row : data.rows) {
        for (std::size_t k = 0; k < data.factors(); ++k) out << data.level_labels[k][row.levels[k]] << ',';
        out << to_decimal_string(row.y) << '\n';
    }
    return out.str();
}

CellLayout layout_of(const Dataset& data) {
    std::vector<std::size_t> dims;
    for (const auto& labels : data.level_labels) dims.push_back(labels.size());
    std::size_t cells = 1;
    for (auto d : dims) cells *= d;
    std::vector<std::size_t> counts(cells, 0);
    CellLayout shape = CellLayout::uniform(dims, 1);
    for (const auto& row : data.rows) ++counts[shape.cell_index(row.levels)];
    return CellLayout(std::move(dims), std::move(counts));
}

RatVector cell_ordered_response(const Dataset& data) {
    const CellLayout layout = layout_of(data);
    std::vector<std::size_t> order(data.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return layout.cell_index(data.rows[a].levels) < layout.cell_index(data.rows[b].levels);
    });
    RatVector y;
    y.reserve(order.size());
    for (auto i : order) y.push_back(data.rows[i].y);
    return y;
}

}  // namespace rmfm

#pragma once

// Observation data: one CSV row per observation, one column per factor plus
// a `y` response column. Responses are parsed exactly ("1.25" is 5/4).

#include "rmfm/effects.hpp"
#include "rmfm/exactlin.hpp"

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmfm {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Observation {
    std::vector<std::size_t> levels;  // 0-based level index per factor
    Rat y;

    friend bool operator==(const Observation&, const Observation&) = default;
};

struct Dataset {
    std::vector<std::string> factor_names;
    /// Level labels per factor; level index i is labels[k][i]. Integer labels
    /// sort numerically, anything else lexicographically.
    std::vector<std::vector<std::string>> level_labels;
    std::vector<Observation> rows;  // file order

    std::size_t factors() const { return factor_names.size(); }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

Dataset parse_csv(std::istream& in, const std::string& source = "<input>");
Dataset read_csv(const std::string& path);
std::string to_csv(const Dataset& data);

/// Exact decimal when the denominator allows it, "p/q" otherwise.
std::string to_decimal_string(const Rat& value);

CellLayout layout_of(const Dataset& data);
/// Responses in observation order of `incidence(layout_of(data))`:
/// by cell, then by file order within a cell.
RatVector cell_ordered_response(const Dataset& data);

}  // namespace rmfm

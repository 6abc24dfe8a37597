#pragma once

// Reference testing targets for the three 3x3 example layouts, read from
// data/table1.json.

#include "rmfm/effects.hpp"
#include "rmfm/exactlin.hpp"

#include <map>
#include <string>
#include <vector>

namespace rmfm {

struct ReferenceLayout {
    std::string name;
    CellLayout layout;
    /// "Gtm" -> integer matrix whose columns span G_tm (t = SS type, m = model).
    std::map<std::string, RatMatrix> targets;
    /// "Gtm" -> asserted dim(sp(G_tm) n sp(H_A)).
    std::map<std::string, std::size_t> a_effect_overlap;
};

struct ReferenceTable {
    std::vector<ReferenceLayout> layouts;
};

/// Path compiled in from the source tree's data directory.
std::string default_reference_path();
ReferenceTable load_reference_table(const std::string& path);

}  // namespace rmfm

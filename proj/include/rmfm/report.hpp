#pragma once

// ANOVA reports: for each requested (effect, SS type) the exact SS, df, F and
// p-value, plus what that SS tests about the cell means in a chosen model.

#include "rmfm/dataset.hpp"
#include "rmfm/effects.hpp"
#include "rmfm/hypothesis.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace rmfm {

struct AnovaRequest {
    EffectSet model;          // model in which testing targets are reported
    std::string model_name;
    std::vector<EffectId> effects;
    std::vector<SsType> types;
    ContrastScheme scheme = ContrastScheme::paper_helmert();
};

struct AnovaEntry {
    EffectId effect;
    SsType type;
    TestResult result;
    Subspace target;            // sp(P_M K' P) in the cell-means space
    RatMatrix target_basis;     // integer columns spanning `target`
    std::size_t estimable_dim;  // dim(target n sp(H_effect))
    std::vector<std::string> notes;
};

struct AnovaReport {
    std::vector<std::string> factor_names;
    std::vector<std::vector<std::string>> level_labels;
    CellLayout layout;
    std::string model_name;
    EffectSet model;
    std::vector<AnovaEntry> entries;
};

AnovaReport run_anova(const Dataset& data, const AnovaRequest& request);

std::string render_table(const AnovaReport& report);
nlohmann::json to_json(const AnovaReport& report);

/// "mean[A=2] - mean[A=3]" style description of a main-effect contrast
/// column, or empty when the column is not one.
std::string describe_main_effect_contrast(const RatMatrix& column, const EffectId& effect, const CellLayout& layout,
                                          const std::vector<std::string>& factor_names,
                                          const std::vector<std::vector<std::string>>& level_labels);

}  // namespace rmfm

#pragma once

// Exact verification suites: the three structural identities on random or
// enumerated instances, the reference-table reproduction, and numeric checks
// of the F distribution code. Each suite counts checks and keeps a message
// per failure.

#include "rmfm/effects.hpp"
#include "rmfm/exactlin.hpp"
#include "rmfm/fixtures.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rmfm {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
    void expect(bool ok, std::string what) {
        ++checks;
        if (!ok) failures.push_back(std::move(what));
    }
};

/// Small-integer generator with a platform-independent mapping from the engine.
class InstanceRng {
public:
    explicit InstanceRng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform integer in [lo, hi].
    long between(long lo, long hi);
    bool chance(unsigned one_in) { return between(0, static_cast<long>(one_in) - 1) == 0; }

private:
    std::mt19937_64 engine_;
};

RatMatrix random_matrix(InstanceRng& rng, std::size_t rows, std::size_t cols, long bound = 3);
/// Product of random rows x r and r x cols factors; rank at most r.
RatMatrix random_low_rank(InstanceRng& rng, std::size_t rows, std::size_t cols, std::size_t r, long bound = 3);

struct RestrictionInstance {
    RatMatrix x;
    RatMatrix g;
    RatVector y;
};
RestrictionInstance random_restriction_instance(InstanceRng& rng);
/// Both directions of the RMFM characterization plus the SSE-difference identity.
void check_restriction_instance(const RestrictionInstance& inst, InstanceRng& rng, SuiteResult& out);

struct DominanceInstance {
    RatMatrix x;
    RatMatrix h;
    RatMatrix l;
};
/// L = H A + W B (+ extra W columns) with A nonsingular and sp(W) = sp(X)^perp.
DominanceInstance random_dominance_instance(InstanceRng& rng);

/// G_tm: sp(P_{M_m} K' P_{tA}) for types/models 1 (mean + A), 2 (additive), 3 (saturated).
Subspace a_effect_target(const CellLayout& layout, int type, int model,
                         const ContrastScheme& scheme = ContrastScheme::paper_helmert());

/// Alternative contrast set: column j is e_j - e_m.
ContrastScheme reference_level_contrasts(const std::vector<std::size_t>& dims);

SuiteResult verify_reference_table(const ReferenceTable& table);
SuiteResult verify_restriction(std::uint64_t seed, std::size_t trials);
SuiteResult verify_dominance(std::uint64_t seed, std::size_t trials);
/// Column-omission identities for every non-empty J and every j* in J, under
/// the default and the reference-level contrasts.
SuiteResult verify_effect_models(const std::vector<std::vector<std::size_t>>& dims_list);
/// Symmetry, quantile round trips, monotonicity grid and a Monte Carlo check
/// with `draws` samples per parameter set.
SuiteResult verify_fdist(std::uint64_t seed, std::size_t draws);

}  // namespace rmfm

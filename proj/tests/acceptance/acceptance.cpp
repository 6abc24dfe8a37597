// Acceptance run: one PASS/FAIL line per criterion, with timings.

#include "rmfm/dominance.hpp"
#include "rmfm/effects.hpp"
#include "rmfm/exactlin.hpp"
#include "rmfm/fdist.hpp"
#include "rmfm/hypothesis.hpp"
#include "rmfm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace rmfm;

namespace {

using Columns = std::vector<std::vector<long>>;

RatMatrix from_columns(const Columns& cols) {
    RatMatrix m(cols.front().size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < cols[c].size(); ++r) m(r, c) = cols[c][r];
    return m;
}

const Columns c10_cols{{2, 2, 2, -1, -1, -1, -1, -1, -1}, {0, 0, 0, 1, 1, 1, -1, -1, -1}};

struct Layout {
    const char* name;
    std::vector<std::size_t> counts;
    std::map<std::string, Columns> table;  // off-diagonal targets, "tm"
};

// The off-diagonal targets, entered column by column in cell order (i, j) with j fastest.
const std::vector<Layout> layouts{
    {"N0",
     {1, 2, 3, 3, 1, 2, 3, 2, 1},
     {{"12", {{2, 3, 4, -1, 0, 1, -4, -3, -2}, {-2, -4, -3, 7, 5, 6, -2, -4, -3}}},
      {"13", {{1, 2, 3, 0, 0, 0, -3, -2, -1}, {-1, -2, -3, 6, 2, 4, -3, -2, -1}}},
      {"23", {{27, 42, 42, 18, 0, -14, -45, -42, -28}, {-255, -246, -585, 960, 452, 760, -705, -206, -175}}}}},
    {"N1",
     {6, 4, 4, 3, 2, 2, 3, 2, 2},
     {{"12", c10_cols},
      {"13", {{18, 12, 12, -3, -2, -2, -15, -10, -10}, {-3, -2, -2, 6, 4, 4, -3, -2, -2}}},
      {"23", {{18, 12, 12, -3, -2, -2, -15, -10, -10}, {-3, -2, -2, 6, 4, 4, -3, -2, -2}}}}},
    {"N2",
     {0, 2, 3, 3, 1, 2, 3, 2, 1},
     {{"12", {{45, 95, 130, -39, 11, 46, -141, -91, -56}, {-5, -14, -11, 25, 16, 19, -5, -14, -11}}},
      {"13", {{0, 36, 54, 3, 1, 2, -48, -32, -16}, {0, -12, -18, 30, 10, 20, -15, -10, -5}}},
      {"23", {{0, 12, 12, 9, 0, -4, -9, -12, -8}, {0, -156, -315, 360, 212, 370, -360, -56, -55}}}}},
};

const EffectId a_effect = EffectId::from_bits("10");

EffectSet model_set(int m) {
    return m == 1 ? EffectSet::a_only(2) : m == 2 ? EffectSet::additive(2) : EffectSet::all(2);
}

// sp(P_M K' P_tA) formed by explicit multiplication.
Subspace target(const CellLayout& layout, int t, int m) {
    const RatMatrix pm = projector(effect_model_matrix(model_set(m), layout.dims())).matrix();
    const Projector p = effect_projector(model_set(t), a_effect, layout);
    return colspace(pm * incidence(layout).transpose() * p.matrix());
}

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

int failures = 0;

void criterion(int number, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && secs > limit_seconds) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "took %.2f s, limit %.0f s", secs, limit_seconds);
        out.fail(buf);
    }
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", number, title, secs,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
}

RatVector seeded_response(std::size_t n, std::uint64_t seed) {
    InstanceRng rng(seed);
    RatVector y;
    for (std::size_t i = 0; i < n; ++i) y.emplace_back(rng.between(-40, 40), 4);
    return y;
}

// m * b * sum_i (ybar_i.. - ybar...)^2 from cell means of cell-ordered balanced data.
Rat balanced_a_ss(const RatVector& y, std::size_t a, std::size_t b, std::size_t m) {
    std::vector<Rat> row(a, Rat(0));
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t r = 0; r < m; ++r) row[i] += y[(i * b + j) * m + r];
        row[i] /= static_cast<long>(b * m);
    }
    Rat grand = 0;
    for (const auto& v : row) grand += v;
    grand /= static_cast<long>(a);
    Rat ss = 0;
    for (const auto& v : row) ss += (v - grand) * (v - grand);
    return ss * static_cast<long>(m * b);
}

std::vector<EffectSet> nonempty_subsets(std::size_t f) {
    const auto effects = all_effects(f);
    std::vector<EffectSet> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << effects.size()); ++mask) {
        std::vector<EffectId> members;
        for (std::size_t i = 0; i < effects.size(); ++i)
            if (mask >> i & 1) members.push_back(effects[i]);
        out.emplace_back(members);
    }
    return out;
}

}  // namespace

int main() {
    const std::uint64_t seed = 7;

    criterion(1, "reference testing targets for N0, N1, N2", 5.0, [](Outcome& out) {
        int checks = 0;
        for (const auto& l : layouts) {
            const CellLayout layout({3, 3}, l.counts);
            for (const auto& [tm, cols] : l.table) {
                ++checks;
                const Subspace got = target(layout, tm[0] - '0', tm[1] - '0');
                if (!(got == colspace(from_columns(cols)))) out.fail(std::string(l.name) + " G" + tm + " differs");
            }
        }
        if (checks != 9) out.fail("expected 9 checks");
    });

    criterion(2, "diagonal targets and the N1 type 1 saturated-model target", 0, [](Outcome& out) {
        const Subspace c10 = colspace(from_columns(c10_cols));
        const Subspace n2_g33 = colspace(from_columns({{0, 0, 0, 1, 1, 1, -1, -1, -1}}));
        for (const auto& l : layouts) {
            const CellLayout layout({3, 3}, l.counts);
            const bool n2 = std::string(l.name) == "N2";
            for (int d = 1; d <= 3; ++d) {
                const Subspace expect = (n2 && d == 3) ? n2_g33 : c10;
                if (!(target(layout, d, d) == expect))
                    out.fail(std::string(l.name) + " G" + std::to_string(d) + std::to_string(d));
            }
        }
        const CellLayout n1({3, 3}, layouts[1].counts);
        const Subspace h10 = colspace(h_projector(a_effect, {3, 3}).matrix());
        if (intersect(target(n1, 1, 3), h10).dim() != 0) out.fail("N1 G13 meets sp(H10)");
    });

    criterion(3, "restriction characterization on 500 random models", 30.0, [seed](Outcome& out) {
        SuiteResult suite{"prop1", 0, {}};
        InstanceRng rng(seed);
        std::size_t zero_g = 0, outside = 0, rank_deficient = 0, ss_checks = 0;
        for (int i = 0; i < 500; ++i) {
            const auto inst = random_restriction_instance(rng);
            const Subspace row_space = colspace(inst.x.transpose());
            if (inst.g.is_zero()) ++zero_g;
            if (!row_space.contains(inst.g)) ++outside;
            if (rank(inst.x) < inst.x.cols()) ++rank_deficient;
            check_restriction_instance(inst, rng, suite);

            // SSE difference by fitting both models from scratch.
            const LinearModel model(inst.x);
            const RatMatrix xn = inst.x * restriction_nullbasis({inst.g});
            const Rat direct = sse(inst.y, xn) - sse(inst.y, inst.x);
            if (rmfm_ss(inst.y, model, {inst.g}) != direct) out.fail("SS differs from the SSE difference");
            ++ss_checks;
        }
        if (!suite.passed()) out.fail(suite.failures.front());
        if (zero_g == 0) out.fail("no instance with G = 0");
        if (outside == 0) out.fail("no instance with G outside sp(X')");
        if (rank_deficient == 0) out.fail("no rank-deficient X");
        std::printf("  %zu checks; G = 0 in %zu, G outside sp(X') in %zu, rank-deficient X in %zu instances\n",
                    suite.checks + ss_checks, zero_g, outside, rank_deficient);
    });

    criterion(4, "competing numerator matrices on 200 random models", 0, [seed](Outcome& out) {
        InstanceRng rng(seed);
        std::size_t wider = 0;
        for (int i = 0; i < 200; ++i) {
            const auto inst = random_dominance_instance(rng);
            const auto r = check_dominance(inst.x, inst.h, inst.l);
            const std::string tag = "instance " + std::to_string(i) + ": ";
            if (!r.span_recovered) out.fail(tag + "span");
            if (!r.containment) out.fail(tag + "containment");
            if (!r.nnd_holds) out.fail(tag + "nnd");
            if (!(r.df.nu_h == r.df.nu_pxl && r.df.nu_h <= r.df.nu_l && r.df.nu_l <= r.df.upper)) out.fail(tag + "df");
            if (!r.q_idempotent) out.fail(tag + "Q");
            if (r.df.nu_l > r.df.nu_h) ++wider;
        }
        if (wider == 0) out.fail("no instance with more numerator df than H");
        std::printf("  L has extra df in %zu of 200 instances\n", wider);
    });

    criterion(5, "column omission identities up to 4x4x3 under two contrast sets", 0, [](Outcome& out) {
        const std::vector<std::vector<std::size_t>> dims_list{{2},    {3},    {4},       {2, 2},    {2, 3},
                                                              {3, 3}, {4, 4}, {2, 2, 2}, {2, 3, 2}, {4, 4, 3}};
        const SuiteResult suite = verify_effect_models(dims_list);
        if (!suite.passed()) out.fail(suite.failures.front());
        std::printf("  %zu checks\n", suite.checks);
    });

    criterion(6, "balanced closed form for effect projectors and the A sum of squares", 0, [seed](Outcome& out) {
        for (std::size_t m = 1; m <= 3; ++m)
            for (std::size_t a = 2; a <= 3; ++a)
                for (std::size_t b = 2; b <= 3; ++b) {
                    const CellLayout layout = CellLayout::uniform({a, b}, m);
                    const RatVector y = seeded_response(layout.observations(), seed + m * 100 + a * 10 + b);
                    const Rat oracle = balanced_a_ss(y, a, b, m);
                    const std::string tag = std::to_string(a) + "x" + std::to_string(b) + " m=" + std::to_string(m);
                    for (const auto& set : nonempty_subsets(2))
                        for (const auto& j : set.members()) {
                            const RatMatrix expect = kron(h_projector(j, layout.dims()).matrix(), u_matrix(m).matrix());
                            const Projector p = effect_projector(set, j, layout);
                            if (!(p.matrix() == expect)) out.fail(tag + " effect " + j.bit_string());
                            if (j == a_effect && quadratic_form(p.matrix(), y) != oracle)
                                out.fail(tag + " A SS differs from the cell-mean formula");
                        }
                    for (SsType t : {SsType::Type1, SsType::Type2, SsType::Type3})
                        if (type_ss(t, a_effect, layout, y).ss_num != oracle) out.fail(tag + " type SS");
                }
    });

    criterion(7, "types agree on balanced data and differ on N0", 0, [seed](Outcome& out) {
        for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 2}, {3, 3}, {2, 4}})
            for (std::size_t m = 1; m <= 3; ++m) {
                const CellLayout layout = CellLayout::uniform(dims, m);
                const RatVector y = seeded_response(layout.observations(), seed + m);
                for (const auto& j : {a_effect, EffectId::from_bits("01"), EffectId::from_bits("11")}) {
                    const Rat s1 = type_ss(SsType::Type1, j, layout, y).ss_num;
                    if (type_ss(SsType::Type2, j, layout, y).ss_num != s1 ||
                        type_ss(SsType::Type3, j, layout, y).ss_num != s1)
                        out.fail("balanced types differ for effect " + j.bit_string());
                }
            }
        const CellLayout n0({3, 3}, layouts[0].counts);
        const RatVector y = seeded_response(n0.observations(), seed);
        const Rat s1 = type_ss(SsType::Type1, a_effect, n0, y).ss_num;
        const Rat s2 = type_ss(SsType::Type2, a_effect, n0, y).ss_num;
        const Rat s3 = type_ss(SsType::Type3, a_effect, n0, y).ss_num;
        if (s1 == s2 || s2 == s3 || s1 == s3) out.fail("N0 types are not pairwise different");
        std::printf("  N0 A SS: type 1 %.6g, type 2 %.6g, type 3 %.6g\n", s1.get_d(), s2.get_d(), s3.get_d());
    });

    criterion(8, "F distribution numerics with Monte Carlo oracles", 120.0, [seed](Outcome& out) {
        const SuiteResult suite = verify_fdist(seed, 10'000'000);
        if (!suite.passed()) out.fail(suite.failures.front());

        // Empirical upper 5% point of F(2, 10) from (chi2_2/2)/(chi2_10/10). The
        // sample quantile lies within 2e-3 of q exactly when fewer than 95% of the
        // draws fall below q - 2e-3 and more than 95% fall below q + 2e-3. The
        // density there is about 0.028, so 2e8 draws put the band near 4 standard
        // errors wide on each side.
        const double q = f_quantile(0.05, 2, 10);
        std::mt19937_64 gen(seed);
        std::exponential_distribution<double> half_chi2_2(1.0);  // chi2_2 / 2
        std::chi_squared_distribution<double> chi2_10(10.0);
        const std::size_t draws = 200'000'000;
        std::size_t below_lo = 0, below_hi = 0;
        for (std::size_t i = 0; i < draws; ++i) {
            const double v = half_chi2_2(gen) / (chi2_10(gen) / 10.0);
            below_lo += v <= q - 2e-3;
            below_hi += v <= q + 2e-3;
        }
        const double lo = double(below_lo) / double(draws);
        const double hi = double(below_hi) / double(draws);
        if (!(lo < 0.95 && hi > 0.95))
            out.fail("empirical quantile outside q +- 2e-3 (fractions " + std::to_string(lo) + ", " +
                     std::to_string(hi) + ")");
        std::printf("  %zu checks; upper 5%% point of F(2,10) %.6f; empirical fraction below q-2e-3 %.6f, below q+2e-3 %.6f\n",
                    suite.checks, q, lo, hi);
    });

    return failures == 0 ? 0 : 1;
}

#include "rmfm/verify.hpp"

#include "rmfm/dominance.hpp"
#include "rmfm/fdist.hpp"
#include "rmfm/hypothesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace rmfm {

long InstanceRng::between(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
}

RatMatrix random_matrix(InstanceRng& rng, std::size_t rows, std::size_t cols, long bound) {
    RatMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.between(-bound, bound);
    return m;
}

RatMatrix random_low_rank(InstanceRng& rng, std::size_t rows, std::size_t cols, std::size_t r, long bound) {
    return random_matrix(rng, rows, r, bound) * random_matrix(rng, r, cols, bound);
}

namespace {

std::string shape(const RatMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

// Unit upper triangular with random signs on the diagonal: always nonsingular.
RatMatrix random_nonsingular(InstanceRng& rng, std::size_t n) {
    RatMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = rng.chance(2) ? 1 : -1;
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = rng.between(-2, 2);
    }
    return a;
}

RatMatrix random_model_matrix(InstanceRng& rng, std::size_t n, std::size_t p) {
    for (;;) {
        RatMatrix x;
        switch (rng.between(0, 2)) {
            case 0:
                x = random_matrix(rng, n, p);
                break;
            case 1:
                x = random_low_rank(rng, n, p, static_cast<std::size_t>(rng.between(1, static_cast<long>(std::min(n, p)))));
                break;
            default: {
                // Repeated and zero columns.
                x = random_matrix(rng, n, p);
                if (p > 1) {
                    auto src = static_cast<std::size_t>(rng.between(0, static_cast<long>(p) - 1));
                    auto dst = static_cast<std::size_t>(rng.between(0, static_cast<long>(p) - 1));
                    for (std::size_t r = 0; r < n; ++r) x(r, dst) = x(r, src) * 2;
                    auto zero = static_cast<std::size_t>(rng.between(0, static_cast<long>(p) - 1));
                    if (zero != src && zero != dst)
                        for (std::size_t r = 0; r < n; ++r) x(r, zero) = 0;
                }
            }
        }
        if (!x.is_zero()) return x;
    }
}

// SSE from the normal equations, independent of the projector construction.
Rat normal_equation_sse(std::span<const Rat> y, const RatMatrix& m) {
    Rat yy = dot(y, y);
    if (m.cols() == 0) return yy;
    const RatMatrix mt = m.transpose();
    auto b = solve(mt * m, mt * y);
    if (!b) throw std::logic_error("normal equations are always consistent");
    RatVector fitted = m * std::span<const Rat>(*b);
    Rat sse;
    for (std::size_t i = 0; i < y.size(); ++i) {
        Rat r = y[i] - fitted[i];
        sse += r * r;
    }
    return sse;
}

}  // namespace

RestrictionInstance random_restriction_instance(InstanceRng& rng) {
    const auto n = static_cast<std::size_t>(rng.between(1, 12));
    const auto p = static_cast<std::size_t>(rng.between(1, 7));
    RestrictionInstance inst;
    inst.x = random_model_matrix(rng, n, p);

    const auto g = static_cast<std::size_t>(rng.between(1, static_cast<long>(p) + 1));
    switch (rng.between(0, 4)) {
        case 0:
            inst.g = RatMatrix(p, g);
            break;
        case 1:
            inst.g = random_matrix(rng, p, g);
            break;
        case 2:
            inst.g = inst.x.transpose() * random_matrix(rng, n, g);
            break;
        case 3:
            inst.g = hconcat(inst.x.transpose() * random_matrix(rng, n, 1), random_matrix(rng, p, g));
            break;
        default:
            inst.g = RatMatrix::identity(p);
    }
    inst.y = random_matrix(rng, n, 1, 5).col(0);
    return inst;
}

void check_restriction_instance(const RestrictionInstance& inst, InstanceRng& rng, SuiteResult& out) {
    const std::string tag = "X " + shape(inst.x) + ", G " + shape(inst.g) + ": ";
    const LinearModel model(inst.x);
    const HypothesisSpec spec{inst.g};
    const RatMatrix xt = inst.x.transpose();

    std::optional<Projector> p;
    try {
        p = rmfm_projector(model, spec);
    } catch (const std::exception& e) {
        out.expect(false, tag + "P_X - P_XN is not a projector: " + e.what());
        return;
    }

    const Subspace row_space = colspace(xt);
    const Subspace g_space = colspace(inst.g);
    const Subspace estimable = intersect(row_space, g_space);
    out.expect(estimable == intersect_by_complements(row_space, g_space), tag + "intersection routes disagree");
    out.expect(colspace(xt * p->matrix()) == estimable, tag + "sp(X'P_H) differs from sp(X') n sp(G)");

    // An H built from the estimable part alone must reproduce P_X - P_XN.
    const RatMatrix xtx = xt * inst.x;
    std::vector<RatVector> columns;
    for (std::size_t c = 0; c < estimable.dim(); ++c) {
        auto w = solve(xtx, estimable.basis().col(c));
        if (!w) {
            out.expect(false, tag + "estimable vector not reachable from X'X");
            return;
        }
        columns.push_back(inst.x * std::span<const Rat>(*w));
    }
    RatMatrix h = columns.empty() ? RatMatrix(inst.x.rows(), 1)
                                  : RatMatrix::from_columns(inst.x.rows(), columns) *
                                        random_nonsingular(rng, columns.size());
    if (!columns.empty() && rng.chance(2)) h = hconcat(h, RatMatrix::column(h.col(0)) * Rat(3));
    out.expect(colspace(xt * h) == estimable, tag + "constructed H does not test the estimable part");
    out.expect(projector(h) == *p, tag + "P_H differs from P_X - P_XN");

    // Adding a direction of sp(XN) breaks both sides of the equivalence.
    const RatMatrix pxn = model.projector().matrix() - p->matrix();
    for (std::size_t c = 0; c < pxn.cols(); ++c) {
        RatMatrix extra = RatMatrix::column(pxn.col(c));
        if (extra.is_zero()) continue;
        RatMatrix h_bad = hconcat(h, extra);
        out.expect(!(projector(h_bad) == *p), tag + "widened H still equals P_X - P_XN");
        out.expect(!(colspace(xt * h_bad) == estimable), tag + "widened H still tests the estimable part");
        break;
    }

    const RatMatrix xn = inst.x * restriction_nullbasis(spec);
    const Rat ss = rmfm_ss(inst.y, model, spec);
    out.expect(ss == normal_equation_sse(inst.y, xn) - normal_equation_sse(inst.y, inst.x),
               tag + "RMFM SS differs from SSE_XN - SSE_X");
    out.expect(sgn(ss) >= 0, tag + "negative RMFM SS");
}

DominanceInstance random_dominance_instance(InstanceRng& rng) {
    const auto n = static_cast<std::size_t>(rng.between(2, 10));
    const auto p = static_cast<std::size_t>(rng.between(1, 6));
    DominanceInstance inst;
    inst.x = random_model_matrix(rng, n, p);
    const auto hcols = static_cast<std::size_t>(rng.between(1, 3));
    inst.h = inst.x * random_matrix(rng, p, hcols);

    const RatMatrix w = complement(colspace(inst.x)).basis();
    inst.l = inst.h * random_nonsingular(rng, hcols);
    if (w.cols() > 0) {
        inst.l += w * random_matrix(rng, w.cols(), hcols, 2);
        if (rng.chance(2))
            inst.l = hconcat(inst.l, w * random_matrix(rng, w.cols(), static_cast<std::size_t>(rng.between(1, 2)), 2));
    }
    return inst;
}

Subspace a_effect_target(const CellLayout& layout, int type, int model, const ContrastScheme& scheme) {
    auto nested = [&](int which) {
        switch (which) {
            case 1:
                return EffectSet::a_only(layout.factors());
            case 2:
                return EffectSet::additive(layout.factors());
            case 3:
                return EffectSet::all(layout.factors());
        }
        throw std::invalid_argument("type and model indices run from 1 to 3");
    };
    const EffectId a = EffectId::from_letters("A", layout.factors());
    const Projector p = effect_projector(nested(type), a, layout, scheme);
    return testing_target(effect_model_matrix(nested(model), layout.dims(), scheme), incidence(layout), p);
}

ContrastScheme reference_level_contrasts(const std::vector<std::size_t>& dims) {
    std::vector<std::optional<RatMatrix>> per_factor;
    for (auto m : dims) {
        RatMatrix c(m, m - 1);
        for (std::size_t j = 0; j + 1 < m; ++j) {
            c(j, j) = 1;
            c(m - 1, j) = -1;
        }
        per_factor.emplace_back(std::move(c));
    }
    return ContrastScheme::user_supplied(std::move(per_factor));
}

SuiteResult verify_reference_table(const ReferenceTable& table) {
    SuiteResult out{"table1", 0, {}};
    for (const auto& ref : table.layouts) {
        const Subspace a_effects = colspace(h_projector(EffectId::from_letters("A", 2), ref.layout.dims()).matrix());
        for (const auto& [key, expected] : ref.targets) {
            const int t = key.at(1) - '0';
            const int m = key.at(2) - '0';
            const Subspace computed = a_effect_target(ref.layout, t, m);
            out.expect(computed == colspace(expected), ref.name + " " + key + ": span differs from the reference");
            if (t == m) out.expect(a_effects.contains(computed.basis()), ref.name + " " + key + " leaves the A effects");
        }
        for (const auto& [key, dim] : ref.a_effect_overlap) {
            const Subspace computed = a_effect_target(ref.layout, key.at(1) - '0', key.at(2) - '0');
            out.expect(intersect(computed, a_effects).dim() == dim,
                       ref.name + " " + key + ": overlap with A effects is not " + std::to_string(dim));
        }
    }
    return out;
}

SuiteResult verify_restriction(std::uint64_t seed, std::size_t trials) {
    SuiteResult out{"prop1", 0, {}};
    InstanceRng rng(seed);
    for (std::size_t i = 0; i < trials; ++i) check_restriction_instance(random_restriction_instance(rng), rng, out);
    return out;
}

SuiteResult verify_dominance(std::uint64_t seed, std::size_t trials) {
    SuiteResult out{"prop2", 0, {}};
    InstanceRng rng(seed);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto inst = random_dominance_instance(rng);
        const std::string tag = "trial " + std::to_string(i) + ": ";
        try {
            const auto r = check_dominance(inst.x, inst.h, inst.l);
            out.expect(r.span_recovered, tag + "sp(P_X L) != sp(H)");
            out.expect(r.containment, tag + "sp(L) not in sp(H) + sp(X)^perp");
            out.expect(r.nnd_holds, tag + "X'P_H X - X'P_L X is not nnd");
            out.expect(r.df.holds(), tag + "degrees-of-freedom sandwich fails");
            out.expect(r.q_idempotent, tag + "P_H + I - P_X - P_L is not a projector");
        } catch (const std::exception& e) {
            out.expect(false, tag + e.what());
        }
    }
    return out;
}

SuiteResult verify_effect_models(const std::vector<std::vector<std::size_t>>& dims_list) {
    SuiteResult out{"prop3", 0, {}};
    for (const auto& dims : dims_list) {
        std::string label = "dims (";
        for (std::size_t k = 0; k < dims.size(); ++k) label += (k ? "," : "") + std::to_string(dims[k]);
        label += ") ";

        const auto effects = all_effects(dims.size());
        const std::size_t subsets = std::size_t{1} << effects.size();
        const std::array<ContrastScheme, 2> schemes{ContrastScheme::paper_helmert(), reference_level_contrasts(dims)};

        std::vector<Projector> h;
        std::vector<Subspace> h_space;
        RatMatrix total(h_projector(effects[0], dims).size(), h_projector(effects[0], dims).size());
        for (const auto& j : effects) {
            h.push_back(h_projector(j, dims));
            h_space.push_back(colspace(h.back().matrix()));
            total += h.back().matrix();
        }
        out.expect(total == RatMatrix::identity(total.rows()), label + "effect projectors do not sum to I");
        for (std::size_t a = 0; a < h.size(); ++a)
            for (std::size_t b = a + 1; b < h.size(); ++b)
                out.expect((h[a].matrix() * h[b].matrix()).is_zero(),
                           label + effects[a].bit_string() + " and " + effects[b].bit_string() + " not orthogonal");

        std::vector<Subspace> h_span(subsets, Subspace(total.rows()));
        for (std::size_t mask = 1; mask < subsets; ++mask) {
            RatMatrix h_sum(total.rows(), total.cols());
            for (std::size_t e = 0; e < effects.size(); ++e)
                if (mask & (std::size_t{1} << e)) h_sum += h[e].matrix();
            h_span[mask] = colspace(h_sum);
        }

        std::vector<Subspace> first_scheme_spans;
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            const std::string tag = label + (s == 0 ? "default contrasts: " : "reference-level contrasts: ");
            for (std::size_t e = 0; e < effects.size(); ++e)
                out.expect(projector(c_block(effects[e], dims, schemes[s])) == h[e],
                           tag + "P_C != H for " + effects[e].bit_string());

            std::vector<Subspace> c_span(subsets, Subspace(total.rows()));
            for (std::size_t mask = 1; mask < subsets; ++mask) {
                std::vector<EffectId> members;
                for (std::size_t e = 0; e < effects.size(); ++e)
                    if (mask & (std::size_t{1} << e)) members.push_back(effects[e]);
                c_span[mask] = colspace(effect_model_matrix(EffectSet(members), dims, schemes[s]));
                out.expect(c_span[mask] == h_span[mask], tag + "sp(C_J) != sp(H_J) for mask " + std::to_string(mask));
            }
            for (std::size_t mask = 1; mask < subsets; ++mask)
                for (std::size_t e = 0; e < effects.size(); ++e) {
                    const std::size_t bit = std::size_t{1} << e;
                    if (!(mask & bit)) continue;
                    out.expect(c_span[mask & ~bit] == orthogonal_part(c_span[mask], h_space[e]),
                               tag + "omitting " + effects[e].bit_string() + " from mask " + std::to_string(mask) +
                                   " is not the restricted model");
                }
            if (s == 0)
                first_scheme_spans = c_span;
            else
                for (std::size_t mask = 1; mask < subsets; ++mask)
                    out.expect(c_span[mask] == first_scheme_spans[mask],
                               label + "model span depends on the contrasts for mask " + std::to_string(mask));
        }
    }
    return out;
}

SuiteResult verify_fdist(std::uint64_t seed, std::size_t draws) {
    SuiteResult out{"fdist", 0, {}};
    auto near = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };
    auto fmt = [](double v) {
        std::ostringstream s;
        s.precision(15);
        s << v;
        return s.str();
    };

    for (double nu : {1.0, 2.0, 5.0, 10.0, 30.0}) {
        const double c = f_cdf(1.0, {nu, nu, 0.0});
        out.expect(near(c, 0.5, 1e-12), "f_cdf(1; " + fmt(nu) + "," + fmt(nu) + ") = " + fmt(c));
        const double q = f_quantile(0.5, nu, nu);
        out.expect(near(q, 1.0, 1e-9), "median quantile at nu1 = nu2 = " + fmt(nu) + " is " + fmt(q));
    }
    for (auto [nu1, nu2] : {std::pair{1.0, 1.0}, {2.0, 10.0}, {5.0, 3.0}, {4.0, 40.0}})
        for (double alpha : {0.01, 0.05, 0.5, 0.95}) {
            const double q = f_quantile(alpha, nu1, nu2);
            const double c = f_cdf(q, {nu1, nu2, 0.0});
            out.expect(near(c, 1.0 - alpha, 1e-10), "quantile round trip alpha " + fmt(alpha) + " gives " + fmt(c));
        }
    for (double alpha : {0.01, 0.05, 0.1}) {
        const double pw = power(alpha, 3.0, 12.0, 0.0);
        out.expect(near(pw, alpha, 1e-10), "power at zero ncp is " + fmt(pw) + ", not alpha " + fmt(alpha));
    }
    out.expect(f_cdf(0.0, {3.0, 7.0, 2.0}) == 0.0, "f_cdf(0) != 0");
    out.expect(near(f_cdf(1e8, {3.0, 7.0, 2.0}), 1.0, 1e-10), "f_cdf does not reach 1");

    // Power: nondecreasing in ncp and nu2, nonincreasing in nu1; strict when ncp > 0.
    const std::array alphas{0.01, 0.05, 0.1, 0.25};
    const std::array nu2s{4.0, 8.0, 16.0, 32.0};
    const std::array ncps{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    constexpr double slack = 1e-10;
    for (double alpha : alphas)
        for (int nu1 = 1; nu1 <= 6; ++nu1)
            for (double nu2 : nu2s)
                for (double ncp : ncps) {
                    const double base = power(alpha, nu1, nu2, ncp);
                    const std::string at = "alpha " + fmt(alpha) + " nu1 " + std::to_string(nu1) + " nu2 " + fmt(nu2) +
                                           " ncp " + fmt(ncp) + ": ";
                    if (ncp != ncps.back()) {
                        const double next = power(alpha, nu1, nu2, *(std::find(ncps.begin(), ncps.end(), ncp) + 1));
                        out.expect(next > base, at + "power not increasing in ncp");
                    }
                    if (nu1 < 6) {
                        const double next = power(alpha, nu1 + 1, nu2, ncp);
                        out.expect(ncp > 0 ? next < base : next <= base + slack, at + "power not decreasing in nu1");
                    }
                    if (nu2 != nu2s.back()) {
                        const double next = power(alpha, nu1, *(std::find(nu2s.begin(), nu2s.end(), nu2) + 1), ncp);
                        out.expect(ncp > 0 ? next > base : next + slack >= base, at + "power not increasing in nu2");
                    }
                }

    // Monte Carlo: noncentral chi-square as (Z + sqrt(ncp))^2 + chi2(nu1 - 1).
    if (draws > 0) {
        std::mt19937_64 engine(seed);
        struct Case {
            int nu1;
            int nu2;
            double ncp;
            std::array<double, 3> xs;
        };
        const std::array cases{Case{2, 10, 4.0, {1.0, 3.0, 6.0}}, Case{1, 5, 0.0, {0.5, 2.0, 6.6}},
                               Case{4, 20, 2.5, {0.8, 1.5, 3.0}}, Case{3, 8, 9.0, {1.0, 3.5, 8.0}}};
        for (const auto& c : cases) {
            std::normal_distribution<double> normal;
            std::chi_squared_distribution<double> num_rest(c.nu1 > 1 ? c.nu1 - 1 : 1);
            std::chi_squared_distribution<double> den(c.nu2);
            std::array<std::size_t, 3> below{};
            const double shift = std::sqrt(c.ncp);
            for (std::size_t i = 0; i < draws; ++i) {
                const double z = normal(engine) + shift;
                double numerator = z * z;
                if (c.nu1 > 1) numerator += num_rest(engine);
                const double f = (numerator / c.nu1) / (den(engine) / c.nu2);
                for (std::size_t k = 0; k < c.xs.size(); ++k)
                    if (f <= c.xs[k]) ++below[k];
            }
            for (std::size_t k = 0; k < c.xs.size(); ++k) {
                const double exact = f_cdf(c.xs[k], {double(c.nu1), double(c.nu2), c.ncp});
                const double empirical = double(below[k]) / double(draws);
                const double se = std::sqrt(exact * (1.0 - exact) / double(draws));
                out.expect(std::fabs(empirical - exact) <= 3.0 * se,
                           "Monte Carlo at x " + fmt(c.xs[k]) + " (nu1 " + std::to_string(c.nu1) + ", nu2 " +
                               std::to_string(c.nu2) + ", ncp " + fmt(c.ncp) + "): empirical " + fmt(empirical) +
                               " vs " + fmt(exact) + ", 3 SE = " + fmt(3 * se));
            }
        }
    }
    return out;
}

}  // namespace rmfm

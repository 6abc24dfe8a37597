#include "rmfm/hypothesis.hpp"

#include "rmfm/fdist.hpp"

#include <algorithm>

namespace rmfm {

namespace {

void check_spec(const LinearModel& model, const HypothesisSpec& spec) {
    if (spec.g.rows() != model.parameters())
        throw DimensionError("hypothesis matrix has " + std::to_string(spec.g.rows()) + " rows, model has " +
                             std::to_string(model.parameters()) + " columns");
}

void check_response(std::span<const Rat> y, std::size_t n) {
    if (y.size() != n)
        throw DimensionError("response has length " + std::to_string(y.size()) + ", expected " + std::to_string(n));
}

}  // namespace

LinearModel::LinearModel(RatMatrix x) : x_(std::move(x)), px_(rmfm::projector(x_)), rank_(px_.rank()) {
    if (x_.rows() == 0) throw std::invalid_argument("model matrix needs at least one row");
    if (x_.is_zero()) throw std::invalid_argument("model matrix needs at least one non-zero entry");
}

ParamPoint::ParamPoint(RatVector b, Rat s2) : beta(std::move(b)), sigma2(std::move(s2)) {
    if (sgn(sigma2) <= 0) throw std::invalid_argument("sigma2 must be positive");
}

RatMatrix restriction_nullbasis(const HypothesisSpec& spec) { return complement(colspace(spec.g)).basis(); }

Projector rmfm_projector(const LinearModel& model, const HypothesisSpec& spec) {
    check_spec(model, spec);
    const RatMatrix xn = model.x() * restriction_nullbasis(spec);
    return Projector::from_matrix(model.projector().matrix() - projector(xn).matrix());
}

Rat rmfm_ss(std::span<const Rat> y, const LinearModel& model, const HypothesisSpec& spec) {
    check_response(y, model.observations());
    return quadratic_form(rmfm_projector(model, spec).matrix(), y);
}

Rat sse(std::span<const Rat> y, const RatMatrix& m) {
    check_response(y, m.rows());
    return dot(y, y) - quadratic_form(projector(m).matrix(), y);
}

Subspace estimable_part(const LinearModel& model, const HypothesisSpec& spec) {
    check_spec(model, spec);
    const RatMatrix xt = model.x().transpose();
    Subspace direct = intersect(colspace(xt), colspace(spec.g));
    Subspace via_projector = colspace(xt * rmfm_projector(model, spec).matrix());
    if (!(direct == via_projector))
        throw std::logic_error("estimable part: intersection and projector routes disagree");
    return direct;
}

Subspace testing_target(const RatMatrix& m, const RatMatrix& k, const Projector& p) {
    if (k.cols() != m.rows() || k.rows() != p.size())
        throw DimensionError("testing_target: K must be n x cells with M cells x q and P n x n");
    return colspace(projector(m).matrix() * (k.transpose() * p.matrix()));
}

Rat ncp(const Projector& p, const LinearModel& model, const ParamPoint& point) {
    if (point.beta.size() != model.parameters()) throw DimensionError("ncp: beta has the wrong length");
    if (p.size() != model.observations()) throw DimensionError("ncp: projector size does not match the model");
    const RatVector mu = model.x() * std::span<const Rat>(point.beta);
    return quadratic_form(p.matrix(), mu) / point.sigma2;
}

TestResult test_result(std::span<const Rat> y, const Projector& p, const Projector& q) {
    if (p.size() != q.size()) throw DimensionError("numerator and denominator projectors differ in size");
    check_response(y, p.size());
    if (!(p.matrix() * q.matrix()).is_zero())
        throw PreconditionError("numerator and denominator projectors are not orthogonal (PQ != 0)");

    TestResult r;
    r.ss_num = quadratic_form(p.matrix(), y);
    r.nu_num = p.rank();
    r.ss_den = quadratic_form(q.matrix(), y);
    r.nu_den = q.rank();
    r.estimable_part = Subspace(p.size());
    if (r.nu_num > 0 && r.nu_den > 0 && sgn(r.ss_den) > 0)
        r.f_value = (r.ss_num / static_cast<long>(r.nu_num)) / (r.ss_den / static_cast<long>(r.nu_den));
    return r;
}

TestResult f_statistic(std::span<const Rat> y, const Projector& p, const Projector& q) {
    TestResult r = test_result(y, p, q);
    if (r.nu_num == 0) throw UndefinedStatistic("F is undefined: numerator has zero degrees of freedom");
    if (r.nu_den == 0) throw UndefinedStatistic("F is undefined: denominator has zero degrees of freedom");
    if (sgn(r.ss_den) == 0) throw UndefinedStatistic("F is undefined: denominator sum of squares is zero");
    return r;
}

TestResult f_statistic(std::span<const Rat> y, const Projector& p, const Projector& q, const LinearModel& model) {
    if (q.size() != model.observations()) throw DimensionError("denominator projector does not match the model");
    if (!(q.matrix() * model.x()).is_zero())
        throw PreconditionError("denominator projector is not orthogonal to the model space");
    return f_statistic(y, p, q);
}

RatVector adjust_rhs(std::span<const Rat> y, const LinearModel& model, const HypothesisSpec& spec,
                     std::span<const Rat> c0) {
    check_spec(model, spec);
    check_response(y, model.observations());
    if (c0.size() != spec.g.cols())
        throw DimensionError("right-hand side has " + std::to_string(c0.size()) + " entries, G has " +
                             std::to_string(spec.g.cols()) + " columns");
    RatVector out(y.begin(), y.end());
    if (spec.g.cols() == 0) return out;

    // b0 = G w with G'G w = c0 is the minimum-norm solution; solvable iff c0 is in sp(G').
    const RatMatrix gt = spec.g.transpose();
    auto w = solve(gt * spec.g, c0);
    if (!w) throw PreconditionError("inconsistent right-hand side: G'b = c0 has no solution");
    const RatVector b0 = spec.g * std::span<const Rat>(*w);
    const RatVector shift = model.x() * std::span<const Rat>(b0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= shift[i];
    return out;
}

// --- ANOVA sums of squares ------------------------------------------------------

EffectSet type_model(SsType t, const EffectId& effect) {
    const auto effects = all_effects(effect.factors());
    std::vector<EffectId> members;
    switch (t) {
        case SsType::Type1: {
            auto key = [](const EffectId& j) { return std::pair{j.order(), j.index()}; };
            for (const auto& j : effects)
                if (key(j) <= key(effect)) members.push_back(j);
            break;
        }
        case SsType::Type2:
            for (const auto& j : effects) {
                bool contains_effect = true;
                for (std::size_t k = 0; k < j.factors(); ++k)
                    if (effect[k] && !j[k]) contains_effect = false;
                if (!contains_effect || j == effect) members.push_back(j);
            }
            break;
        case SsType::Type3:
            members = effects;
            break;
    }
    return EffectSet(std::move(members));
}

Projector effect_projector(const EffectSet& model, const EffectId& effect, const CellLayout& layout,
                           const ContrastScheme& scheme) {
    if (!model.contains(effect))
        throw std::invalid_argument("effect " + effect.letters() + " is not in the model");
    const RatMatrix k = incidence(layout);
    const RatMatrix full = k * effect_model_matrix(model, layout.dims(), scheme);
    const RatMatrix restricted = k * effect_model_matrix(model.without(effect), layout.dims(), scheme);
    return Projector::from_matrix(projector(full).matrix() - projector(restricted).matrix());
}

Projector saturated_residual(const CellLayout& layout) {
    const std::size_t n = layout.observations();
    return Projector::from_matrix(RatMatrix::identity(n) - projector(incidence(layout)).matrix());
}

TestResult type_ss(SsType t, const EffectId& effect, const CellLayout& layout, std::span<const Rat> y,
                   const ContrastScheme& scheme, const std::optional<Projector>& denominator) {
    if (effect.factors() != layout.factors())
        throw std::invalid_argument("effect " + effect.bit_string() + " does not match the layout");
    check_response(y, layout.observations());
    const EffectSet model = type_model(t, effect);
    const Projector p = effect_projector(model, effect, layout, scheme);
    const Projector q = denominator ? *denominator : saturated_residual(layout);

    TestResult r = test_result(y, p, q);
    r.estimable_part = testing_target(effect_model_matrix(model, layout.dims(), scheme), incidence(layout), p);
    if (r.f_value) r.p_value = p_value(r.f_value->get_d(), static_cast<double>(r.nu_num), static_cast<double>(r.nu_den));
    return r;
}

}  // namespace rmfm

#pragma once

// Restricted-model-minus-full-model (RMFM) numerator sums of squares.
//
// For the model sp(X) and the hypothesis G'b = 0, the restricted model is
// sp(XN) with sp(N) = sp(G)^perp, and the numerator matrix is P_X - P_XN.
// The SS it yields tests exactly the estimable part sp(X') n sp(G).

#include "rmfm/effects.hpp"
#include "rmfm/exactlin.hpp"

#include <optional>
#include <stdexcept>

namespace rmfm {

/// F statistic or p-value requested where it is not defined.
class UndefinedStatistic : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class LinearModel {
public:
    explicit LinearModel(RatMatrix x);

    const RatMatrix& x() const noexcept { return x_; }
    const Projector& projector() const noexcept { return px_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t observations() const noexcept { return x_.rows(); }
    std::size_t parameters() const noexcept { return x_.cols(); }

private:
    RatMatrix x_;
    Projector px_;
    std::size_t rank_;
};

struct HypothesisSpec {
    RatMatrix g;  // (k+1) x g; only its column space matters
};

struct ParamPoint {
    ParamPoint(RatVector beta, Rat sigma2);
    RatVector beta;
    Rat sigma2;
};

struct TestResult {
    Rat ss_num;
    std::size_t nu_num = 0;
    Rat ss_den;
    std::size_t nu_den = 0;
    std::optional<Rat> f_value;
    /// What the numerator tests. For type_ss this is a subspace of the cell-means space.
    Subspace estimable_part{0};
    std::optional<double> p_value;
};

enum class SsType { Type1 = 1, Type2 = 2, Type3 = 3 };

/// N with sp(N) = sp(G)^perp.
RatMatrix restriction_nullbasis(const HypothesisSpec& spec);

/// P_X - P_XN.
Projector rmfm_projector(const LinearModel& model, const HypothesisSpec& spec);

/// y'(P_X - P_XN)y.
Rat rmfm_ss(std::span<const Rat> y, const LinearModel& model, const HypothesisSpec& spec);

/// Residual sum of squares y'(I - P_M)y.
Rat sse(std::span<const Rat> y, const RatMatrix& m);

/// sp(X') n sp(G). Computed as an intersection and as sp(X' P_H); the two must agree.
Subspace estimable_part(const LinearModel& model, const HypothesisSpec& spec);

/// sp(P_M K' P): what SS_P tests about the cell means in the model sp(K M).
Subspace testing_target(const RatMatrix& m, const RatMatrix& k, const Projector& p);

/// beta' X' P X beta / sigma2.
Rat ncp(const Projector& p, const LinearModel& model, const ParamPoint& point);

/// Numerator and denominator pieces of F = (y'Py/nu_P) / (y'Qy/nu_Q). `f_value`
/// is left empty when nu_P = 0 or y'Qy = 0. Throws PreconditionError unless PQ = 0.
TestResult test_result(std::span<const Rat> y, const Projector& p, const Projector& q);

/// Like test_result but insists on a defined F; also checks Q X = 0 when a model is given.
TestResult f_statistic(std::span<const Rat> y, const Projector& p, const Projector& q);
TestResult f_statistic(std::span<const Rat> y, const Projector& p, const Projector& q, const LinearModel& model);

/// y - X b0, with b0 the minimum-norm solution of G' b0 = c0.
RatVector adjust_rhs(std::span<const Rat> y, const LinearModel& model, const HypothesisSpec& spec,
                     std::span<const Rat> c0);

// --- ANOVA sums of squares ----------------------------------------------------------

/// The model in which a type t SS for `effect` is the RMFM SS.
///   Type1: effects up to and including `effect` in (order, index) sequence;
///          for A in a two-factor layout this is {mean, A}.
///   Type2: every effect except those strictly containing `effect`.
///   Type3: the saturated model.
EffectSet type_model(SsType t, const EffectId& effect);

/// P_{K C_J} - P_{K C_(J \ effect)}.
Projector effect_projector(const EffectSet& model, const EffectId& effect, const CellLayout& layout,
                           const ContrastScheme& scheme = ContrastScheme::paper_helmert());

/// Residual projector of the saturated model, I - P_K.
Projector saturated_residual(const CellLayout& layout);

/// Type t SS for `effect`. `y` is in observation order (by cell, then replicate).
/// The denominator defaults to the saturated residual. The p-value is filled
/// in when F is defined.
TestResult type_ss(SsType t, const EffectId& effect, const CellLayout& layout, std::span<const Rat> y,
                   const ContrastScheme& scheme = ContrastScheme::paper_helmert(),
                   const std::optional<Projector>& denominator = std::nullopt);

}  // namespace rmfm

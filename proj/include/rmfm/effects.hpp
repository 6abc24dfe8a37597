#pragma once

// ANOVA effect machinery for f-factor layouts.
//
// Cells are ordered lexicographically in the factor levels with the last
// factor varying fastest, so for two factors cell (i, j) sits at i*b + j.
// Effects are binary tuples: bit k set means factor k enters through its
// contrasts (S projector), cleared means it is averaged out (U projector).

#include "rmfm/exactlin.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rmfm {

class EffectId {
public:
    explicit EffectId(std::vector<std::uint8_t> bits);
    /// "10", "011", ...
    static EffectId from_bits(const std::string& bits);
    /// Letter form: "A", "BC"; "1" or "mean" is the all-zero effect.
    static EffectId from_letters(const std::string& letters, std::size_t factors);
    /// Bit form when the text is exactly `factors` binary digits, letters otherwise.
    static EffectId parse(const std::string& text, std::size_t factors);

    std::size_t factors() const noexcept { return bits_.size(); }
    bool operator[](std::size_t k) const { return bits_[k] != 0; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::size_t order() const;  // number of factors involved
    /// Enumeration index: sum of bit k << k. Orders 00, 10, 01, 11 for two factors.
    std::size_t index() const;

    std::string bit_string() const;
    std::string letters() const;  // "mean" for the all-zero effect

    friend bool operator==(const EffectId&, const EffectId&) = default;
    friend bool operator<(const EffectId& a, const EffectId& b) { return a.index() < b.index(); }

private:
    std::vector<std::uint8_t> bits_;
};

/// Non-empty set of effects over the same number of factors, kept in enumeration order.
class EffectSet {
public:
    explicit EffectSet(std::vector<EffectId> members);

    static EffectSet all(std::size_t factors);
    /// Intercept plus all main effects.
    static EffectSet additive(std::size_t factors);
    /// Intercept plus the first factor's main effect.
    static EffectSet a_only(std::size_t factors);
    /// "00,10,01" or "1,A,B" style list.
    static EffectSet parse(const std::string& text, std::size_t factors);

    std::size_t factors() const noexcept { return members_.front().factors(); }
    const std::vector<EffectId>& members() const noexcept { return members_; }
    bool contains(const EffectId& j) const;
    /// Set minus one effect; nullopt when nothing is left.
    std::optional<EffectSet> without(const EffectId& j) const;

    friend bool operator==(const EffectSet&, const EffectSet&) = default;

private:
    std::vector<EffectId> members_;
};

std::vector<EffectId> all_effects(std::size_t factors);

class CellLayout {
public:
    /// `counts` in lexicographic cell order. Every level of every factor must
    /// be observed at least once; individual cells may be empty.
    CellLayout(std::vector<std::size_t> dims, std::vector<std::size_t> counts);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    std::size_t factors() const noexcept { return dims_.size(); }
    std::size_t cells() const noexcept { return counts_.size(); }
    std::size_t observations() const noexcept { return total_; }

    std::size_t cell_index(const std::vector<std::size_t>& levels) const;
    std::vector<std::size_t> cell_levels(std::size_t cell) const;
    bool balanced() const;

    static CellLayout uniform(std::vector<std::size_t> dims, std::size_t per_cell);

    friend bool operator==(const CellLayout&, const CellLayout&) = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> counts_;
    std::size_t total_ = 0;
};

class ContrastScheme {
public:
    /// Helmert-type columns: column j is 0 above row j, m-j at row j, -1 below.
    static ContrastScheme paper_helmert() { return ContrastScheme{}; }
    /// One optional matrix per factor; factors without one use the default.
    static ContrastScheme user_supplied(std::vector<std::optional<RatMatrix>> per_factor);

    bool is_default() const noexcept { return per_factor_.empty(); }
    /// Contrast matrix for factor `factor` with `levels` levels.
    RatMatrix matrix(std::size_t factor, std::size_t levels) const;

private:
    std::vector<std::optional<RatMatrix>> per_factor_;
};

/// Throws unless `c` is m x (m-1), has zero column sums and rank m-1.
void validate_contrasts(const RatMatrix& c);

Projector u_matrix(std::size_t m);
Projector s_matrix(std::size_t m);
Projector h_projector(const EffectId& j, const std::vector<std::size_t>& dims);
/// Sum of h_projector over the set.
Projector h_projector(const EffectSet& set, const std::vector<std::size_t>& dims);

RatMatrix contrast_matrix(std::size_t m);
RatMatrix contrast_matrix(std::size_t m, const ContrastScheme& scheme, std::size_t factor = 0);

RatMatrix c_block(const EffectId& j, const std::vector<std::size_t>& dims,
                  const ContrastScheme& scheme = ContrastScheme::paper_helmert());
RatMatrix effect_model_matrix(const EffectSet& set, const std::vector<std::size_t>& dims,
                              const ContrastScheme& scheme = ContrastScheme::paper_helmert());
/// Like effect_model_matrix, but an empty set gives a cells x 0 matrix.
RatMatrix effect_model_matrix(const std::optional<EffectSet>& set, const std::vector<std::size_t>& dims,
                              const ContrastScheme& scheme = ContrastScheme::paper_helmert());

/// n x cells 0/1 matrix; observation rows ordered by cell, then replicate.
RatMatrix incidence(const CellLayout& layout);

RatMatrix model_matrix(const EffectSet& set, const CellLayout& layout,
                       const ContrastScheme& scheme = ContrastScheme::paper_helmert());

}  // namespace rmfm

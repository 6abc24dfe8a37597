#pragma once

// Exact rational matrices and subspace calculus.
//
// Everything here works over the rationals: no rounding, so subspace equality
// and projector identities are decided exactly. Subspaces carry a canonical
// basis (reduced column-echelon form) so equal subspaces compare equal
// entry-wise.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmfm {

using Rat = mpq_class;
using RatVector = std::vector<Rat>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses "3", "-1.25", "7/4" or "2e-3" into an exact rational.
Rat parse_rational(const std::string& text);

/// Renders as "p" or "p/q".
std::string to_string(const Rat& value);

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols);
    /// Row-major nested initializer, mostly for tests and fixtures.
    RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows);

    static RatMatrix identity(std::size_t n);
    static RatMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static RatMatrix ones(std::size_t rows, std::size_t cols);
    static RatMatrix column(std::span<const Rat> values);
    static RatMatrix from_columns(std::size_t rows, const std::vector<RatVector>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Rat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    RatVector col(std::size_t c) const;
    RatVector row(std::size_t r) const;

    RatMatrix transpose() const;
    bool is_zero() const;
    bool is_symmetric() const;

    friend bool operator==(const RatMatrix& a, const RatMatrix& b);

    RatMatrix& operator+=(const RatMatrix& other);
    RatMatrix& operator-=(const RatMatrix& other);
    RatMatrix& operator*=(const Rat& scale);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> data_;
};

RatMatrix operator+(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(RatMatrix a, const Rat& s);
RatVector operator*(const RatMatrix& a, std::span<const Rat> x);

RatMatrix kron(const RatMatrix& a, const RatMatrix& b);
/// Column-wise concatenation; all inputs must share a row count.
RatMatrix hconcat(const std::vector<RatMatrix>& blocks);
RatMatrix hconcat(const RatMatrix& a, const RatMatrix& b);

Rat dot(std::span<const Rat> a, std::span<const Rat> b);
/// x' M x
Rat quadratic_form(const RatMatrix& m, std::span<const Rat> x);
Rat trace(const RatMatrix& m);

/// Reduced row-echelon form in place; returns pivot columns in order.
std::vector<std::size_t> row_reduce(RatMatrix& m);

/// Canonical representative of a linear subspace of Q^n.
///
/// The basis is the reduced column-echelon form of any spanning set: each
/// column has a leading 1 at its pivot row, pivots strictly increase from
/// left to right, and every other basis column is 0 at that pivot row.
class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim);  // zero subspace
    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.cols(); }
    const RatMatrix& basis() const noexcept { return basis_; }

    bool contains(std::span<const Rat> v) const;
    bool contains(const RatMatrix& columns) const;

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    friend Subspace colspace(const RatMatrix& m);
    Subspace(std::size_t ambient_dim, RatMatrix basis);

    std::size_t ambient_;
    RatMatrix basis_;
};

/// Orthogonal projection matrix onto a column space.
class Projector {
public:
    /// Zero projector on Q^n.
    explicit Projector(std::size_t n) : matrix_(n, n) {}

    /// Adopts `m` after checking symmetry and idempotence exactly.
    static Projector from_matrix(RatMatrix m);

    const RatMatrix& matrix() const noexcept { return matrix_; }
    std::size_t size() const noexcept { return matrix_.rows(); }
    /// Rank of the projector, read off its trace.
    std::size_t rank() const;

    friend bool operator==(const Projector& a, const Projector& b) { return a.matrix_ == b.matrix_; }

private:
    friend Projector projector(const RatMatrix& m);
    friend Projector kron(const Projector& a, const Projector& b);
    struct Trusted {};
    Projector(RatMatrix m, Trusted) : matrix_(std::move(m)) {}

    RatMatrix matrix_;
};

Subspace colspace(const RatMatrix& m);
Subspace nullspace(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);

/// P = sum v v' / (v'v) over an unnormalized Gram-Schmidt basis of sp(m).
Projector projector(const RatMatrix& m);
Projector projector(const Subspace& s);
/// The Kronecker product of orthogonal projectors is one.
Projector kron(const Projector& a, const Projector& b);

Subspace complement(const Subspace& s);
Subspace sum(const Subspace& a, const Subspace& b);
/// Vectors common to both, from the null space of [A | -B].
Subspace intersect(const Subspace& a, const Subspace& b);
/// Same subspace, computed as the complement of the sum of complements.
Subspace intersect_by_complements(const Subspace& a, const Subspace& b);
/// a n b^perp, without forming the complement.
Subspace orthogonal_part(const Subspace& a, const Subspace& b);

/// Decides x'Mx >= 0 for all x exactly, by symmetric pivoted elimination.
bool is_nnd(const RatMatrix& m);

/// Some solution of A x = b, or nullopt if the system is inconsistent.
std::optional<RatVector> solve(const RatMatrix& a, std::span<const Rat> b);

/// Scales each column by a positive factor so its entries are coprime
/// integers. Spans the same subspace as `m`.
RatMatrix integer_columns(const RatMatrix& m);

}  // namespace rmfm

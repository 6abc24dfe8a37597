#include "rmfm/exactlin.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace rmfm {

namespace {

bool is_zero(const Rat& x) { return sgn(x) == 0; }

void require(bool ok, const char* what) {
    if (!ok) throw DimensionError(what);
}

}  // namespace

Rat parse_rational(const std::string& raw) {
    std::string text = raw;
    auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    text.erase(text.begin(), std::find_if(text.begin(), text.end(), not_space));
    text.erase(std::find_if(text.rbegin(), text.rend(), not_space).base(), text.end());
    if (text.empty()) throw std::invalid_argument("empty number");

    if (auto slash = text.find('/'); slash != std::string::npos) {
        Rat num = parse_rational(text.substr(0, slash));
        Rat den = parse_rational(text.substr(slash + 1));
        if (is_zero(den)) throw std::invalid_argument("zero denominator in '" + raw + "'");
        return num / den;
    }

    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long fraction_digits = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; pos < text.size(); ++pos) {
        char ch = text[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_point) ++fraction_digits;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw std::invalid_argument("not a number: '" + raw + "'");

    long exponent = 0;
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') throw std::invalid_argument("not a number: '" + raw + "'");
        std::string exp_text = text.substr(pos + 1);
        std::size_t used = 0;
        try {
            exponent = std::stol(exp_text, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad exponent in '" + raw + "'");
        }
        if (used != exp_text.size()) throw std::invalid_argument("bad exponent in '" + raw + "'");
    }

    mpz_class mantissa(digits, 10);
    long shift = exponent - fraction_digits;
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rat value = shift < 0 ? Rat(mantissa, power) : Rat(mantissa * power);
    value.canonicalize();
    return negative ? Rat(-value) : value;
}

std::string to_string(const Rat& value) { return value.get_str(); }

// --- RatMatrix ----------------------------------------------------------------

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        require(row.size() == cols_, "ragged matrix initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::ones(std::size_t rows, std::size_t cols) {
    RatMatrix m(rows, cols);
    std::fill(m.data_.begin(), m.data_.end(), Rat(1));
    return m;
}

RatMatrix RatMatrix::column(std::span<const Rat> values) {
    RatMatrix m(values.size(), 1);
    std::copy(values.begin(), values.end(), m.data_.begin());
    return m;
}

RatMatrix RatMatrix::from_columns(std::size_t rows, const std::vector<RatVector>& columns) {
    RatMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        require(columns[c].size() == rows, "column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
}

RatVector RatMatrix::col(std::size_t c) const {
    RatVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

RatVector RatMatrix::row(std::size_t r) const {
    return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool RatMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool RatMatrix::is_symmetric() const {
    if (!square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix sum: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!rmfm::is_zero(other.data_[i])) data_[i] += other.data_[i];
    return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix difference: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!rmfm::is_zero(other.data_[i])) data_[i] -= other.data_[i];
    return *this;
}

RatMatrix& RatMatrix::operator*=(const Rat& scale) {
    for (auto& x : data_) x *= scale;
    return *this;
}

RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
RatMatrix operator-(const RatMatrix& a) { return a * Rat(-1); }
RatMatrix operator*(RatMatrix a, const Rat& s) { return a *= s; }

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    require(a.cols() == b.rows(), "matrix product: inner dimension mismatch");
    RatMatrix out(a.rows(), b.cols());
    Rat term;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rat& aik = a(i, k);
            if (is_zero(aik)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                const Rat& bkj = b(k, j);
                if (is_zero(bkj)) continue;
                term = aik * bkj;
                out(i, j) += term;
            }
        }
    }
    return out;
}

RatVector operator*(const RatMatrix& a, std::span<const Rat> x) {
    require(a.cols() == x.size(), "matrix-vector product: dimension mismatch");
    RatVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (!is_zero(a(i, k)) && !is_zero(x[k])) out[i] += a(i, k) * x[k];
    return out;
}

RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Rat& aij = a(i, j);
            if (is_zero(aij)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (!is_zero(b(k, l))) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

RatMatrix hconcat(const std::vector<RatMatrix>& blocks) {
    require(!blocks.empty(), "hconcat of nothing");
    std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        require(b.rows() == rows, "hconcat: row count mismatch");
        cols += b.cols();
    }
    RatMatrix out(rows, cols);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, offset + c) = b(r, c);
        offset += b.cols();
    }
    return out;
}

RatMatrix hconcat(const RatMatrix& a, const RatMatrix& b) { return hconcat(std::vector<RatMatrix>{a, b}); }

Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
    require(a.size() == b.size(), "dot: length mismatch");
    Rat s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!is_zero(a[i]) && !is_zero(b[i])) s += a[i] * b[i];
    return s;
}

Rat quadratic_form(const RatMatrix& m, std::span<const Rat> x) {
    require(m.square() && m.rows() == x.size(), "quadratic form: dimension mismatch");
    RatVector mx = m * x;
    return dot(x, mx);
}

Rat trace(const RatMatrix& m) {
    require(m.square(), "trace of a non-square matrix");
    Rat t;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

std::vector<std::size_t> row_reduce(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t lead_row = 0;
    Rat factor;
    for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
        std::size_t p = lead_row;
        while (p < m.rows() && is_zero(m(p, c))) ++p;
        if (p == m.rows()) continue;
        if (p != lead_row)
            for (std::size_t k = c; k < m.cols(); ++k) swap(m(p, k), m(lead_row, k));

        Rat inv = 1 / m(lead_row, c);
        for (std::size_t k = c; k < m.cols(); ++k)
            if (!is_zero(m(lead_row, k))) m(lead_row, k) *= inv;

        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row || is_zero(m(r, c))) continue;
            Rat f = m(r, c);
            for (std::size_t k = c; k < m.cols(); ++k) {
                if (is_zero(m(lead_row, k))) continue;
                factor = f * m(lead_row, k);
                m(r, k) -= factor;
            }
        }
        pivots.push_back(c);
        ++lead_row;
    }
    return pivots;
}

// --- Subspace ------------------------------------------------------------------

Subspace::Subspace(std::size_t ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {}

Subspace::Subspace(std::size_t ambient_dim, RatMatrix basis) : ambient_(ambient_dim), basis_(std::move(basis)) {}

Subspace Subspace::full(std::size_t ambient_dim) { return colspace(RatMatrix::identity(ambient_dim)); }

bool Subspace::contains(std::span<const Rat> v) const {
    require(v.size() == ambient_, "subspace membership: dimension mismatch");
    // Reduce v against the echelon basis: coefficient of column k is v at its pivot.
    RatVector residual(v.begin(), v.end());
    for (std::size_t k = 0; k < basis_.cols(); ++k) {
        std::size_t pivot = 0;
        while (is_zero(basis_(pivot, k))) ++pivot;
        Rat coef = residual[pivot];
        if (is_zero(coef)) continue;
        for (std::size_t r = 0; r < ambient_; ++r)
            if (!is_zero(basis_(r, k))) residual[r] -= coef * basis_(r, k);
    }
    return std::all_of(residual.begin(), residual.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool Subspace::contains(const RatMatrix& columns) const {
    for (std::size_t c = 0; c < columns.cols(); ++c)
        if (!contains(columns.col(c))) return false;
    return true;
}

Subspace colspace(const RatMatrix& m) {
    RatMatrix t = m.transpose();
    std::size_t r = row_reduce(t).size();
    RatMatrix basis(m.rows(), r);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t i = 0; i < m.rows(); ++i) basis(i, k) = t(k, i);
    return Subspace(m.rows(), std::move(basis));
}

Subspace nullspace(const RatMatrix& m) {
    RatMatrix reduced = m;
    auto pivots = row_reduce(reduced);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;

    std::vector<RatVector> vectors;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        RatVector v(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -reduced(i, free);
        vectors.push_back(std::move(v));
    }
    return colspace(RatMatrix::from_columns(m.cols(), vectors));
}

std::size_t rank(const RatMatrix& m) {
    RatMatrix copy = m;
    return row_reduce(copy).size();
}

// --- Projector -----------------------------------------------------------------

Projector Projector::from_matrix(RatMatrix m) {
    if (!m.is_symmetric()) throw std::invalid_argument("projector: matrix is not symmetric");
    if (!(m * m == m)) throw std::invalid_argument("projector: matrix is not idempotent");
    return Projector(std::move(m), Trusted{});
}

std::size_t Projector::rank() const {
    Rat t = trace(matrix_);
    return static_cast<std::size_t>(t.get_num().get_ui());
}

Projector projector(const RatMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<RatVector> ortho;
    std::vector<Rat> norms;
    Rat coef;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        RatVector v = m.col(c);
        for (std::size_t k = 0; k < ortho.size(); ++k) {
            coef = dot(ortho[k], v);
            if (is_zero(coef)) continue;
            coef /= norms[k];
            for (std::size_t i = 0; i < n; ++i)
                if (!is_zero(ortho[k][i])) v[i] -= coef * ortho[k][i];
        }
        Rat norm = dot(v, v);
        if (is_zero(norm)) continue;
        ortho.push_back(std::move(v));
        norms.push_back(std::move(norm));
    }

    RatMatrix p(n, n);
    for (std::size_t k = 0; k < ortho.size(); ++k) {
        const RatVector& v = ortho[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (is_zero(v[i])) continue;
            Rat vi = v[i] / norms[k];
            for (std::size_t j = 0; j < n; ++j)
                if (!is_zero(v[j])) p(i, j) += vi * v[j];
        }
    }
    return Projector(std::move(p), Projector::Trusted{});
}

Projector projector(const Subspace& s) { return projector(s.basis()); }

Projector kron(const Projector& a, const Projector& b) {
    return Projector(kron(a.matrix(), b.matrix()), Projector::Trusted{});
}

// --- Subspace operations ---------------------------------------------------------

Subspace complement(const Subspace& s) { return nullspace(s.basis().transpose()); }

Subspace sum(const Subspace& a, const Subspace& b) {
    require(a.ambient_dim() == b.ambient_dim(), "subspace sum: ambient dimension mismatch");
    return colspace(hconcat(a.basis(), b.basis()));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    require(a.ambient_dim() == b.ambient_dim(), "subspace intersection: ambient dimension mismatch");
    if (a.dim() == 0 || b.dim() == 0) return Subspace(a.ambient_dim());
    // (u, v) with A u = B v gives A u in both.
    Subspace coefficients = nullspace(hconcat(a.basis(), -b.basis()));
    const RatMatrix& uv = coefficients.basis();
    RatMatrix u(a.dim(), uv.cols());
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < uv.cols(); ++c) u(r, c) = uv(r, c);
    return colspace(a.basis() * u);
}

Subspace intersect_by_complements(const Subspace& a, const Subspace& b) {
    return complement(sum(complement(a), complement(b)));
}

Subspace orthogonal_part(const Subspace& a, const Subspace& b) {
    require(a.ambient_dim() == b.ambient_dim(), "orthogonal part: ambient dimension mismatch");
    if (a.dim() == 0 || b.dim() == 0) return a;
    // A u with B'A u = 0.
    return colspace(a.basis() * nullspace(b.basis().transpose() * a.basis()).basis());
}

// --- Definiteness and solving ------------------------------------------------------

bool is_nnd(const RatMatrix& m) {
    if (!m.is_symmetric()) throw std::invalid_argument("is_nnd: matrix is not symmetric");
    RatMatrix a = m;
    std::vector<std::size_t> active(m.rows());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

    Rat term;
    while (!active.empty()) {
        std::optional<std::size_t> pivot_pos;
        for (std::size_t p = 0; p < active.size(); ++p) {
            const Rat& d = a(active[p], active[p]);
            if (sgn(d) < 0) return false;
            if (sgn(d) > 0 && !pivot_pos) pivot_pos = p;
        }
        if (!pivot_pos) {
            // Zero diagonal: any nonzero off-diagonal entry makes the form indefinite.
            for (auto i : active)
                for (auto j : active)
                    if (!is_zero(a(i, j))) return false;
            return true;
        }
        std::size_t k = active[*pivot_pos];
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(*pivot_pos));
        const Rat dk = a(k, k);
        for (auto i : active) {
            if (is_zero(a(i, k))) continue;
            Rat scale = a(i, k) / dk;
            for (auto j : active) {
                if (is_zero(a(k, j))) continue;
                term = scale * a(k, j);
                a(i, j) -= term;
            }
        }
    }
    return true;
}

std::optional<RatVector> solve(const RatMatrix& a, std::span<const Rat> b) {
    require(a.rows() == b.size(), "solve: right-hand side length mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    auto pivots = row_reduce(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    RatVector x(a.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, a.cols());
    return x;
}

RatMatrix integer_columns(const RatMatrix& m) {
    RatMatrix out = m;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        mpz_class lcm = 1;
        for (std::size_t r = 0; r < m.rows(); ++r)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
        mpz_class g = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            mpz_class v = m(r, c).get_num() * (lcm / m(r, c).get_den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
        if (g == 0) continue;
        Rat scale(lcm, g);
        scale.canonicalize();
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, c) = m(r, c) * scale;
    }
    return out;
}

}  // namespace rmfm

#include "rmfm/exactlin.hpp"
#include "rmfm/verify.hpp"

#include "doctest.h"

using namespace rmfm;

namespace {

RatMatrix c3() { return {{2, 0}, {-1, 1}, {-1, -1}}; }
RatMatrix ones3() { return RatMatrix::ones(3, 1); }
RatMatrix s3() { return RatMatrix::identity(3) - RatMatrix::ones(3, 3) * Rat(1, 3); }

Subspace axes(std::size_t n, std::initializer_list<std::size_t> which) {
    RatMatrix m(n, which.size());
    std::size_t c = 0;
    for (auto i : which) m(i, c++) = 1;
    return colspace(m);
}

}  // namespace

TEST_CASE("parse_rational reads decimals and fractions exactly") {
    CHECK(parse_rational("1.25") == Rat(5, 4));
    CHECK(parse_rational("-0.1") == Rat(-1, 10));
    CHECK(parse_rational("7/4") == Rat(7, 4));
    CHECK(parse_rational(" 3 ") == Rat(3));
    CHECK(parse_rational("2e-3") == Rat(1, 500));
    CHECK(parse_rational("1.5E2") == Rat(150));
    CHECK_THROWS(parse_rational(""));
    CHECK_THROWS(parse_rational("abc"));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("1.2.3"));
}

TEST_CASE("colspace") {
    SUBCASE("identity spans everything") {
        auto s = colspace(RatMatrix::identity(3));
        CHECK(s.dim() == 3);
        CHECK(s == Subspace::full(3));
    }
    SUBCASE("ones vector has canonical basis (1,1,1)") {
        auto s = colspace(ones3());
        CHECK(s.dim() == 1);
        CHECK(s.basis() == ones3());
    }
    SUBCASE("C3 spans the complement of the ones vector") {
        auto s = colspace(c3());
        CHECK(s.dim() == 2);
        CHECK(s == complement(colspace(ones3())));
    }
    SUBCASE("zero matrix gives the zero subspace") {
        auto s = colspace(RatMatrix(4, 2));
        CHECK(s.dim() == 0);
        CHECK(s == Subspace(4));
    }
    SUBCASE("basis is in reduced column-echelon form") {
        auto s = colspace(RatMatrix{{0, 0}, {2, 4}, {1, 3}, {5, 1}});
        const auto& b = s.basis();
        REQUIRE(b.cols() == 2);
        CHECK(b(0, 0) == 0);
        CHECK(b(1, 0) == 1);
        CHECK(b(1, 1) == 0);
        CHECK(b(2, 1) == 1);
        CHECK(b(2, 0) == 0);
    }
}

TEST_CASE("projector") {
    CHECK(projector(RatMatrix::ones(2, 1)).matrix() == RatMatrix{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}});
    CHECK(projector(RatMatrix::identity(4)).matrix() == RatMatrix::identity(4));
    CHECK(projector(c3()).matrix() == s3());
    CHECK(projector(RatMatrix(3, 2)).matrix().is_zero());
    CHECK(projector(RatMatrix(3, 0)).matrix().is_zero());
    CHECK(projector(c3()).rank() == 2);
}

TEST_CASE("Projector::from_matrix rejects non-projectors") {
    CHECK_NOTHROW(Projector::from_matrix(s3()));
    CHECK_THROWS_AS(Projector::from_matrix(RatMatrix{{1, 1}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Projector::from_matrix(RatMatrix{{2, 0}, {0, 0}}), std::invalid_argument);
}

TEST_CASE("complement") {
    CHECK(complement(colspace(ones3())) == colspace(c3()));
    CHECK(complement(Subspace(2)) == Subspace::full(2));
    CHECK(complement(Subspace::full(2)) == Subspace(2));
}

TEST_CASE("intersect") {
    CHECK(intersect(axes(3, {0, 1}), axes(3, {1, 2})) == axes(3, {1}));
    auto s = colspace(c3());
    CHECK(intersect(s, s) == s);
    CHECK(intersect(s, Subspace(3)) == Subspace(3));
    CHECK_THROWS_AS(intersect(Subspace(2), Subspace(3)), DimensionError);
}

TEST_CASE("sum, nullspace, rank, trace") {
    CHECK(sum(axes(3, {0}), axes(3, {1})) == axes(3, {0, 1}));
    CHECK(nullspace(ones3().transpose()) == colspace(c3()));
    CHECK(rank(s3()) == 2);
    CHECK(trace(s3()) == 2);
    CHECK_THROWS_AS(trace(c3()), DimensionError);
    CHECK(nullspace(RatMatrix(0, 3)) == Subspace::full(3));
}

TEST_CASE("is_nnd") {
    CHECK(is_nnd(projector(RatMatrix::ones(2, 1)).matrix()));
    CHECK_FALSE(is_nnd(-RatMatrix::identity(2)));
    CHECK(is_nnd(RatMatrix(3, 3)));
    CHECK_THROWS_AS(is_nnd(RatMatrix{{1, 2}, {0, 1}}), std::invalid_argument);

    SUBCASE("indefinite 2x2 decided like its eigenvalues") {
        RatMatrix m{{1, 2}, {2, 1}};
        // Characteristic polynomial t^2 - tr t + det: roots 3 and -1.
        Rat tr = trace(m);
        Rat det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        CHECK(tr == 2);
        CHECK(det == -3);  // negative determinant: one negative eigenvalue
        CHECK_FALSE(is_nnd(m));
    }
    SUBCASE("zero pivot with nonzero off-diagonal is indefinite") {
        CHECK_FALSE(is_nnd(RatMatrix{{0, 1}, {1, 0}}));
        CHECK_FALSE(is_nnd(RatMatrix{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
    }
    SUBCASE("Gram matrices are nnd") {
        InstanceRng rng(11);
        for (int i = 0; i < 50; ++i) {
            RatMatrix a = random_matrix(rng, static_cast<std::size_t>(rng.between(1, 5)), 4);
            CHECK(is_nnd(a.transpose() * a));
        }
    }
}

TEST_CASE("solve") {
    RatMatrix a{{1, 1}, {1, -1}};
    RatVector b{Rat(3), Rat(1)};
    auto x = solve(a, b);
    REQUIRE(x);
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 1);
    RatMatrix dup{{1, 1}, {2, 2}};
    CHECK_FALSE(solve(dup, RatVector{Rat(1), Rat(3)}));
}

TEST_CASE("integer_columns keeps the span and clears denominators") {
    RatMatrix m{{Rat(1, 2), 0}, {Rat(-1, 3), Rat(4)}, {0, Rat(6)}};
    RatMatrix z = integer_columns(m);
    CHECK(z == RatMatrix{{3, 0}, {-2, 2}, {0, 3}});
    CHECK(colspace(z) == colspace(m));
}

TEST_CASE("kron and hconcat") {
    RatMatrix k = kron(c3(), RatMatrix::ones(3, 1));
    CHECK(k.rows() == 9);
    CHECK(k.cols() == 2);
    CHECK(k(0, 0) == 2);
    CHECK(k(2, 0) == 2);
    CHECK(k(3, 1) == 1);
    CHECK(k(8, 1) == -1);
    CHECK(hconcat(c3(), ones3()).cols() == 3);
    CHECK_THROWS_AS(hconcat(c3(), RatMatrix::ones(2, 1)), DimensionError);
}

TEST_CASE("subspace calculus properties on random matrices") {
    InstanceRng rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const auto n = static_cast<std::size_t>(rng.between(1, 7));
        const auto c1 = static_cast<std::size_t>(rng.between(0, 5));
        const auto c2 = static_cast<std::size_t>(rng.between(0, 5));
        RatMatrix m1 = rng.chance(3) ? random_low_rank(rng, n, c1 ? c1 : 1, 1) : random_matrix(rng, n, c1);
        RatMatrix m2 = random_matrix(rng, n, c2);
        const Subspace s1 = colspace(m1);
        const Subspace s2 = colspace(m2);
        const Projector p = projector(m1);

        CHECK(p.matrix().is_symmetric());
        CHECK(p.matrix() * p.matrix() == p.matrix());
        CHECK(trace(p.matrix()) == Rat(static_cast<long>(rank(m1))));
        CHECK(p.matrix() * m1 == m1);
        CHECK(colspace(p.matrix()) == s1);
        CHECK(complement(complement(s1)) == s1);
        CHECK(complement(s1).dim() == n - s1.dim());
        CHECK((complement(s1).basis().transpose() * s1.basis()).is_zero());
        CHECK(intersect(s1, s2) == intersect_by_complements(s1, s2));
        CHECK(orthogonal_part(s1, s2) == intersect(s1, complement(s2)));
        CHECK(sum(s1, s2).dim() + intersect(s1, s2).dim() == s1.dim() + s2.dim());
        CHECK(s1.contains(m1));
        CHECK(projector(s1) == p);
    }
}

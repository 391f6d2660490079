#include <random>

#include "doctest.h"
#include "gac/exactalg.hpp"
#include "gen.hpp"

using namespace gac;

namespace {

IntMatrix from_rows(const std::vector<std::vector<int>>& rows, int cols = -1) {
    int r = static_cast<int>(rows.size());
    int c = cols >= 0 ? cols : (r ? static_cast<int>(rows[0].size()) : 0);
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    return m;
}

bool snf_contract_holds(const IntMatrix& m) {
    SNFResult s = smith_normal_form(m);
    if (!(s.u * m * s.v == s.d)) return false;
    if (abs(determinant(s.u).value) != 1) return false;
    if (abs(determinant(s.v).value) != 1) return false;
    int nmin = std::min(m.rows(), m.cols());
    for (int i = 0; i < nmin; ++i) {
        if (s.d.at(i, i) < 0) return false;
        for (int j = 0; j < s.d.cols(); ++j)
            if (i != j && i < s.d.rows() && s.d.at(i, j) != 0) return false;
        if (i + 1 < nmin && s.d.at(i, i) != 0 && s.d.at(i + 1, i + 1) != 0 &&
            s.d.at(i + 1, i + 1) % s.d.at(i, i) != 0)
            return false;
        if (s.d.at(i, i) == 0 && i + 1 < nmin && s.d.at(i + 1, i + 1) != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
    SNFResult a = smith_normal_form(from_rows({{2}}));
    CHECK(a.d.at(0, 0) == 2);

    SNFResult b = smith_normal_form(IntMatrix::identity(3));
    CHECK(b.d == IntMatrix::identity(3));

    // [[0,-1],[-2,0]]: swap to put -1 in the pivot, clear, leaving diag(1,2)
    // (hand reduction: rows/cols swaps then sign fixes)
    SNFResult c = smith_normal_form(from_rows({{0, -1}, {-2, 0}}));
    CHECK(c.d.at(0, 0) == 1);
    CHECK(c.d.at(1, 1) == 2);
    CHECK(c.rank == 2);
}

TEST_CASE("smith normal form on degenerate shapes") {
    IntMatrix empty_cols(1, 0);
    SNFResult s = smith_normal_form(empty_cols);
    CHECK(s.rank == 0);
    CHECK(s.u == IntMatrix::identity(1));

    IntMatrix zero(3, 2);
    CHECK(smith_normal_form(zero).rank == 0);
    CHECK(rank(zero) == 0);
    CHECK(kernel_rank(zero) == 2);
}

TEST_CASE("determinant agrees with a cofactor oracle") {
    CHECK(determinant(from_rows({{-1}})).value == -1);
    CHECK(determinant(from_rows({{-1}})).sign == Sign::Negative);

    // I - A^t for the two-vertex, three-edge graph: [[0,-1],[-1,1]]
    IntMatrix m = from_rows({{0, -1}, {-1, 1}});
    CHECK(gactest::cofactor_determinant(m) == -1);
    CHECK(determinant(m).value == -1);
    CHECK(determinant(m).sign == Sign::Negative);

    CHECK_THROWS_AS(determinant(IntMatrix(2, 3)), std::invalid_argument);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix r = gactest::random_matrix(rng, 5, 6);
        if (r.rows() != r.cols()) continue;
        CHECK(determinant(r).value == gactest::cofactor_determinant(r));
    }
}

TEST_CASE("snf contract on 1000 random matrices") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        IntMatrix m = gactest::random_matrix(rng, 8, 9);
        REQUIRE(snf_contract_holds(m));
        if (m.rows() == m.cols()) {
            BigInt det = determinant(m).value;
            if (det != 0) {
                BigInt prod = 1;
                for (const BigInt& d : smith_normal_form(m).diagonal()) prod *= d;
                CHECK(abs(det) == prod);
            }
        }
        CHECK(kernel_rank(m) + rank(m) == m.cols());
    }
}

TEST_CASE("cokernel descriptors") {
    CHECK(cokernel(from_rows({{1 - 3}})) == AbGroup::cyclic(2));

    // column (1,-2)^t: gcd 1 kills torsion, rank 1 cokernel is free
    IntMatrix col(2, 1);
    col.at(0, 0) = 1;
    col.at(1, 0) = -2;
    AbGroup g = cokernel(col);
    CHECK(g == AbGroup::free(Card::of(1)));
    CHECK(kernel_rank(col) == 0);

    // a 1x0 matrix: the cokernel of the empty map is the codomain
    CHECK(cokernel(IntMatrix(1, 0)) == AbGroup::free(Card::of(1)));

    CHECK(kernel_rank(from_rows({{-1}})) == 0);
}

TEST_CASE("cokernel is invariant under unimodular factors") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 120; ++trial) {
        IntMatrix m = gactest::random_matrix(rng, 5, 7);
        IntMatrix u = gactest::random_unimodular(rng, m.rows(), 12);
        IntMatrix v = gactest::random_unimodular(rng, m.cols(), 12);
        CHECK(cokernel(u * m * v) == cokernel(m));
        CHECK(kernel_rank(u * m * v) == kernel_rank(m));
    }
}

TEST_CASE("coefficient cokernels") {
    // m=[[2]], g = Z/2 + Z: componentwise quotient gives Z/2 + Z/2
    AbGroup g = AbGroup::cyclic(2).direct_sum(AbGroup::free(Card::of(1)));
    CHECK(coker_with_coefficients(from_rows({{2}}), g) ==
          AbGroup::cyclic(2).direct_sum(AbGroup::cyclic(2)));

    // unit diagonal annihilates everything
    CHECK(coker_with_coefficients(from_rows({{1}}), g).is_trivial());

    // m = (1,-2)^t over a divisible group: one untouched copy survives
    IntMatrix col(2, 1);
    col.at(0, 0) = 1;
    col.at(1, 0) = -2;
    CHECK(coker_with_coefficients(col, AbGroup::divisible(1)) == AbGroup::divisible(1));

    // integer coefficients reproduce the plain cokernel
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix m = gactest::random_matrix(rng, 6, 7);
        CHECK(coker_with_coefficients(m, AbGroup::free(Card::of(1))) == cokernel(m));
    }
}

TEST_CASE("coefficient cokernels over groups with countable free rank") {
    // Q^x = Z/2 + Z^w: the quotient by 2 collapses to (Z/2)^w
    AbGroup qunits = AbGroup::cyclic(2).direct_sum(AbGroup::free(Card::inf()));
    CHECK(coker_with_coefficients(from_rows({{2}}), qunits) == AbGroup::omega_cyclic(2));

    // the quotient by 6 splits into prime-power omega parts plus nothing else
    AbGroup by6 = coker_with_coefficients(from_rows({{6}}), qunits);
    CHECK(by6 == AbGroup::omega_cyclic(6));
    CHECK(by6.omega_prime_powers() == std::vector<BigInt>{2, 3});

    // torsion kernels over the same coefficients stay finite
    CHECK(kernel_with_coefficients(from_rows({{2}}), qunits) == AbGroup::cyclic(2));
}

TEST_CASE("coefficient kernels") {
    // torsion kernel of multiplication by 2 on Z/4
    CHECK(kernel_with_coefficients(from_rows({{2}}), AbGroup::cyclic(4)) == AbGroup::cyclic(2));
    // free coefficients have no torsion kernel
    CHECK(kernel_with_coefficients(from_rows({{2}}), AbGroup::free(Card::of(1))).is_trivial());
    // zero columns contribute whole copies
    IntMatrix zero(2, 2);
    AbGroup g = AbGroup::cyclic(6);
    CHECK(kernel_with_coefficients(zero, g) == g.direct_sum(g));
}

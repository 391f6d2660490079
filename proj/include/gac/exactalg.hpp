#pragma once

#include <string>
#include <vector>

#include "gac/abgroup.hpp"

namespace gac {

// Dense integer matrix with arbitrary-precision entries.  Zero-row and
// zero-column shapes are legal; they arise when a graph has no regular
// vertices.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols);
    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    BigInt& at(int r, int c);
    const BigInt& at(int r, int c) const;

    void swap_rows(int i, int j);
    void swap_cols(int i, int j);
    void add_row_multiple(int dst, int src, const BigInt& factor);  // row_dst += f * row_src
    void add_col_multiple(int dst, int src, const BigInt& factor);
    void negate_row(int i);

    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix&) const = default;

    std::string to_string() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<BigInt> data_;  // row-major
};

enum class Sign { Negative, Zero, Positive };

inline Sign flip(Sign s) {
    if (s == Sign::Negative) return Sign::Positive;
    if (s == Sign::Positive) return Sign::Negative;
    return Sign::Zero;
}

std::string to_string(Sign s);  // "-", "0", "+"

struct Determinant {
    BigInt value;
    Sign sign;
};

// D = U * M * V with U, V unimodular and D diagonal, nonnegative, each
// diagonal entry dividing the next.
struct SNFResult {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
    int rank = 0;  // number of nonzero diagonal entries

    std::vector<BigInt> diagonal() const;  // the nonzero entries, in chain order
};

SNFResult smith_normal_form(const IntMatrix& m);

// Exact determinant (fraction-free Bareiss elimination).  Throws
// std::invalid_argument on non-square input.
Determinant determinant(const IntMatrix& m);

int rank(const IntMatrix& m);

// coker(m : Z^cols -> Z^rows) as a canonical descriptor.
AbGroup cokernel(const IntMatrix& m);

// dim ker(m : Z^cols -> Z^rows) = cols - rank.
int kernel_rank(const IntMatrix& m);

// coker(m : G^cols -> G^rows) for a coefficient group G, computed through the
// Smith normal form: one copy of G/d_iG per diagonal entry plus rows - rank
// untouched copies of G.
AbGroup coker_with_coefficients(const IntMatrix& m, const AbGroup& g);

// ker(m : G^cols -> G^rows): the d-torsion of G per diagonal entry d, plus a
// full copy of G per column beyond the rank.
AbGroup kernel_with_coefficients(const IntMatrix& m, const AbGroup& g);

}  // namespace gac

#include "gac/exactalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gac {

IntMatrix::IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    data_.assign(static_cast<std::size_t>(rows) * cols, BigInt(0));
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

BigInt& IntMatrix::at(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
}

const BigInt& IntMatrix::at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
}

void IntMatrix::swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

void IntMatrix::swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
}

void IntMatrix::add_row_multiple(int dst, int src, const BigInt& factor) {
    for (int c = 0; c < cols_; ++c) at(dst, c) += factor * at(src, c);
}

void IntMatrix::add_col_multiple(int dst, int src, const BigInt& factor) {
    for (int r = 0; r < rows_; ++r) at(r, dst) += factor * at(r, src);
}

void IntMatrix::negate_row(int i) {
    for (int c = 0; c < cols_; ++c) at(i, c) = -at(i, c);
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const BigInt& a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < cols_; ++j) os << (j ? " " : "[") << at(i, j);
        os << "]" << (i + 1 == rows_ ? "]" : "\n");
    }
    if (rows_ == 0) os << "[]";
    return os.str();
}

std::string to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "-";
        case Sign::Zero: return "0";
        case Sign::Positive: return "+";
    }
    return "?";
}

std::vector<BigInt> SNFResult::diagonal() const {
    std::vector<BigInt> out;
    int n = std::min(d.rows(), d.cols());
    for (int i = 0; i < n; ++i)
        if (d.at(i, i) != 0) out.push_back(d.at(i, i));
    return out;
}

namespace {

// Locates the entry of minimal nonzero absolute value in the lower-right
// submatrix starting at (s, s); returns false when that block is zero.
bool min_pivot(const IntMatrix& d, int s, int& pr, int& pc) {
    bool found = false;
    BigInt best;
    for (int i = s; i < d.rows(); ++i)
        for (int j = s; j < d.cols(); ++j) {
            const BigInt& x = d.at(i, j);
            if (x == 0) continue;
            BigInt a = abs(x);
            if (!found || a < best) {
                found = true;
                best = a;
                pr = i;
                pc = j;
            }
        }
    return found;
}

bool cross_clean(const IntMatrix& d, int s) {
    for (int i = s + 1; i < d.rows(); ++i)
        if (d.at(i, s) != 0) return false;
    for (int j = s + 1; j < d.cols(); ++j)
        if (d.at(s, j) != 0) return false;
    return true;
}

}  // namespace

SNFResult smith_normal_form(const IntMatrix& m) {
    SNFResult res;
    res.d = m;
    res.u = IntMatrix::identity(m.rows());
    res.v = IntMatrix::identity(m.cols());
    IntMatrix& d = res.d;
    IntMatrix& u = res.u;
    IntMatrix& v = res.v;

    int n = std::min(m.rows(), m.cols());
    for (int s = 0; s < n; ++s) {
        int pr, pc;
        if (!min_pivot(d, s, pr, pc)) break;  // remaining block is zero
        for (;;) {
            min_pivot(d, s, pr, pc);
            d.swap_rows(s, pr);
            u.swap_rows(s, pr);
            d.swap_cols(s, pc);
            v.swap_cols(s, pc);

            // Knock down the pivot cross with truncated quotients; remainders
            // shrink the minimal absolute value, so this loop terminates.
            for (int i = s + 1; i < d.rows(); ++i) {
                if (d.at(i, s) == 0) continue;
                BigInt q = d.at(i, s) / d.at(s, s);
                if (q != 0) {
                    d.add_row_multiple(i, s, -q);
                    u.add_row_multiple(i, s, -q);
                }
            }
            for (int j = s + 1; j < d.cols(); ++j) {
                if (d.at(s, j) == 0) continue;
                BigInt q = d.at(s, j) / d.at(s, s);
                if (q != 0) {
                    d.add_col_multiple(j, s, -q);
                    v.add_col_multiple(j, s, -q);
                }
            }
            if (!cross_clean(d, s)) continue;

            // Divisibility: the pivot must divide every remaining entry.
            int violator = -1;
            for (int i = s + 1; i < d.rows() && violator < 0; ++i)
                for (int j = s + 1; j < d.cols(); ++j)
                    if (d.at(i, j) % d.at(s, s) != 0) {
                        violator = i;
                        break;
                    }
            if (violator < 0) break;
            d.add_row_multiple(s, violator, 1);
            u.add_row_multiple(s, violator, 1);
        }
        if (d.at(s, s) < 0) {
            d.negate_row(s);
            u.negate_row(s);
        }
        res.rank += 1;
    }
    return res;
}

Determinant determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    int n = m.rows();
    if (n == 0) return {BigInt(1), Sign::Positive};

    IntMatrix a = m;
    int sign = 1;
    BigInt prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0) return {BigInt(0), Sign::Zero};
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    BigInt det = a.at(n - 1, n - 1);
    if (sign < 0) det = -det;
    Sign s = det == 0 ? Sign::Zero : (det < 0 ? Sign::Negative : Sign::Positive);
    return {det, s};
}

int rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

AbGroup cokernel(const IntMatrix& m) {
    SNFResult snf = smith_normal_form(m);
    std::vector<BigInt> torsion;
    for (const BigInt& d : snf.diagonal())
        if (d > 1) torsion.push_back(d);
    return AbGroup::of(std::move(torsion), Card::of(m.rows() - snf.rank), 0);
}

int kernel_rank(const IntMatrix& m) { return m.cols() - smith_normal_form(m).rank; }

AbGroup coker_with_coefficients(const IntMatrix& m, const AbGroup& g) {
    SNFResult snf = smith_normal_form(m);
    AbGroup out;
    for (const BigInt& d : snf.diagonal()) out = out.direct_sum(g.quotient_by(d));
    for (int i = snf.rank; i < m.rows(); ++i) out = out.direct_sum(g);
    return out;
}

AbGroup kernel_with_coefficients(const IntMatrix& m, const AbGroup& g) {
    SNFResult snf = smith_normal_form(m);
    AbGroup out;
    for (const BigInt& d : snf.diagonal()) out = out.direct_sum(g.annihilated_by(d));
    for (int j = snf.rank; j < m.cols(); ++j) out = out.direct_sum(g);
    return out;
}

}  // namespace gac

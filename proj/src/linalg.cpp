#include "nwc/linalg.hpp"

#include <algorithm>

namespace nwc {

int rref(RatMat& m, std::vector<int>* pivot_cols) {
    if (m.empty()) return 0;
    std::size_t rows = m.size();
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        Rat inv = m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                Rat delta = factor * m[r][j];
                m[i][j] -= delta;
            }
        }
        if (pivot_cols) pivot_cols->push_back(static_cast<int>(c));
        ++r;
    }
    return static_cast<int>(r);
}

int rank_of(RatMat m) { return rref(m); }

void make_primitive(IntVec& v) {
    Int g(0);
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0 || g == 1) return;
    for (Int& x : v) x /= g;
}

IntVec primitive_integer(const RatVec& v) {
    Int lcm(1);
    for (const Rat& x : v)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
    IntVec out;
    out.reserve(v.size());
    for (const Rat& x : v) {
        Rat scaled = x * Rat(lcm);
        out.push_back(scaled.get_num());
    }
    make_primitive(out);
    return out;
}

std::vector<IntVec> integer_nullspace(RatMat m, int ncols) {
    std::vector<int> pivots;
    if (!m.empty()) rref(m, &pivots);
    std::vector<bool> is_pivot(ncols, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<IntVec> basis;
    for (int free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        RatVec x(ncols, Rat(0));
        x[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            // Row r reads x[pivots[r]] + sum over free cols = 0.
            x[pivots[r]] = -m[r][free];
        }
        basis.push_back(primitive_integer(x));
    }
    return basis;
}

std::optional<RatVec> solve_linear(RatMat a, RatVec b) {
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
    std::vector<int> pivots;
    rref(a, &pivots);
    // Inconsistent iff a pivot lands in the augmented column.
    if (!pivots.empty() && pivots.back() == static_cast<int>(cols)) return std::nullopt;
    RatVec x(cols, Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][cols];
    return x;
}

}  // namespace nwc

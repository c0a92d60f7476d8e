#pragma once

// Small exact-rational linear algebra: reduced row echelon form, rank,
// nullspaces with primitive integer bases, and dense linear solves.  Sizes
// here are tiny (rows/cols bounded by the support size and the ambient
// dimension), so everything is plain Gaussian elimination.

#include <optional>
#include <vector>

#include "nwc/polynomial.hpp"
#include "nwc/rational.hpp"

namespace nwc {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;
using IntVec = std::vector<Int>;

// In-place reduced row echelon form; returns the rank.  Pivot column indices
// are appended to *pivot_cols when given.
int rref(RatMat& m, std::vector<int>* pivot_cols = nullptr);

int rank_of(RatMat m);

// Divide by the gcd of the entries (zero vector stays zero).  Signs are left
// alone; orientation is the caller's business.
void make_primitive(IntVec& v);

// Clear denominators and divide by the gcd: the unique primitive integer
// vector that is a positive multiple of v.
IntVec primitive_integer(const RatVec& v);

// Basis of {x in Q^ncols : m x = 0} as primitive integer vectors, one per
// free column of the RREF, in ascending free-column order (deterministic).
std::vector<IntVec> integer_nullspace(RatMat m, int ncols);

// One exact solution of A x = b, if the system is consistent (free variables
// are set to zero).
std::optional<RatVec> solve_linear(RatMat a, RatVec b);

inline Int dot(const IntVec& a, const ExponentVec& b) {
    Int s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const RatVec& a, const ExponentVec& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

inline Int dot(const IntVec& a, const IntVec& b) {
    Int s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace nwc

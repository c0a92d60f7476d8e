#pragma once

// Exact univariate real-root tools over the integers: Sturm chains for
// counting distinct real roots in an interval, Cauchy bounds, bisection
// isolation, and a rational-root finder.  Everything is exact; these are
// the decision procedures behind the one-dimensional sign analysis.
//
// Polynomials are dense coefficient vectors in ascending order with no
// high-order zero entries ("normalized"); the zero polynomial is {}.

#include <utility>
#include <vector>

#include "nwc/rational.hpp"

namespace nwc {

using ZPoly = std::vector<Int>;

inline int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

ZPoly normalize(ZPoly p);  // strip high-order zeros
ZPoly from_rational_coeffs(const std::vector<Rat>& coeffs);  // clear denominators,
                                                             // divide by content
ZPoly derivative(const ZPoly& p);
Rat eval_poly(const ZPoly& p, const Rat& x);
int sign_at(const ZPoly& p, const Rat& x);

// Primitive gcd with positive leading coefficient; gcd(0,0) = 0.
ZPoly gcd_poly(ZPoly a, ZPoly b);

// p with all root multiplicities reduced to one: p / gcd(p, p').
ZPoly squarefree_part(const ZPoly& p);

// Strict bound: every real root x satisfies |x| < bound.
Rat cauchy_root_bound(const ZPoly& p);

// Number of distinct real roots in (a, b], requiring p(a) != 0.  Works for
// non-square-free p (the Sturm chain ends at the gcd).
int count_roots_in(const ZPoly& p, const Rat& a, const Rat& b);

// Distinct roots in (0, inf), requiring p(0) != 0.
int count_positive_roots(const ZPoly& p);

// All positive rational roots, sorted ascending.  Exact (every returned
// value is verified to be a root); completeness is best-effort when the
// constant or leading coefficient has a large prime factorization, which
// cannot occur at this project's input scale.
std::vector<Rat> positive_rational_roots(const ZPoly& p);

// Isolating intervals (a, b] with 0 < a < b, nonzero p(a) and p(b), exactly
// one root of p inside each, covering every positive root; requires p
// square-free with p(0) != 0.  Exact rational roots discovered during
// bisection are returned separately.
struct PositiveRootIsolation {
    std::vector<std::pair<Rat, Rat>> intervals;
    std::vector<Rat> exact_roots;
};
PositiveRootIsolation isolate_positive_roots(const ZPoly& squarefree);

}  // namespace nwc

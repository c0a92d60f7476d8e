#pragma once

// Exact feasibility for small linear systems over the rationals, by
// Fourier-Motzkin elimination.  This is the decision engine behind the
// normal-cone questions ("is there a q with min_j q_j < 0 selecting exactly
// this face?"): those arrive as mixed equality/inequality systems in at most
// n <= 6 variables, where elimination is entirely practical.  Strictness is
// handled upstream by unit margins, which conic scaling justifies.

#include <optional>
#include <vector>

#include "nwc/linalg.hpp"
#include "nwc/rational.hpp"

namespace nwc {

// sum_j coeffs[j] * x_j  >=  bound      (or == bound when is_equality)
struct LinearConstraint {
    RatVec coeffs;
    Rat bound;
    bool is_equality = false;
};

inline LinearConstraint ge_constraint(RatVec coeffs, Rat bound) {
    return {std::move(coeffs), std::move(bound), false};
}
inline LinearConstraint eq_constraint(RatVec coeffs, Rat bound) {
    return {std::move(coeffs), std::move(bound), true};
}

// Returns an exact feasible point, or nullopt when the system is infeasible.
// Equalities are eliminated by substitution first, then inequalities by
// Fourier-Motzkin with primitive-integer normalization and dominance
// pruning.  The returned point is re-checked against every input constraint
// before being handed back.  Throws ScaleLimitError if the intermediate
// constraint count explodes (cannot happen at the scales this project
// accepts, but elimination is worst-case exponential).
std::optional<RatVec> find_feasible_point(int nvars,
                                          const std::vector<LinearConstraint>& constraints);

}  // namespace nwc

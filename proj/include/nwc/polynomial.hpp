#pragma once

// Sparse multivariate polynomials over the rationals, with the handful of
// structural operations the compactness analysis needs: parsing/printing,
// exact evaluation, coordinate-subspace restriction, derivatives, and
// substitution of monomial curves t -> (c_1 t^{q_1}, ..., c_n t^{q_n}).
//
// Variables are 1-based in text form ("x1".."xn") and 0-based in exponent
// vectors.  Exponents are machine ints (inputs at the scale this tool
// accepts never approach overflow); coefficients are exact rationals.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwc/rational.hpp"

namespace nwc {

using ExponentVec = std::vector<int>;

inline int total_degree(const ExponentVec& alpha) {
    int d = 0;
    for (int e : alpha) d += e;
    return d;
}

// Subset of variable indices {1..n}, bit j-1 <-> variable x_j.
struct SubspaceMask {
    std::uint32_t bits = 0;
    int n = 0;

    static SubspaceMask full(int n) {
        return {n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1, n};
    }
    static SubspaceMask none(int n) { return {0, n}; }
    bool contains(int var) const { return (bits >> (var - 1)) & 1u; }
    int count() const { return __builtin_popcount(bits); }
    bool empty() const { return bits == 0; }
};

class Polynomial {
public:
    using TermMap = std::map<ExponentVec, Rat>;

    Polynomial() = default;
    explicit Polynomial(int var_count);
    static Polynomial constant(int var_count, const Rat& value);
    static Polynomial monomial(const ExponentVec& alpha, const Rat& coeff);

    int var_count() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    // Adds coeff * x^alpha, combining with an existing term and dropping the
    // term if the sum cancels to zero.
    void add_term(const ExponentVec& alpha, const Rat& coeff);
    Rat coeff(const ExponentVec& alpha) const;
    std::vector<ExponentVec> support() const;
    int degree() const;  // max total degree, -1 for the zero polynomial

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial scaled(const Rat& c) const;
    Polynomial pow(unsigned exponent) const;
    bool operator==(const Polynomial& rhs) const = default;

    Rat evaluate(const std::vector<Rat>& point) const;

private:
    int n_ = 0;
    TermMap terms_;
};

// --- text form -------------------------------------------------------------

// Grammar (whitespace insignificant, no implicit multiplication):
//   expr     := ['+'|'-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := base ('^' uint)?
//   base     := rational | var | '(' expr ')'
//   rational := ['+'|'-'] uint ('/' uint)?
//   var      := 'x' uint            (1-based index, <= var_count)
// Products of parenthesized sums are expanded eagerly; expansion is refused
// past ~1e5 terms.  Errors report a byte offset via ParseError.
Polynomial parse_polynomial(const std::string& text, int var_count);

// Largest k such that "xk" occurs in the text; 0 when none.  Used by the CLI
// to infer the variable count when -n is not given.
int scan_max_var_index(const std::string& text);

// Canonical form: terms in descending graded-lex order, e.g.
// "x1^2 - 2*x1*x2 + x2^2"; parse_polynomial(to_string(f)) == f.
std::string to_string(const Polynomial& f);

nlohmann::ordered_json polynomial_to_json(const Polynomial& f);
Polynomial polynomial_from_json(const nlohmann::json& j);

// --- structural operations ---------------------------------------------------

// Keeps exactly the terms supported inside the coordinate subspace spanned by
// the variables in `vars` (all other variables set to zero).
Polynomial restrict_to_subspace(const Polynomial& f, SubspaceMask vars);

// d f / d x_j for j = 1..n, in order.
std::vector<Polynomial> partial_derivatives(const Polynomial& f);

// Largest absolute value of a coefficient; rejects the zero polynomial.
Rat coeff_norm(const Polynomial& f);

// --- monomial curves ---------------------------------------------------------

// Finite Laurent polynomial in one variable t (integer exponents of either
// sign), used for f restricted to a monomial curve.
class LaurentPoly {
public:
    bool is_zero() const { return terms_.empty(); }
    long min_exponent() const;
    long max_exponent() const;
    Rat coeff(long e) const;
    const std::map<long, Rat>& terms() const { return terms_; }
    void add_term(long e, const Rat& c);
    Rat evaluate(const Rat& t) const;  // t must be nonzero
    std::string str() const;           // e.g. "3*t^-2 + 1 - t^4"

private:
    std::map<long, Rat> terms_;
};

// The curve t -> (base[0]*t^{exponents[0]}, ..., base[n-1]*t^{exponents[n-1]}).
// Rational direction vectors are scaled by the positive integer `multiplier`
// (the lcm of their denominators) so that exponents are integers; `valuation`
// is min over the support of <exponents, alpha>, i.e. the order in t of the
// lowest term of f along the curve.
struct MonomialCurve {
    std::vector<Rat> base;        // all coordinates nonzero
    std::vector<long> exponents;  // integer curve exponents (scaled direction)
    long multiplier = 1;
    long valuation = 0;
};

MonomialCurve make_monomial_curve(const Polynomial& f,
                                  const std::vector<Rat>& base_point,
                                  const std::vector<Rat>& direction);

LaurentPoly substitute_monomial_curve(const Polynomial& f, const MonomialCurve& curve);

// --- semialgebraic aggregation ------------------------------------------------

// For S = {g_i = 0, h_j >= 0}, builds sum g_i^2 + sum (h_j - y_j^2)^2 in
// n + #inequalities variables: its zero set projects onto S, so compactness
// questions about S reduce to the polynomial-zero-set machinery.
Polynomial semialgebraic_to_zero_set(const std::vector<Polynomial>& equations,
                                     const std::vector<Polynomial>& inequalities);

}  // namespace nwc

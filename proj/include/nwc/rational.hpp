#pragma once

// Thin helpers around GMP's mpq_class.  Everything in this project that
// constructs a rational goes through these functions: mpq_class does NOT
// canonicalize values built from a numerator/denominator pair or parsed
// from a string, and comparisons on non-canonical values are wrong.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "nwc/errors.hpp"

namespace nwc {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline int sign_of(const Rat& r) { return sgn(r); }

// base^e with e possibly negative (base must be nonzero then).
inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) throw DomainError("zero raised to a negative power");
    unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
    Int num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), mag);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), mag);
    return e > 0 ? make_rat(num, den) : make_rat(den, num);
}

// Accepts "p", "p/q" (q > 0 after canonicalization) and plain decimals
// like "0.25" or "-1.5".  No exponent notation.
Rat rat_from_string(const std::string& text);

// Canonical form: "p" when the denominator is 1, else "p/q".
inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline double rat_to_double(const Rat& r) { return r.get_d(); }

// Best rational approximation of `value` with denominator <= max_denominator,
// via continued-fraction convergents.  Exact for inputs that already are
// such fractions.  Rejects non-finite input.
Rat rationalize(double value, long max_denominator);

}  // namespace nwc

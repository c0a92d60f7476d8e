#pragma once

// Exact sign analysis of polynomials on the punctured space (R \ {0})^n and
// on the open positive orthant, plus the critical-zero search used to test
// face polynomials.  Verdicts either carry independently recheckable
// certificates (for strict signs) or exact rational witness points (for
// zeros and sign changes); when neither is available the verdict is an
// honest Unknown describing the exhausted search budget.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwc/newton.hpp"
#include "nwc/polynomial.hpp"
#include "nwc/rational.hpp"
#include "nwc/sturm.hpp"

namespace nwc {

// Deterministic search limits; every randomized step derives its stream from
// `seed`, so equal budgets give equal verdicts.
struct SearchBudget {
    int samples_per_orthant = 2000;
    long max_denominator = 1000000;
    int bisection_steps = 48;
    std::uint64_t seed = 0;
};

enum class SignKind {
    StrictlyPositive,
    StrictlyNegative,
    TakesZero,
    TakesBothSigns,
    Unknown,
};

std::string sign_kind_name(SignKind k);

// An exact evaluation: every coordinate nonzero, value = f(point) exactly.
struct WitnessPoint {
    std::vector<Rat> point;
    Rat value;
};

// Proof artifact for a strict sign on one open orthant.  `sigma` is the
// orthant's sign vector (empty means the positive orthant of the original
// polynomial, i.e. no reflection applied).
struct Certificate {
    enum class Kind {
        MonomialFace,        // single term: sign on the orthant is the
                             // coefficient's sign
        OrthantCoefficient,  // every coefficient of the reflected polynomial
                             // shares one strict sign
        UnivariateSturm,     // support on a line: f = x^beta * u(x^w) with a
                             // certified count of positive roots of u
    };
    Kind kind;
    std::vector<int> sigma;  // entries +1/-1; empty = positive orthant
    int sign = 0;            // certified strict sign on that orthant
    // UnivariateSturm payload (empty otherwise):
    ExponentVec beta;         // exponent of the factored-out monomial
    IntVec direction;         // primitive direction w of the support line
    ZPoly reduced;            // u with integer coefficients, ascending
    int positive_root_count = 0;
};

std::string certificate_kind_name(Certificate::Kind k);

struct SignVerdict {
    SignKind kind = SignKind::Unknown;
    std::vector<Certificate> certificates;  // strict verdicts only
    std::vector<WitnessPoint> witnesses;    // zero witness, or one per sign
    std::string note;                       // context for Unknown verdicts
    SearchBudget budget;
};

// f(sigma_1 y_1, ..., sigma_n y_n) for sigma in {-1,+1}^n: the sign pattern
// of f on the sigma-orthant equals the pattern of the result on the positive
// orthant.
Polynomial orthant_substitute(const Polynomial& f, const std::vector<int>& sigma);

// Sign behaviour of f on the open positive orthant (0, inf)^n.
SignVerdict sign_on_positive_orthant(const Polynomial& f, const SearchBudget& budget);

// Sign behaviour of f on (R \ {0})^n, combining all 2^n orthants with
// witnesses mapped back to the original coordinates.
SignVerdict sign_on_punctured_space(const Polynomial& f, const SearchBudget& budget);

nlohmann::ordered_json verdict_to_json(const SignVerdict& v);

// Recheck a strict-sign certificate against the polynomial it claims to
// describe, sharing no code with the search that produced it.  Returns an
// error description, or nothing if the certificate is valid.
std::optional<std::string> verify_certificate(const Polynomial& f, const Certificate& c);

// --- critical-zero search for face polynomials ---------------------------

enum class FaceCriticality {
    NoCriticalZeroFound,  // certified: no x with all coordinates nonzero has
                          // f_face(x) = 0 together with a vanishing gradient
    DegeneratePoint,      // exact witness below satisfies all equations
    Unknown,
};

std::string face_criticality_name(FaceCriticality v);

struct FaceCriticalityReport {
    std::size_t face_index = 0;  // position in the face list passed in
    FaceCriticality verdict = FaceCriticality::Unknown;
    std::vector<Rat> witness;    // DegeneratePoint only
    std::string note;
};

struct NondegeneracyReport {
    std::vector<FaceCriticalityReport> faces;  // one entry per face checked
    bool any_degenerate = false;
    bool all_certified = false;  // every checked face NoCriticalZeroFound
};

// Examine each face flagged at_infinity: does its face polynomial have a
// zero with vanishing gradient at a point with all coordinates nonzero?
NondegeneracyReport check_nondegeneracy(const Polynomial& f, const NewtonPolytope& p,
                                        const std::vector<Face>& faces,
                                        const SearchBudget& budget);

nlohmann::ordered_json nondegeneracy_to_json(const NondegeneracyReport& r);

}  // namespace nwc

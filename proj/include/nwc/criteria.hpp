#pragma once

// Compactness analysis of a polynomial zero set from its Newton polytope.
//
// The decision core combines three exact ingredients computed elsewhere:
// the boundary-at-infinity faces (newton), per-face sign verdicts with
// certificates or witness points (signcheck), and identical-vanishing tests
// of f on coordinate subspaces (polynomial).  From those it derives
//
//   * a refutation of compactness -- f vanishes identically on a coordinate
//     subspace, or boundary face polynomials take values of both strict
//     signs (exact witness points either way);
//   * a certificate of compactness -- no subspace vanishing and every
//     boundary face polynomial strictly positive (or every one strictly
//     negative) with independently checkable certificates;
//   * a certificate or refutation of *stable* compactness -- the property
//     that the zero set stays compact under all sufficiently small
//     coefficient perturbations supported inside the polytope.
//
// The gap between refutation and certificate is real (a square like
// (x1-x2)^2 falls in it), so verdicts are three-valued and the numeric
// probes below supply evidence -- never certificates -- for the
// inconclusive middle.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwc/newton.hpp"
#include "nwc/polynomial.hpp"
#include "nwc/signcheck.hpp"

namespace nwc {

// --- per-face sign analysis ------------------------------------------------

// Sign verdict for one boundary face's polynomial, plus exact sample values
// of either strict sign when they exist.  A verdict like TakesZero does not
// rule out strictly positive or negative values elsewhere on the face, and
// the compactness refutation needs them, so they are hunted separately
// (corner points first, then a small rational grid).
struct FaceSignAnalysis {
    std::size_t face_index = 0;  // position in the full face list
    Polynomial face_poly;
    SignVerdict verdict;
    std::optional<WitnessPoint> positive_value;
    std::optional<WitnessPoint> negative_value;
};

// Analyzes every face flagged at_infinity; entries follow face-list order.
// Each face draws its randomized budget from a seed substream, so results
// do not depend on scheduling (`threads` > 1 fans faces out to a pool).
std::vector<FaceSignAnalysis> analyze_face_signs(const Polynomial& f,
                                                 const NewtonPolytope& p,
                                                 const std::vector<Face>& faces,
                                                 const SearchBudget& budget,
                                                 int threads = 1);

// --- compactness report ------------------------------------------------------

enum class NecessaryStatus { ConsistentWithCompact, ViolatedNotCompact, Inconclusive };
enum class SufficientStatus { CompactCertified, NotApplicable, Inconclusive };
enum class CompactnessVerdict { CompactCertified, NotCompactCertified, Inconclusive };
enum class StabilityVerdict { StablyCompactCertified, NotStablyCompact, Inconclusive };

std::string necessary_status_name(NecessaryStatus s);
std::string sufficient_status_name(SufficientStatus s);
std::string compactness_verdict_name(CompactnessVerdict v);
std::string stability_verdict_name(StabilityVerdict v);

// Result of testing whether f vanishes identically on the coordinate
// subspace spanned by the variables in `subspace` (all others set to 0).
// A vanishing subspace lies inside the zero set, which is then unbounded.
struct SubspaceVanishing {
    SubspaceMask subspace;
    bool vanishes = false;
};

// Exact evidence that the zero set is unbounded: either a vanishing
// coordinate subspace, or boundary-face values of both strict signs
// (each value rules out one of the two one-sided necessary conditions).
struct UnboundednessWitness {
    std::optional<SubspaceMask> vanishing_subspace;
    std::optional<std::size_t> positive_face;  // face_index values
    std::optional<std::size_t> negative_face;
    std::optional<WitnessPoint> positive_point;
    std::optional<WitnessPoint> negative_point;
};

// A far-away near-zero located numerically; coordinates are floating-point
// and clearly marked approximate in reports.
struct ApproximateZero {
    std::vector<double> point;
    double value = 0.0;
    double radius = 0.0;
    std::string method;  // "sign-change bisection" or "minimum tracking"
};

struct ProbeEvidence {
    bool far_zeros_found = false;
    std::vector<ApproximateZero> far_zeros;
    std::vector<double> radii;
    std::uint64_t seed = 0;
};

struct CompactnessReport {
    std::vector<SubspaceVanishing> subspace_tests;  // all nonempty variable sets
    Rat value_at_origin;                            // informational (empty set case)
    NecessaryStatus necessary_status = NecessaryStatus::Inconclusive;
    SufficientStatus sufficient_status = SufficientStatus::Inconclusive;
    int certified_sign = 0;  // +1/-1 when sufficient_status == CompactCertified
    CompactnessVerdict overall = CompactnessVerdict::Inconclusive;
    std::optional<UnboundednessWitness> witness;
    std::optional<ProbeEvidence> probe_evidence;
    std::string note;
};

// The refutation side: exact subspace tests plus opposite-sign face values.
// Fills subspace_tests, value_at_origin, necessary_status and witness.
void apply_necessary_conditions(const Polynomial& f, const NewtonPolytope& p,
                                const std::vector<FaceSignAnalysis>& analyses,
                                CompactnessReport& report);

// The certificate side: uniform strict face signs plus no vanishing
// subspace.  Fills sufficient_status and certified_sign; expects
// apply_necessary_conditions to have filled the subspace tests.
void apply_sufficient_conditions(const std::vector<FaceSignAnalysis>& analyses,
                                 CompactnessReport& report);

// Both directions plus the overall three-valued verdict.
CompactnessReport compactness_report(const Polynomial& f, const NewtonPolytope& p,
                                     const std::vector<FaceSignAnalysis>& analyses);

// --- stability report ----------------------------------------------------------

// Empirical two-sided comparison of sigma*f against the polytope's monomial
// sum P(x) = sum over lattice points of |x^alpha| on a far-out shell.
// Sample points are exact rationals, so the ratio bounds and any violations
// (sigma*f(x) <= 0) are exact at the sampled points; the constants remain
// empirical because sampling proves nothing between samples.
struct SandwichEstimate {
    int sigma = 1;
    Rat radius;       // samples lie beyond this norm, exactly verified
    int samples = 0;
    Rat c1_hat;       // min of sigma*f(x)/P(x) over the samples
    Rat c2_hat;       // max of the same
    std::vector<WitnessPoint> violations;
    std::uint64_t seed = 0;
};

struct StabilityReport {
    StabilityVerdict verdict = StabilityVerdict::Inconclusive;
    int certified_sign = 0;  // sigma for StablyCompactCertified
    std::optional<std::size_t> witness_face;        // face with the exact witness
    std::vector<WitnessPoint> witnesses;            // its zero / sign-change points
    std::optional<SubspaceMask> vanishing_subspace; // subspace witness instead
    std::optional<Rat> epsilon_estimate;  // perturbation radius estimate
    std::string epsilon_provenance;       // marks the estimate as heuristic
    std::optional<SandwichEstimate> sandwich;
    bool inconsistent = false;  // strict verdicts of both signs across faces
    std::string note;
};

// Verdict from the per-face nonvanishing tests: an exact zero or sign change
// on any boundary face (or a vanishing subspace) refutes stable compactness,
// and exact face values of both strict signs refute plain compactness and
// with it stability; uniform strict signs with certificates establish it.
// Strict certificates of *both* signs with *every* face determined and none
// vanishing cannot all be right -- two such faces would force a zero on a
// connecting face -- so that combination is reported as an internal
// inconsistency, never as a verdict.
StabilityReport stability_report(const Polynomial& f, const NewtonPolytope& p,
                                 const std::vector<FaceSignAnalysis>& analyses);

// min(c1_hat/2, smallest |coefficient| over the polytope's vertices): the
// estimated perturbation radius under which the zero set stays compact.
// Heuristic because c1_hat is sampled, not proved; requires a sandwich with
// no violations and positive c1_hat.
Rat epsilon_estimate(const Polynomial& f, const NewtonPolytope& p,
                     const SandwichEstimate& sandwich);

SandwichEstimate sandwich_check(const Polynomial& f, const NewtonPolytope& p,
                                int sigma, const Rat& radius, int samples,
                                std::uint64_t seed);

// --- numeric probes (evidence, never certificates) -----------------------------

enum class EventualSign { NonnegBeyond, NonposBeyond, SignChangeFound };

std::string eventual_sign_name(EventualSign s);

// Exact signs of f at rationalized random points on far-out spheres: the
// empirical eventual sign of f, or an exact pair of points with opposite
// strict signs.
struct EventualSignEvidence {
    EventualSign kind = EventualSign::NonnegBeyond;
    std::vector<double> radii;
    int samples = 0;  // per radius
    std::vector<WitnessPoint> sign_change;  // positive point then negative point
    std::uint64_t seed = 0;
};

EventualSignEvidence eventual_sign_probe(const Polynomial& f,
                                         const std::vector<double>& radii,
                                         const SearchBudget& budget);

// Scans spheres |x| = R for zeros of f: sign changes along great circles
// and antipodal arcs are bisected to near-zero points; if no sign change
// exists (squares!), coarse minima of |f| on the sphere are driven down by
// local descent and reported when below a scale-aware threshold.
ProbeEvidence numeric_compactness_probe(const Polynomial& f,
                                        const std::vector<double>& radii,
                                        const SearchBudget& budget);

// --- coefficient perturbations --------------------------------------------------

// Random polynomial supported on the lattice points of the polytope with
// every coefficient drawn from a uniform rational grid strictly inside
// (-epsilon, epsilon); the support constraint and the norm bound are
// verified exactly before returning.  Deterministic under `seed`.
Polynomial perturb(const Polynomial& f, const NewtonPolytope& p, const Rat& epsilon,
                   std::uint64_t seed);

// The adversarial direction: -epsilon * x^vertex for a chosen polytope
// vertex, the smallest perturbation that flips that vertex's face sign.
Polynomial directed_perturbation(const Polynomial& f, const NewtonPolytope& p,
                                 const Rat& epsilon, const ExponentVec& vertex);

struct PerturbationSpec {
    Rat epsilon;
    int count = 100;
    std::uint64_t seed = 0;
    std::optional<ExponentVec> directed_vertex;  // use the adversarial mode
};

struct PerturbationExperiment {
    Rat epsilon;
    int trials = 0;
    bool directed = false;
    ExponentVec directed_vertex;
    std::vector<std::uint64_t> trial_seeds;
    std::vector<int> far_zero_trials;  // trial indices whose probe found far zeros
    std::vector<double> probe_radii;
};

// Perturb-and-probe loop: each trial draws g (or uses the directed one),
// then runs the numeric probe on f + g at the given radii.
PerturbationExperiment perturbation_experiment(const Polynomial& f,
                                               const NewtonPolytope& p,
                                               const PerturbationSpec& spec,
                                               const std::vector<double>& probe_radii,
                                               const SearchBudget& budget);

nlohmann::ordered_json perturbation_experiment_to_json(const PerturbationExperiment& e);

// --- orchestration ---------------------------------------------------------------

struct AnalyzeOptions {
    SearchBudget budget;
    std::vector<double> probe_radii = {10.0, 100.0};
    Rat sandwich_radius = Rat(10);
    int sandwich_samples = 10000;
    int threads = 1;
};

struct AnalysisResult {
    int var_count = 0;
    NewtonPolytope polytope;
    std::vector<Face> faces;
    std::string geometry_digest;
    std::vector<FaceSignAnalysis> face_analyses;
    CompactnessReport compactness;
    StabilityReport stability;
    NondegeneracyReport nondegeneracy;
    EventualSignEvidence eventual_sign;
    bool univariate = false;  // short-circuit: finite zero set
    bool internally_inconsistent = false;
    std::vector<std::string> inconsistency_notes;
    std::uint64_t seed = 0;
    std::map<std::string, double> timings_ms;
};

// Runs geometry once, analyzes every boundary face, assembles the
// compactness and stability reports, then attaches probe evidence and
// cross-checks the certified direction against the independent probes
// (certified all-positive faces must coexist with a nondegenerate boundary
// and an eventually nonnegative f; disagreement marks the result
// internally inconsistent).  For one variable the zero set of a nonconstant
// polynomial is finite, so the reports short-circuit.
AnalysisResult analyze(const Polynomial& f, const AnalyzeOptions& options);

// Versioned report; timings are included only on request so that equal
// inputs, options and seeds give byte-identical output.
nlohmann::ordered_json analysis_to_json(const Polynomial& f, const AnalysisResult& r,
                                        bool include_timings = false);

nlohmann::ordered_json compactness_to_json(const CompactnessReport& r,
                                           const std::vector<FaceSignAnalysis>& analyses);
nlohmann::ordered_json stability_to_json(const StabilityReport& r);
nlohmann::ordered_json sandwich_to_json(const SandwichEstimate& s);
nlohmann::ordered_json probe_to_json(const ProbeEvidence& e);
nlohmann::ordered_json eventual_sign_to_json(const EventualSignEvidence& e);

}  // namespace nwc

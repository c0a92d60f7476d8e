#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "nwc/criteria.hpp"
#include "nwc/prng.hpp"

namespace nwc {

namespace {

// Substream tags for the per-face / per-purpose seed derivation.
constexpr std::uint64_t kFaceStream = 0x8ebfd028;
constexpr std::uint64_t kExemplarStream = 0x2545f491;
constexpr std::uint64_t kSandwichStream = 0xd3833e80;
// Exemplar hunt: full grid enumeration below this many candidate points,
// seeded random draws above it.
constexpr std::size_t kExemplarFullGridLimit = 20000;
constexpr int kExemplarRandomDraws = 2000;
constexpr int kExemplarRationalDraws = 1000;

std::string join_note(const std::string& base, const std::string& extra) {
    if (base.empty()) return extra;
    if (extra.empty()) return base;
    return base + "; " + extra;
}

nlohmann::ordered_json witness_to_json(const WitnessPoint& w) {
    nlohmann::ordered_json j;
    j["point"] = nlohmann::ordered_json::array();
    for (const Rat& c : w.point) j["point"].push_back(rat_to_string(c));
    j["value"] = rat_to_string(w.value);
    return j;
}

nlohmann::ordered_json subspace_to_json(const SubspaceMask& m) {
    auto vars = nlohmann::ordered_json::array();
    for (int v = 1; v <= m.n; ++v)
        if (m.contains(v)) vars.push_back(v);
    return vars;
}

// True when no further hunting can help: each side either has its exemplar
// or is certified impossible by a strict verdict.
bool exemplars_done(const FaceSignAnalysis& a) {
    const bool need_pos =
        !a.positive_value && a.verdict.kind != SignKind::StrictlyNegative;
    const bool need_neg =
        !a.negative_value && a.verdict.kind != SignKind::StrictlyPositive;
    return !need_pos && !need_neg;
}

const std::vector<Rat>& exemplar_grid_values() {
    static const std::vector<Rat> values = {
        make_rat(1),    make_rat(-1),    make_rat(2),    make_rat(-2),
        make_rat(1, 2), make_rat(-1, 2), make_rat(3),    make_rat(-3),
        make_rat(1, 3), make_rat(-1, 3),
    };
    return values;
}

// Exact positive / negative sample values of the face polynomial at points
// with all coordinates nonzero.  The verdict's witnesses are used when they
// already carry a sign; the rest is a deterministic hunt: sign corners
// first, then a small rational grid (enumerated in full while cheap, random
// above that), then a seeded rational fallback.  Sides ruled out by a strict
// certificate are skipped.
void hunt_exemplars(FaceSignAnalysis& a, std::uint64_t seed) {
    for (const WitnessPoint& w : a.verdict.witnesses) {
        if (w.value > 0 && !a.positive_value) a.positive_value = w;
        if (w.value < 0 && !a.negative_value) a.negative_value = w;
    }
    if (exemplars_done(a)) return;

    const Polynomial& g = a.face_poly;
    const int n = g.var_count();
    const auto consider = [&](const std::vector<Rat>& x) {
        const Rat v = g.evaluate(x);
        if (v > 0 && !a.positive_value) a.positive_value = WitnessPoint{x, v};
        if (v < 0 && !a.negative_value) a.negative_value = WitnessPoint{x, v};
        return exemplars_done(a);
    };

    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
        std::vector<Rat> x(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] = (bits >> j) & 1u ? make_rat(-1) : make_rat(1);
        if (consider(x)) return;
    }

    const std::vector<Rat>& values = exemplar_grid_values();
    const double grid_size = std::pow(static_cast<double>(values.size()), n);
    if (grid_size <= static_cast<double>(kExemplarFullGridLimit)) {
        std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
        while (true) {
            std::vector<Rat> x(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                x[static_cast<std::size_t>(j)] = values[digit[static_cast<std::size_t>(j)]];
            if (consider(x)) return;
            int j = 0;
            while (j < n && ++digit[static_cast<std::size_t>(j)] == values.size()) {
                digit[static_cast<std::size_t>(j)] = 0;
                ++j;
            }
            if (j == n) break;
        }
    } else {
        Prng rng(mix_seed(seed, kExemplarStream));
        for (int s = 0; s < kExemplarRandomDraws; ++s) {
            std::vector<Rat> x(static_cast<std::size_t>(n));
            for (Rat& c : x)
                c = values[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(values.size()) - 1))];
            if (consider(x)) return;
        }
    }

    Prng rng(mix_seed(seed, kExemplarStream + 1));
    for (int s = 0; s < kExemplarRationalDraws; ++s) {
        std::vector<Rat> x(static_cast<std::size_t>(n));
        for (Rat& c : x) {
            std::int64_t num = 0;
            while (num == 0) num = rng.uniform_int(-24, 24);
            c = make_rat(num, rng.uniform_int(1, 6));
        }
        if (consider(x)) return;
    }
}

bool has_vanishing_subspace(const Polynomial& f, SubspaceMask* out) {
    const int n = f.var_count();
    for (std::uint32_t bits = 1; bits < (std::uint32_t{1} << n); ++bits) {
        const SubspaceMask m{bits, n};
        if (restrict_to_subspace(f, m).is_zero()) {
            if (out) *out = m;
            return true;
        }
    }
    return false;
}

}  // namespace

// --- names -----------------------------------------------------------------

std::string necessary_status_name(NecessaryStatus s) {
    switch (s) {
        case NecessaryStatus::ConsistentWithCompact: return "consistent_with_compact";
        case NecessaryStatus::ViolatedNotCompact: return "violated_not_compact";
        case NecessaryStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string sufficient_status_name(SufficientStatus s) {
    switch (s) {
        case SufficientStatus::CompactCertified: return "compact_certified";
        case SufficientStatus::NotApplicable: return "not_applicable";
        case SufficientStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string compactness_verdict_name(CompactnessVerdict v) {
    switch (v) {
        case CompactnessVerdict::CompactCertified: return "compact_certified";
        case CompactnessVerdict::NotCompactCertified: return "not_compact_certified";
        case CompactnessVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string stability_verdict_name(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::StablyCompactCertified: return "stably_compact_certified";
        case StabilityVerdict::NotStablyCompact: return "not_stably_compact";
        case StabilityVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

// --- per-face analysis -------------------------------------------------------

std::vector<FaceSignAnalysis> analyze_face_signs(const Polynomial& f,
                                                 const NewtonPolytope& p,
                                                 const std::vector<Face>& faces,
                                                 const SearchBudget& budget,
                                                 int threads) {
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (faces[i].at_infinity) selected.push_back(i);

    std::vector<FaceSignAnalysis> out(selected.size());
    const auto work = [&](std::size_t k) {
        const std::size_t face_idx = selected[k];
        FaceSignAnalysis a;
        a.face_index = face_idx;
        a.face_poly = face_polynomial(f, p, faces[face_idx]);
        SearchBudget b = budget;
        b.seed = mix_seed(budget.seed, kFaceStream + face_idx);
        a.verdict = sign_on_punctured_space(a.face_poly, b);
        hunt_exemplars(a, b.seed);
        out[k] = std::move(a);
    };

    const int pool_size = std::min<int>(threads, static_cast<int>(out.size()));
    if (pool_size <= 1) {
        for (std::size_t k = 0; k < out.size(); ++k) work(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(pool_size));
        for (int t = 0; t < pool_size; ++t)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < out.size();
                     k = next.fetch_add(1))
                    work(k);
            });
        for (std::thread& th : pool) th.join();
    }
    return out;
}

// --- necessary conditions ---------------------------------------------------

void apply_necessary_conditions(const Polynomial& f, const NewtonPolytope& p,
                                const std::vector<FaceSignAnalysis>& analyses,
                                CompactnessReport& report) {
    (void)p;
    const int n = f.var_count();
    report.value_at_origin = f.coeff(ExponentVec(static_cast<std::size_t>(n), 0));

    std::optional<SubspaceMask> vanishing;
    for (std::uint32_t bits = 1; bits < (std::uint32_t{1} << n); ++bits) {
        const SubspaceMask m{bits, n};
        const bool v = restrict_to_subspace(f, m).is_zero();
        report.subspace_tests.push_back({m, v});
        if (v && !vanishing) vanishing = m;
    }
    if (vanishing) {
        report.necessary_status = NecessaryStatus::ViolatedNotCompact;
        UnboundednessWitness w;
        w.vanishing_subspace = *vanishing;
        report.witness = w;
        report.note = join_note(
            report.note,
            "f vanishes identically on a coordinate subspace; that subspace lies "
            "inside the zero set, which is therefore unbounded");
        return;
    }

    // A boundary face value > 0 rules out "all face polynomials <= 0", a
    // value < 0 rules out "all face polynomials >= 0"; together they rule
    // out both one-sided conditions, so the zero set cannot be compact.
    // Prefer a pair on a single face (the last face in enumeration order,
    // which has the highest dimension).
    const FaceSignAnalysis* pair_face = nullptr;
    for (auto it = analyses.rbegin(); it != analyses.rend(); ++it)
        if (it->positive_value && it->negative_value) {
            pair_face = &*it;
            break;
        }
    const FaceSignAnalysis* pos_face = nullptr;
    const FaceSignAnalysis* neg_face = nullptr;
    if (pair_face) {
        pos_face = neg_face = pair_face;
    } else {
        for (const FaceSignAnalysis& a : analyses) {
            if (!pos_face && a.positive_value) pos_face = &a;
            if (!neg_face && a.negative_value) neg_face = &a;
        }
    }
    if (pos_face && neg_face) {
        report.necessary_status = NecessaryStatus::ViolatedNotCompact;
        UnboundednessWitness w;
        w.positive_face = pos_face->face_index;
        w.negative_face = neg_face->face_index;
        w.positive_point = pos_face->positive_value;
        w.negative_point = neg_face->negative_value;
        report.witness = w;
        report.note = join_note(
            report.note,
            pair_face ? "a boundary face polynomial takes values of both strict "
                        "signs, so neither one-sided boundary condition can hold"
                      : "boundary face polynomials take values of both strict "
                        "signs (on different faces), so neither one-sided "
                        "boundary condition can hold");
        return;
    }

    bool any_unknown = false;
    for (const FaceSignAnalysis& a : analyses)
        if (a.verdict.kind == SignKind::Unknown) any_unknown = true;
    if (any_unknown) {
        report.necessary_status = NecessaryStatus::Inconclusive;
        report.note = join_note(report.note,
                                "no violation found, but some boundary face signs "
                                "are undetermined at the search budget");
    } else {
        report.necessary_status = NecessaryStatus::ConsistentWithCompact;
    }
}

// --- sufficient conditions ----------------------------------------------------

void apply_sufficient_conditions(const std::vector<FaceSignAnalysis>& analyses,
                                 CompactnessReport& report) {
    bool vanishing = false;
    for (const SubspaceVanishing& t : report.subspace_tests)
        if (t.vanishes) vanishing = true;
    if (vanishing) {
        report.sufficient_status = SufficientStatus::NotApplicable;
        report.note = join_note(report.note,
                                "strict-sign criterion inapplicable: a coordinate-"
                                "subspace restriction of f vanishes");
        return;
    }
    if (analyses.empty()) {
        report.sufficient_status = SufficientStatus::Inconclusive;
        report.note = join_note(report.note, "no boundary faces at infinity found");
        return;
    }

    std::size_t pos = 0, neg = 0, nonstrict = 0, unknown = 0;
    for (const FaceSignAnalysis& a : analyses) {
        switch (a.verdict.kind) {
            case SignKind::StrictlyPositive: ++pos; break;
            case SignKind::StrictlyNegative: ++neg; break;
            case SignKind::TakesZero:
            case SignKind::TakesBothSigns: ++nonstrict; break;
            case SignKind::Unknown: ++unknown; break;
        }
    }

    if (nonstrict > 0) {
        report.sufficient_status = SufficientStatus::NotApplicable;
        report.note = join_note(report.note,
                                "strict-sign criterion inapplicable: a boundary "
                                "face polynomial vanishes or changes sign");
    } else if (unknown == 0 && pos == analyses.size()) {
        report.sufficient_status = SufficientStatus::CompactCertified;
        report.certified_sign = 1;
    } else if (unknown == 0 && neg == analyses.size()) {
        report.sufficient_status = SufficientStatus::CompactCertified;
        report.certified_sign = -1;
    } else if (pos > 0 && neg > 0) {
        report.sufficient_status = SufficientStatus::NotApplicable;
        report.note = join_note(report.note,
                                "strict-sign criterion inapplicable: boundary "
                                "faces carry strict signs of both kinds");
    } else {
        report.sufficient_status = SufficientStatus::Inconclusive;
        report.note = join_note(report.note,
                                "strict-sign criterion undecided: some boundary "
                                "face signs are undetermined at the search budget");
    }
}

// --- combined compactness report -----------------------------------------------

CompactnessReport compactness_report(const Polynomial& f, const NewtonPolytope& p,
                                     const std::vector<FaceSignAnalysis>& analyses) {
    if (f.is_constant())
        throw DomainError("compactness analysis requires a nonconstant polynomial");

    CompactnessReport r;
    if (f.var_count() == 1) {
        // One variable: finitely many real zeros, compact outright.  The
        // boundary-face logic below is meaningful only for two or more
        // variables (spheres there are connected; the two-point "sphere" of
        // the line is not), so it is not consulted.
        r.value_at_origin = f.coeff(ExponentVec(1, 0));
        r.subspace_tests.push_back({SubspaceMask::full(1), false});
        r.necessary_status = NecessaryStatus::ConsistentWithCompact;
        r.sufficient_status = SufficientStatus::CompactCertified;
        r.certified_sign = 0;
        r.overall = CompactnessVerdict::CompactCertified;
        r.note =
            "one variable: a nonconstant polynomial has finitely many real "
            "zeros, so the zero set is compact";
        return r;
    }

    apply_necessary_conditions(f, p, analyses, r);
    apply_sufficient_conditions(analyses, r);

    const bool certified = r.sufficient_status == SufficientStatus::CompactCertified;
    const bool refuted = r.necessary_status == NecessaryStatus::ViolatedNotCompact;
    if (certified && refuted) {
        r.overall = CompactnessVerdict::Inconclusive;
        r.note = join_note(r.note,
                           "a compactness certificate and an unboundedness witness "
                           "are both present; they cannot both be right, so no "
                           "verdict is issued");
    } else if (certified) {
        r.overall = CompactnessVerdict::CompactCertified;
    } else if (refuted) {
        r.overall = CompactnessVerdict::NotCompactCertified;
    } else {
        r.overall = CompactnessVerdict::Inconclusive;
        if (r.necessary_status == NecessaryStatus::ConsistentWithCompact &&
            r.sufficient_status == SufficientStatus::NotApplicable)
            r.note = join_note(r.note,
                               "the exact criteria leave a gap here: no refutation "
                               "exists among the face values found, and the "
                               "strict-sign certificate does not apply");
    }
    return r;
}

// --- stability report -------------------------------------------------------------

StabilityReport stability_report(const Polynomial& f, const NewtonPolytope& p,
                                 const std::vector<FaceSignAnalysis>& analyses) {
    (void)p;
    if (f.is_constant())
        throw DomainError("stability analysis requires a nonconstant polynomial");

    StabilityReport r;
    if (f.var_count() == 1) {
        r.verdict = StabilityVerdict::StablyCompactCertified;
        r.certified_sign = 0;
        r.note =
            "one variable: the zero set is finite and stays finite under "
            "sufficiently small coefficient perturbations, hence stably compact";
        return r;
    }

    SubspaceMask vanishing;
    if (has_vanishing_subspace(f, &vanishing)) {
        // Perturbations supported in the polytope cannot re-populate that
        // subspace: a lattice point of the hull with zeros outside J would
        // be a convex combination of support points with zeros outside J,
        // and there are none.  So the unboundedness is stable.
        r.verdict = StabilityVerdict::NotStablyCompact;
        r.vanishing_subspace = vanishing;
        r.note =
            "f vanishes identically on a coordinate subspace, so the zero set "
            "is unbounded, and perturbations supported in the polytope leave "
            "that restriction zero";
        return r;
    }

    const FaceSignAnalysis* zero_face = nullptr;
    const FaceSignAnalysis* both_face = nullptr;
    std::size_t pos = 0, neg = 0, unknown = 0;
    for (const FaceSignAnalysis& a : analyses) {
        switch (a.verdict.kind) {
            case SignKind::TakesZero:
                if (!zero_face) zero_face = &a;
                break;
            case SignKind::TakesBothSigns:
                if (!both_face) both_face = &a;
                break;
            case SignKind::StrictlyPositive: ++pos; break;
            case SignKind::StrictlyNegative: ++neg; break;
            case SignKind::Unknown: ++unknown; break;
        }
    }

    if (zero_face || both_face) {
        const FaceSignAnalysis* w = zero_face ? zero_face : both_face;
        r.verdict = StabilityVerdict::NotStablyCompact;
        r.witness_face = w->face_index;
        r.witnesses = w->verdict.witnesses;
        r.note = zero_face
                     ? "a boundary face polynomial vanishes at the witness point "
                       "(all coordinates nonzero), violating the nonvanishing "
                       "condition for stable compactness"
                     : "a boundary face polynomial takes both strict signs at the "
                       "witness points, so no uniform strict sign exists and the "
                       "zero set is not stably compact";
        return r;
    }

    if (analyses.empty()) {
        r.verdict = StabilityVerdict::Inconclusive;
        r.note = "no boundary faces at infinity found";
        return r;
    }
    if (unknown == 0 && pos == analyses.size()) {
        r.verdict = StabilityVerdict::StablyCompactCertified;
        r.certified_sign = 1;
        r.note = "every boundary face polynomial is certified strictly positive "
                 "away from the coordinate hyperplanes";
        return r;
    }
    if (unknown == 0 && neg == analyses.size()) {
        r.verdict = StabilityVerdict::StablyCompactCertified;
        r.certified_sign = -1;
        r.note = "every boundary face polynomial is certified strictly negative "
                 "away from the coordinate hyperplanes";
        return r;
    }
    if (unknown == 0) {
        // Strict certificates of both signs with no vanishing face anywhere:
        // adjacent faces sharing a subface would force a zero between them,
        // so these certificates cannot all be right.
        r.inconsistent = true;
        r.verdict = StabilityVerdict::Inconclusive;
        r.note = "boundary faces carry strict-sign certificates of both signs "
                 "yet no face was found to vanish; these results cannot all be "
                 "right, so no verdict is issued";
        return r;
    }
    // Some faces are undetermined, so a configuration with exact values of
    // both signs is consistent and simply refutes compactness: a set that is
    // not compact is not stably compact either.  Prefer a pair living on a
    // single face (that face then provably takes both signs); the last match
    // wins so a highest-dimensional face is reported.
    const FaceSignAnalysis* pair_face = nullptr;
    for (const FaceSignAnalysis& a : analyses)
        if (a.positive_value && a.negative_value) pair_face = &a;
    if (pair_face) {
        r.verdict = StabilityVerdict::NotStablyCompact;
        r.witness_face = pair_face->face_index;
        r.witnesses = {*pair_face->positive_value, *pair_face->negative_value};
        r.note = "a boundary face polynomial was evaluated to values of both "
                 "signs at points with all coordinates nonzero, so no uniform "
                 "strict sign exists and the zero set is not stably compact";
        return r;
    }
    const WitnessPoint* pos_value = nullptr;
    const WitnessPoint* neg_value = nullptr;
    for (const FaceSignAnalysis& a : analyses) {
        if (!pos_value && a.positive_value) pos_value = &*a.positive_value;
        if (!neg_value && a.negative_value) neg_value = &*a.negative_value;
    }
    if (pos_value && neg_value) {
        r.verdict = StabilityVerdict::NotStablyCompact;
        r.witnesses = {*pos_value, *neg_value};
        r.note = "boundary face polynomials take values of both signs, which "
                 "already rules out a compact zero set, so the zero set is "
                 "not stably compact";
        return r;
    }

    r.verdict = StabilityVerdict::Inconclusive;
    if (pos > 0 && neg > 0)
        r.note = "strict signs of both kinds are certified and other faces are "
                 "undetermined; a uniform sign is impossible, so some "
                 "undetermined face must vanish, but no witness was found "
                 "within the search budget";
    else
        r.note = "some boundary face signs are undetermined at the search budget";
    return r;
}

// --- epsilon estimate ---------------------------------------------------------------

Rat epsilon_estimate(const Polynomial& f, const NewtonPolytope& p,
                     const SandwichEstimate& sandwich) {
    if (!sandwich.violations.empty())
        throw DomainError("perturbation radius estimate requires a sandwich pass "
                          "without violations");
    if (!(sandwich.c1_hat > 0))
        throw DomainError("perturbation radius estimate requires a positive "
                          "sampled lower ratio");
    Rat best = sandwich.c1_hat / 2;
    for (const ExponentVec& v : p.vertices) {
        const Rat c = f.coeff(v);
        Rat a = c;
        if (a < 0) a = -c;
        if (a != 0 && a < best) best = a;
    }
    return best;
}

// --- orchestration -----------------------------------------------------------------

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

}  // namespace

AnalysisResult analyze(const Polynomial& f, const AnalyzeOptions& options) {
    if (f.is_constant())
        throw DomainError("analysis requires a nonconstant polynomial");

    using Clock = std::chrono::steady_clock;
    AnalysisResult r;
    r.var_count = f.var_count();
    r.seed = options.budget.seed;
    r.univariate = r.var_count == 1;

    auto t = Clock::now();
    r.polytope = newton_polytope(f);
    r.faces = enumerate_faces(r.polytope);
    boundary_at_infinity(r.polytope, r.faces);
    r.geometry_digest = geometry_digest(r.polytope, r.faces);
    r.timings_ms["geometry"] = ms_since(t);

    t = Clock::now();
    r.face_analyses =
        analyze_face_signs(f, r.polytope, r.faces, options.budget, options.threads);
    r.timings_ms["face_signs"] = ms_since(t);

    t = Clock::now();
    r.compactness = compactness_report(f, r.polytope, r.face_analyses);
    r.stability = stability_report(f, r.polytope, r.face_analyses);
    r.timings_ms["criteria"] = ms_since(t);

    t = Clock::now();
    r.nondegeneracy = check_nondegeneracy(f, r.polytope, r.faces, options.budget);
    r.timings_ms["nondegeneracy"] = ms_since(t);

    t = Clock::now();
    r.eventual_sign = eventual_sign_probe(f, options.probe_radii, options.budget);
    r.compactness.probe_evidence =
        numeric_compactness_probe(f, options.probe_radii, options.budget);
    r.timings_ms["probes"] = ms_since(t);

    if (r.var_count >= 2) {
        int sigma = r.stability.certified_sign;
        if (sigma == 0) {
            for (const FaceSignAnalysis& a : r.face_analyses) {
                if (a.verdict.kind == SignKind::StrictlyPositive) {
                    sigma = 1;
                    break;
                }
                if (a.verdict.kind == SignKind::StrictlyNegative) {
                    sigma = -1;
                    break;
                }
            }
        }
        if (sigma == 0) sigma = 1;
        t = Clock::now();
        r.stability.sandwich =
            sandwich_check(f, r.polytope, sigma, options.sandwich_radius,
                           options.sandwich_samples,
                           mix_seed(options.budget.seed, kSandwichStream));
        r.timings_ms["sandwich"] = ms_since(t);

        if (r.stability.verdict == StabilityVerdict::StablyCompactCertified) {
            const SandwichEstimate& sw = *r.stability.sandwich;
            if (sw.violations.empty() && sw.c1_hat > 0) {
                r.stability.epsilon_estimate = epsilon_estimate(f, r.polytope, sw);
                r.stability.epsilon_provenance =
                    "heuristic: half the smallest sampled ratio of the signed "
                    "polynomial to the lattice monomial sum, capped by the "
                    "smallest vertex coefficient magnitude; sampled, not proved";
            } else {
                r.stability.note = join_note(
                    r.stability.note,
                    "sandwich sampling found nonpositive signed values at this "
                    "radius (which may lie below the comparison threshold), so "
                    "no perturbation-radius estimate is offered");
            }
        }
    }

    // Exact-logic cross-checks: certificates and witnesses are all exact, so
    // these combinations indicate a bug somewhere and are flagged loudly.
    if (r.compactness.sufficient_status == SufficientStatus::CompactCertified &&
        r.compactness.necessary_status == NecessaryStatus::ViolatedNotCompact) {
        r.internally_inconsistent = true;
        r.inconsistency_notes.push_back(
            "a compactness certificate and an unboundedness witness are both "
            "present; they cannot both be right");
    }
    if (r.stability.inconsistent) {
        r.internally_inconsistent = true;
        r.inconsistency_notes.push_back(
            "strict-sign certificates of both signs across boundary faces "
            "cannot all hold");
    }
    if (r.var_count >= 2 &&
        r.compactness.sufficient_status == SufficientStatus::CompactCertified &&
        r.nondegeneracy.any_degenerate) {
        r.internally_inconsistent = true;
        r.inconsistency_notes.push_back(
            "every boundary face carries a strict-sign certificate, yet the "
            "critical-zero search produced an exact vanishing point on one of "
            "them");
    }
    if (r.stability.verdict == StabilityVerdict::StablyCompactCertified &&
        r.compactness.overall != CompactnessVerdict::CompactCertified) {
        r.internally_inconsistent = true;
        r.inconsistency_notes.push_back(
            "stable compactness was certified without a plain compactness "
            "certificate");
    }
    if (r.compactness.overall == CompactnessVerdict::NotCompactCertified &&
        r.stability.verdict != StabilityVerdict::NotStablyCompact &&
        !r.stability.inconsistent) {
        r.internally_inconsistent = true;
        r.inconsistency_notes.push_back(
            "the zero set was certified noncompact, but the stability verdict "
            "does not record the consequence that it is not stably compact");
    }

    // Soft disagreement with the sampled eventual sign is only noted: the
    // probe radii may sit inside the transition zone below the comparison
    // threshold radius.
    if (r.var_count >= 2 && r.compactness.certified_sign != 0) {
        const EventualSign expected = r.compactness.certified_sign > 0
                                          ? EventualSign::NonnegBeyond
                                          : EventualSign::NonposBeyond;
        if (r.eventual_sign.kind != expected)
            r.compactness.note = join_note(
                r.compactness.note,
                "the sampled eventual sign disagrees at the probe radii; those "
                "radii may lie inside the transition zone");
    }

    return r;
}

// --- JSON ------------------------------------------------------------------------

nlohmann::ordered_json compactness_to_json(const CompactnessReport& r,
                                           const std::vector<FaceSignAnalysis>& analyses) {
    nlohmann::ordered_json j;
    j["overall"] = compactness_verdict_name(r.overall);
    j["necessary"] = necessary_status_name(r.necessary_status);
    j["sufficient"] = sufficient_status_name(r.sufficient_status);
    j["certified_sign"] = r.certified_sign;
    j["value_at_origin"] = rat_to_string(r.value_at_origin);

    j["subspace_tests"] = nlohmann::ordered_json::array();
    for (const SubspaceVanishing& t : r.subspace_tests) {
        nlohmann::ordered_json e;
        e["variables"] = subspace_to_json(t.subspace);
        e["vanishes"] = t.vanishes;
        j["subspace_tests"].push_back(e);
    }

    j["face_signs"] = nlohmann::ordered_json::array();
    for (const FaceSignAnalysis& a : analyses) {
        nlohmann::ordered_json e;
        e["face_index"] = a.face_index;
        e["face_polynomial"] = to_string(a.face_poly);
        e["verdict"] = verdict_to_json(a.verdict);
        e["positive_value"] =
            a.positive_value ? witness_to_json(*a.positive_value)
                             : nlohmann::ordered_json(nullptr);
        e["negative_value"] =
            a.negative_value ? witness_to_json(*a.negative_value)
                             : nlohmann::ordered_json(nullptr);
        j["face_signs"].push_back(e);
    }

    if (r.witness) {
        nlohmann::ordered_json w;
        if (r.witness->vanishing_subspace)
            w["vanishing_subspace"] = subspace_to_json(*r.witness->vanishing_subspace);
        if (r.witness->positive_face) {
            w["positive_face"] = *r.witness->positive_face;
            w["positive"] = witness_to_json(*r.witness->positive_point);
        }
        if (r.witness->negative_face) {
            w["negative_face"] = *r.witness->negative_face;
            w["negative"] = witness_to_json(*r.witness->negative_point);
        }
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }

    j["probe"] = r.probe_evidence ? probe_to_json(*r.probe_evidence)
                                  : nlohmann::ordered_json(nullptr);
    j["note"] = r.note;
    return j;
}

nlohmann::ordered_json stability_to_json(const StabilityReport& r) {
    nlohmann::ordered_json j;
    j["verdict"] = stability_verdict_name(r.verdict);
    j["certified_sign"] = r.certified_sign;
    j["witness_face"] = r.witness_face ? nlohmann::ordered_json(*r.witness_face)
                                       : nlohmann::ordered_json(nullptr);
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const WitnessPoint& w : r.witnesses) j["witnesses"].push_back(witness_to_json(w));
    j["vanishing_subspace"] = r.vanishing_subspace
                                  ? subspace_to_json(*r.vanishing_subspace)
                                  : nlohmann::ordered_json(nullptr);
    j["epsilon_estimate"] = r.epsilon_estimate
                                ? nlohmann::ordered_json(rat_to_string(*r.epsilon_estimate))
                                : nlohmann::ordered_json(nullptr);
    if (r.epsilon_estimate) j["epsilon_estimate_approx"] = rat_to_double(*r.epsilon_estimate);
    if (!r.epsilon_provenance.empty()) j["epsilon_provenance"] = r.epsilon_provenance;
    j["sandwich"] = r.sandwich ? sandwich_to_json(*r.sandwich)
                               : nlohmann::ordered_json(nullptr);
    j["inconsistent"] = r.inconsistent;
    j["note"] = r.note;
    return j;
}

nlohmann::ordered_json analysis_to_json(const Polynomial& f, const AnalysisResult& r,
                                        bool include_timings) {
    nlohmann::ordered_json j;
    j["report_version"] = 1;
    nlohmann::ordered_json input;
    input["polynomial"] = to_string(f);
    input["variables"] = r.var_count;
    input["terms"] = f.term_count();
    j["input"] = input;
    j["geometry_digest"] = r.geometry_digest;
    j["univariate"] = r.univariate;
    j["compactness"] = compactness_to_json(r.compactness, r.face_analyses);
    j["stability"] = stability_to_json(r.stability);
    j["nondegeneracy"] = nondegeneracy_to_json(r.nondegeneracy);
    j["eventual_sign"] = eventual_sign_to_json(r.eventual_sign);
    j["internally_inconsistent"] = r.internally_inconsistent;
    if (!r.inconsistency_notes.empty()) j["inconsistency_notes"] = r.inconsistency_notes;
    j["seed"] = r.seed;
    if (include_timings) j["timings_ms"] = r.timings_ms;
    return j;
}

}  // namespace nwc

#include <doctest.h>

#include <algorithm>

#include "nwc/criteria.hpp"

using namespace nwc;

namespace {

struct Fixture {
    Polynomial f;
    NewtonPolytope p;
    std::vector<Face> faces;
    std::vector<FaceSignAnalysis> analyses;
};

Fixture make_fixture(const std::string& text, int n, const SearchBudget& budget = {}) {
    Fixture fx;
    fx.f = parse_polynomial(text, n);
    fx.p = newton_polytope(fx.f);
    fx.faces = enumerate_faces(fx.p);
    boundary_at_infinity(fx.p, fx.faces);
    fx.analyses = analyze_face_signs(fx.f, fx.p, fx.faces, budget);
    return fx;
}

bool all_coords_nonzero(const std::vector<Rat>& x) {
    return std::all_of(x.begin(), x.end(), [](const Rat& c) { return c != 0; });
}

}  // namespace

TEST_CASE("face sign analysis covers exactly the boundary faces, with exemplars") {
    const Fixture fx = make_fixture("x1^2 + x2^2 - 1", 2);

    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < fx.faces.size(); ++i)
        if (fx.faces[i].at_infinity) expected.push_back(i);
    REQUIRE(fx.analyses.size() == expected.size());
    CHECK(expected.size() == 3);  // two axis vertices and the hypotenuse edge

    for (std::size_t k = 0; k < fx.analyses.size(); ++k) {
        const FaceSignAnalysis& a = fx.analyses[k];
        CHECK(a.face_index == expected[k]);
        CHECK(a.face_poly == face_polynomial(fx.f, fx.p, fx.faces[a.face_index]));
        CHECK(a.verdict.kind == SignKind::StrictlyPositive);
        // Exemplars must be honest evaluations of the face polynomial.
        REQUIRE(a.positive_value.has_value());
        CHECK(all_coords_nonzero(a.positive_value->point));
        CHECK(a.face_poly.evaluate(a.positive_value->point) == a.positive_value->value);
        CHECK(a.positive_value->value > 0);
        CHECK_FALSE(a.negative_value.has_value());  // ruled out by the certificate
    }
}

TEST_CASE("circle: compact and stably compact with positive sign") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
    const AnalysisResult r = analyze(f, {});

    CHECK(r.compactness.overall == CompactnessVerdict::CompactCertified);
    CHECK(r.compactness.necessary_status == NecessaryStatus::ConsistentWithCompact);
    CHECK(r.compactness.sufficient_status == SufficientStatus::CompactCertified);
    CHECK(r.compactness.certified_sign == 1);
    CHECK(r.compactness.value_at_origin == make_rat(-1));
    CHECK_FALSE(r.compactness.witness.has_value());

    CHECK(r.stability.verdict == StabilityVerdict::StablyCompactCertified);
    CHECK(r.stability.certified_sign == 1);
    CHECK_FALSE(r.stability.inconsistent);

    // Three subspace tests (J = {1}, {2}, {1,2}), none vanishing.
    REQUIRE(r.compactness.subspace_tests.size() == 3);
    for (const SubspaceVanishing& t : r.compactness.subspace_tests)
        CHECK_FALSE(t.vanishes);

    // Sandwich: strictly positive ratios, no violations, and the radius
    // estimate equals half the sampled lower ratio (below the vertex
    // coefficient cap of 1 here).
    REQUIRE(r.stability.sandwich.has_value());
    const SandwichEstimate& sw = *r.stability.sandwich;
    CHECK(sw.sigma == 1);
    CHECK(sw.c1_hat > 0);
    CHECK(sw.c1_hat <= sw.c2_hat);
    CHECK(sw.c2_hat < 1);
    CHECK(sw.violations.empty());
    REQUIRE(r.stability.epsilon_estimate.has_value());
    CHECK(*r.stability.epsilon_estimate == sw.c1_hat / 2);
    CHECK_FALSE(r.stability.epsilon_provenance.empty());

    REQUIRE(r.compactness.probe_evidence.has_value());
    CHECK_FALSE(r.compactness.probe_evidence->far_zeros_found);
    CHECK(r.eventual_sign.kind == EventualSign::NonnegBeyond);
    CHECK(r.nondegeneracy.all_certified);
    CHECK_FALSE(r.internally_inconsistent);
}

TEST_CASE("negated circle: the mirrored certificate carries sign -1") {
    const Polynomial f = parse_polynomial("-x1^2 - x2^2 - 1", 2);
    const AnalysisResult r = analyze(f, {});
    CHECK(r.compactness.overall == CompactnessVerdict::CompactCertified);
    CHECK(r.compactness.certified_sign == -1);
    CHECK(r.stability.verdict == StabilityVerdict::StablyCompactCertified);
    CHECK(r.stability.certified_sign == -1);
    CHECK(r.eventual_sign.kind == EventualSign::NonposBeyond);
    REQUIRE(r.stability.sandwich.has_value());
    CHECK(r.stability.sandwich->sigma == -1);
    CHECK(r.stability.sandwich->violations.empty());
    CHECK(r.stability.epsilon_estimate.has_value());
}

TEST_CASE("perfect square falls in the gap: no verdict, but exact stability refutation") {
    const Polynomial f = parse_polynomial("(x1 - x2)^2", 2);
    const AnalysisResult r = analyze(f, {});

    CHECK(r.compactness.overall == CompactnessVerdict::Inconclusive);
    CHECK(r.compactness.necessary_status == NecessaryStatus::ConsistentWithCompact);
    CHECK(r.compactness.sufficient_status == SufficientStatus::NotApplicable);
    CHECK_FALSE(r.compactness.note.empty());

    // The full polynomial is its own boundary edge; it vanishes at (1,1).
    CHECK(r.stability.verdict == StabilityVerdict::NotStablyCompact);
    REQUIRE(r.stability.witness_face.has_value());
    REQUIRE_FALSE(r.stability.witnesses.empty());
    const FaceSignAnalysis* witness_analysis = nullptr;
    for (const FaceSignAnalysis& a : r.face_analyses)
        if (a.face_index == *r.stability.witness_face) witness_analysis = &a;
    REQUIRE(witness_analysis != nullptr);
    CHECK(witness_analysis->verdict.kind == SignKind::TakesZero);
    for (const WitnessPoint& w : r.stability.witnesses) {
        CHECK(all_coords_nonzero(w.point));
        CHECK(witness_analysis->face_poly.evaluate(w.point) == w.value);
        CHECK(w.value == 0);
    }

    // The numeric probe sees the unbounded zero line along the diagonal.
    REQUIRE(r.compactness.probe_evidence.has_value());
    CHECK(r.compactness.probe_evidence->far_zeros_found);
    bool outermost = false;
    for (const ApproximateZero& z : r.compactness.probe_evidence->far_zeros) {
        CHECK(z.method == "minimum tracking");  // a square never changes sign
        double norm2 = 0;
        for (double c : z.point) norm2 += c * c;
        CHECK(std::abs(std::sqrt(norm2) - z.radius) < 1e-6 * z.radius);
        if (z.radius == 100.0) outermost = true;
    }
    CHECK(outermost);

    // Degenerate boundary point, as the gradient also vanishes at (1,1).
    CHECK(r.nondegeneracy.any_degenerate);
    CHECK_FALSE(r.internally_inconsistent);
}

TEST_CASE("hyperbola: refuted by an exact opposite-sign pair on the edge face") {
    const Polynomial f = parse_polynomial("x1*x2 - 1", 2);
    const AnalysisResult r = analyze(f, {});

    CHECK(r.compactness.overall == CompactnessVerdict::NotCompactCertified);
    CHECK(r.compactness.necessary_status == NecessaryStatus::ViolatedNotCompact);
    REQUIRE(r.compactness.witness.has_value());
    const UnboundednessWitness& w = *r.compactness.witness;
    CHECK_FALSE(w.vanishing_subspace.has_value());
    REQUIRE(w.positive_face.has_value());
    REQUIRE(w.negative_face.has_value());
    CHECK(*w.positive_face == *w.negative_face);  // both signs on one face

    // The chosen face is the highest-dimensional boundary face (the edge).
    int max_dim = -1;
    for (const FaceSignAnalysis& a : r.face_analyses)
        max_dim = std::max(max_dim, r.faces[a.face_index].dim);
    CHECK(r.faces[*w.positive_face].dim == max_dim);
    CHECK(max_dim == 1);

    // Both witness values are exact evaluations of the edge polynomial with
    // all coordinates nonzero.
    const Polynomial edge = face_polynomial(f, r.polytope, r.faces[*w.positive_face]);
    REQUIRE(w.positive_point.has_value());
    REQUIRE(w.negative_point.has_value());
    CHECK(all_coords_nonzero(w.positive_point->point));
    CHECK(all_coords_nonzero(w.negative_point->point));
    CHECK(edge.evaluate(w.positive_point->point) == w.positive_point->value);
    CHECK(edge.evaluate(w.negative_point->point) == w.negative_point->value);
    CHECK(w.positive_point->value > 0);
    CHECK(w.negative_point->value < 0);

    // Stability is refuted by the edge's exact zero at (1,1).
    CHECK(r.stability.verdict == StabilityVerdict::NotStablyCompact);
    REQUIRE(r.stability.witness_face.has_value());
    REQUIRE(r.stability.witnesses.size() == 1);
    CHECK(r.stability.witnesses[0].value == 0);
    CHECK(edge.evaluate(r.stability.witnesses[0].point) == 0);
    CHECK_FALSE(r.internally_inconsistent);
}

TEST_CASE("monomial x1*x2: the smallest vanishing coordinate subspace is the witness") {
    const Polynomial f = parse_polynomial("x1*x2", 2);
    const AnalysisResult r = analyze(f, {});

    CHECK(r.compactness.overall == CompactnessVerdict::NotCompactCertified);
    REQUIRE(r.compactness.witness.has_value());
    REQUIRE(r.compactness.witness->vanishing_subspace.has_value());
    const SubspaceMask m = *r.compactness.witness->vanishing_subspace;
    CHECK(m.count() == 1);
    CHECK(m.contains(1));  // J = {1} comes before J = {2}
    CHECK(restrict_to_subspace(f, m).is_zero());

    bool j1_recorded = false;
    for (const SubspaceVanishing& t : r.compactness.subspace_tests)
        if (t.subspace.bits == m.bits) j1_recorded = t.vanishes;
    CHECK(j1_recorded);

    CHECK(r.stability.verdict == StabilityVerdict::NotStablyCompact);
    CHECK(r.stability.vanishing_subspace.has_value());
    CHECK(r.compactness.sufficient_status == SufficientStatus::NotApplicable);
}

TEST_CASE("x1^2 - x2^2: mixed strict faces plus a vanishing edge, no false alarm") {
    const Polynomial f = parse_polynomial("x1^2 - x2^2", 2);
    const AnalysisResult r = analyze(f, {});

    // The two vertex faces carry opposite strict certificates and the edge
    // vanishes; that is a consistent picture, not an internal contradiction.
    bool saw_pos = false, saw_neg = false, saw_zero = false;
    for (const FaceSignAnalysis& a : r.face_analyses) {
        if (a.verdict.kind == SignKind::StrictlyPositive) saw_pos = true;
        if (a.verdict.kind == SignKind::StrictlyNegative) saw_neg = true;
        if (a.verdict.kind == SignKind::TakesZero) saw_zero = true;
    }
    CHECK(saw_pos);
    CHECK(saw_neg);
    CHECK(saw_zero);
    CHECK_FALSE(r.stability.inconsistent);
    CHECK_FALSE(r.internally_inconsistent);

    CHECK(r.compactness.overall == CompactnessVerdict::NotCompactCertified);
    CHECK(r.stability.verdict == StabilityVerdict::NotStablyCompact);
    REQUIRE(r.compactness.witness.has_value());
    CHECK(*r.compactness.witness->positive_face == *r.compactness.witness->negative_face);
}

TEST_CASE("positivity certified through face certificates, not samples") {
    // Globally nonnegative with zeros at |x1| = |x2| = 1 (a Motzkin-style
    // polynomial): every boundary face is still strictly positive, so the
    // zero set is compact and stays compact under small perturbations.
    const Polynomial f = parse_polynomial("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2);
    const AnalysisResult r = analyze(f, {});

    CHECK(r.compactness.overall == CompactnessVerdict::CompactCertified);
    CHECK(r.compactness.certified_sign == 1);
    CHECK(r.stability.verdict == StabilityVerdict::StablyCompactCertified);
    REQUIRE(r.face_analyses.size() == 6);
    for (const FaceSignAnalysis& a : r.face_analyses) {
        CHECK(a.verdict.kind == SignKind::StrictlyPositive);
        REQUIRE_FALSE(a.verdict.certificates.empty());
        for (const Certificate& c : a.verdict.certificates)
            CHECK_FALSE(verify_certificate(a.face_poly, c).has_value());
    }
    REQUIRE(r.stability.sandwich.has_value());
    CHECK(r.stability.sandwich->violations.empty());
    CHECK(r.stability.sandwich->c1_hat > 0);
    CHECK(r.stability.epsilon_estimate.has_value());
}

TEST_CASE("one variable short-circuits to compact and stably compact") {
    const Polynomial f = parse_polynomial("x1^3 - 2*x1 + 1", 1);
    const AnalysisResult r = analyze(f, {});

    CHECK(r.univariate);
    CHECK(r.compactness.overall == CompactnessVerdict::CompactCertified);
    CHECK(r.compactness.certified_sign == 0);  // no sign claim is made
    CHECK(r.stability.verdict == StabilityVerdict::StablyCompactCertified);
    CHECK(r.stability.certified_sign == 0);
    CHECK_FALSE(r.stability.sandwich.has_value());  // needs a uniform sign
    CHECK_FALSE(r.stability.epsilon_estimate.has_value());
    REQUIRE(r.compactness.probe_evidence.has_value());
    CHECK_FALSE(r.compactness.probe_evidence->far_zeros_found);
    CHECK_FALSE(r.internally_inconsistent);
    CHECK(r.compactness.note.find("one variable") != std::string::npos);
}

TEST_CASE("a cylinder in three variables is refuted") {
    // x3 is free, so the zero set contains vertical lines over the circle.
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 3);
    const AnalysisResult r = analyze(f, {});
    CHECK(r.compactness.overall == CompactnessVerdict::NotCompactCertified);
    CHECK(r.stability.verdict == StabilityVerdict::NotStablyCompact);
}

TEST_CASE("constant and zero polynomials are rejected") {
    CHECK_THROWS_AS(analyze(parse_polynomial("5", 2), {}), DomainError);
    CHECK_THROWS_AS(analyze(parse_polynomial("0", 2), {}), DomainError);
    CHECK_THROWS_AS(analyze(Polynomial(2), {}), DomainError);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    const Polynomial f = parse_polynomial("x1*x2 - 1", 2);
    AnalyzeOptions opt;
    const std::string a = analysis_to_json(f, analyze(f, opt), false).dump();
    const std::string b = analysis_to_json(f, analyze(f, opt), false).dump();
    CHECK(a == b);

    opt.threads = 3;
    const std::string c = analysis_to_json(f, analyze(f, opt), false).dump();
    CHECK(a == c);  // scheduling must not leak into results

    opt.threads = 1;
    opt.budget.seed = 7;
    const std::string d = analysis_to_json(f, analyze(f, opt), false).dump();
    CHECK(a != d);  // but the seed is allowed to
}

TEST_CASE("timings are serialized only on request") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
    const AnalysisResult r = analyze(f, {});
    const nlohmann::ordered_json without = analysis_to_json(f, r, false);
    const nlohmann::ordered_json with = analysis_to_json(f, r, true);
    CHECK_FALSE(without.contains("timings_ms"));
    REQUIRE(with.contains("timings_ms"));
    CHECK(with["timings_ms"].contains("geometry"));
    CHECK(with["timings_ms"].contains("face_signs"));
}

TEST_CASE("analysis JSON exposes the full decision trail") {
    const Polynomial f = parse_polynomial("x1*x2 - 1", 2);
    const AnalysisResult r = analyze(f, {});
    const nlohmann::ordered_json j = analysis_to_json(f, r);

    CHECK(j["report_version"] == 1);
    CHECK(j["input"]["polynomial"] == "x1*x2 - 1");
    CHECK(j["input"]["variables"] == 2);
    CHECK(j["geometry_digest"] == r.geometry_digest);
    CHECK(j["compactness"]["overall"] == "not_compact_certified");
    CHECK(j["compactness"]["face_signs"].size() == r.face_analyses.size());
    CHECK(j["compactness"]["witness"]["positive"]["point"].is_array());
    CHECK(j["stability"]["verdict"] == "not_stably_compact");
    CHECK(j["stability"]["witnesses"].size() == 1);
    CHECK(j["eventual_sign"]["kind"] == "sign_change_found");
    CHECK(j["internally_inconsistent"] == false);
    CHECK(j["seed"] == 0);

    // Approximate data is labeled as such.
    for (const auto& z : j["compactness"]["probe"]["far_zeros"])
        CHECK(z["approximate"] == true);
}

// --- sandwich ------------------------------------------------------------------

TEST_CASE("sandwich samples are exact: beyond the radius, nonzero coordinates") {
    const Polynomial f = parse_polynomial("x1*x2 - 1", 2);
    const NewtonPolytope p = newton_polytope(f);
    const SandwichEstimate sw = sandwich_check(f, p, 1, make_rat(10), 500, 0);

    CHECK(sw.samples == 500);
    CHECK(sw.c1_hat <= sw.c2_hat);
    // The hyperbola has no uniform sign, so violations must appear.
    CHECK_FALSE(sw.violations.empty());
    const Rat radius_sq = make_rat(100);
    for (const WitnessPoint& v : sw.violations) {
        CHECK(all_coords_nonzero(v.point));
        Rat norm2 = 0;
        for (const Rat& c : v.point) {
            Rat sq = c * c;
            norm2 += sq;
        }
        CHECK(norm2 > radius_sq);
        CHECK(f.evaluate(v.point) == v.value);
        CHECK(v.value <= 0);  // sigma = +1: a violation is sigma*f <= 0
    }
}

TEST_CASE("sandwich ratio bounds are attained by actual samples") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
    const NewtonPolytope p = newton_polytope(f);
    const SandwichEstimate sw = sandwich_check(f, p, 1, make_rat(10), 300, 1);
    CHECK(sw.c1_hat > 0);
    CHECK(sw.c2_hat < 1);
    CHECK(sw.violations.empty());

    // Same seed, same result; different sigma mirrors the ratios.
    const SandwichEstimate again = sandwich_check(f, p, 1, make_rat(10), 300, 1);
    CHECK(again.c1_hat == sw.c1_hat);
    CHECK(again.c2_hat == sw.c2_hat);
    const SandwichEstimate neg = sandwich_check(f, p, -1, make_rat(10), 300, 1);
    CHECK(neg.c2_hat == -sw.c1_hat);
    CHECK(neg.c1_hat == -sw.c2_hat);
}

TEST_CASE("a square's sandwich lower bound is zero exactly when a sample hits it") {
    const Polynomial f = parse_polynomial("(x1 - x2)^2", 2);
    const NewtonPolytope p = newton_polytope(f);
    const SandwichEstimate sw = sandwich_check(f, p, 1, make_rat(10), 2000, 0);
    CHECK(sw.c1_hat >= 0);
    CHECK(sw.violations.empty() == (sw.c1_hat > 0));
    // Near-diagonal samples drag the sampled lower constant far below the
    // certified-positive levels seen for genuinely coercive inputs.
    CHECK(sw.c1_hat < make_rat(1, 100));
}

TEST_CASE("sandwich input validation") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
    const NewtonPolytope p = newton_polytope(f);
    CHECK_THROWS_AS(sandwich_check(f, p, 0, make_rat(10), 10, 0), DomainError);
    CHECK_THROWS_AS(sandwich_check(f, p, 1, make_rat(10), 0, 0), DomainError);
    CHECK_THROWS_AS(sandwich_check(f, p, 1, make_rat(-1), 10, 0), DomainError);
    CHECK_THROWS_AS(sandwich_check(parse_polynomial("3", 2), p, 1, make_rat(10), 10, 0),
                    DomainError);
}

TEST_CASE("epsilon estimate requires a clean, positive sandwich") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
    const NewtonPolytope p = newton_polytope(f);

    SandwichEstimate sw = sandwich_check(f, p, 1, make_rat(10), 200, 0);
    const Rat eps = epsilon_estimate(f, p, sw);
    CHECK(eps == sw.c1_hat / 2);  // vertex coefficients are +-1, so the ratio wins
    CHECK(eps > 0);

    SandwichEstimate bad = sw;
    bad.violations.push_back({{make_rat(11), make_rat(1)}, make_rat(0)});
    CHECK_THROWS_AS(epsilon_estimate(f, p, bad), DomainError);
    SandwichEstimate flat = sw;
    flat.c1_hat = make_rat(0);
    CHECK_THROWS_AS(epsilon_estimate(f, p, flat), DomainError);

    // A tiny vertex coefficient caps the estimate.
    const Polynomial g = parse_polynomial("x1^2 + 1/1000000*x2^2 - 1", 2);
    const NewtonPolytope pg = newton_polytope(g);
    SandwichEstimate swg = sandwich_check(g, pg, 1, make_rat(10), 200, 0);
    if (swg.violations.empty() && swg.c1_hat > 0)
        CHECK(epsilon_estimate(g, pg, swg) <= make_rat(1, 1000000));
}

// --- probes ----------------------------------------------------------------------

TEST_CASE("eventual sign probe returns exact signed witnesses") {
    const Polynomial f = parse_polynomial("x1 + x2", 2);
    const EventualSignEvidence ev = eventual_sign_probe(f, {10.0}, {});
    REQUIRE(ev.kind == EventualSign::SignChangeFound);
    REQUIRE(ev.sign_change.size() == 2);
    CHECK(ev.sign_change[0].value > 0);
    CHECK(ev.sign_change[1].value < 0);
    for (const WitnessPoint& w : ev.sign_change) {
        CHECK(all_coords_nonzero(w.point));
        CHECK(f.evaluate(w.point) == w.value);
    }

    const Polynomial circle = parse_polynomial("x1^2 + x2^2 - 1", 2);
    CHECK(eventual_sign_probe(circle, {10.0, 100.0}, {}).kind ==
          EventualSign::NonnegBeyond);
    const Polynomial neg = parse_polynomial("-x1^2 - x2^2 - 1", 2);
    CHECK(eventual_sign_probe(neg, {10.0}, {}).kind == EventualSign::NonposBeyond);
}

TEST_CASE("compactness probe finds zeros exactly when the sphere meets the zero set") {
    const Polynomial circle = parse_polynomial("x1^2 + x2^2 - 1", 2);
    CHECK_FALSE(numeric_compactness_probe(circle, {10.0, 100.0}, {}).far_zeros_found);
    // The unit sphere *is* the zero set.
    CHECK(numeric_compactness_probe(circle, {1.0}, {}).far_zeros_found);

    const ProbeEvidence hyp = numeric_compactness_probe(
        parse_polynomial("x1*x2 - 1", 2), {10.0}, {});
    REQUIRE(hyp.far_zeros_found);
    for (const ApproximateZero& z : hyp.far_zeros) {
        CHECK(z.method == "sign-change bisection");
        CHECK(std::abs(z.value) < 1e-8);
        double norm2 = 0;
        for (double c : z.point) norm2 += c * c;
        CHECK(std::abs(std::sqrt(norm2) - 10.0) < 1e-5);
    }

    // One variable: endpoint checks only.
    const Polynomial cubic = parse_polynomial("x1^3 - 2*x1 + 1", 1);
    CHECK_FALSE(numeric_compactness_probe(cubic, {10.0}, {}).far_zeros_found);
}

TEST_CASE("probe results are deterministic") {
    const Polynomial f = parse_polynomial("(x1 - x2)^2", 2);
    const ProbeEvidence a = numeric_compactness_probe(f, {100.0}, {});
    const ProbeEvidence b = numeric_compactness_probe(f, {100.0}, {});
    CHECK(probe_to_json(a).dump() == probe_to_json(b).dump());
    REQUIRE(a.far_zeros_found);
}

// --- perturbations ------------------------------------------------------------------

TEST_CASE("random perturbations stay inside the polytope and below the norm bound") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
    const NewtonPolytope p = newton_polytope(f);
    const Rat eps = make_rat(1, 10);
    const std::vector<ExponentVec> lattice = lattice_points(p);

    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        const Polynomial g = perturb(f, p, eps, seed);
        CHECK(perturb(f, p, eps, seed) == g);  // deterministic
        if (!g.is_zero()) CHECK(coeff_norm(g) < eps);
        for (const ExponentVec& alpha : g.support())
            CHECK(std::find(lattice.begin(), lattice.end(), alpha) != lattice.end());
    }
    CHECK(perturb(f, p, eps, 0) != perturb(f, p, eps, 1));
    CHECK_THROWS_AS(perturb(f, p, make_rat(0), 0), DomainError);
    CHECK_THROWS_AS(perturb(f, p, make_rat(-1, 10), 0), DomainError);
}

TEST_CASE("directed perturbation subtracts epsilon at a chosen vertex") {
    const Polynomial f = parse_polynomial("(x1 - x2)^2", 2);
    const NewtonPolytope p = newton_polytope(f);
    const Polynomial g = directed_perturbation(f, p, make_rat(1, 10), {2, 0});
    CHECK(g == Polynomial::monomial({2, 0}, make_rat(-1, 10)));
    CHECK_THROWS_AS(directed_perturbation(f, p, make_rat(1, 10), {1, 1}), DomainError);
    CHECK_THROWS_AS(directed_perturbation(f, p, make_rat(0), {2, 0}), DomainError);
}

TEST_CASE("perturbation experiments: fragile square versus robust circle") {
    SUBCASE("the square collapses under its adversarial direction") {
        const Polynomial f = parse_polynomial("(x1 - x2)^2", 2);
        const NewtonPolytope p = newton_polytope(f);
        PerturbationSpec spec;
        spec.epsilon = make_rat(1, 10);
        spec.count = 3;
        spec.directed_vertex = ExponentVec{2, 0};
        const PerturbationExperiment ex = perturbation_experiment(f, p, spec, {100.0}, {});
        CHECK(ex.directed);
        CHECK(ex.trials == 3);
        CHECK(ex.far_zero_trials.size() == 3);  // every trial finds far zeros
        CHECK(ex.trial_seeds.size() == 3);
    }
    SUBCASE("the circle absorbs random perturbations well below its radius estimate") {
        const Polynomial f = parse_polynomial("x1^2 + x2^2 - 1", 2);
        const NewtonPolytope p = newton_polytope(f);
        PerturbationSpec spec;
        spec.epsilon = make_rat(1, 4);
        spec.count = 5;
        const PerturbationExperiment ex = perturbation_experiment(f, p, spec, {10.0, 100.0}, {});
        CHECK_FALSE(ex.directed);
        CHECK(ex.far_zero_trials.empty());
        const nlohmann::ordered_json j = perturbation_experiment_to_json(ex);
        CHECK(j["mode"] == "random");
        CHECK(j["far_zero_count"] == 0);
        CHECK(j["trials"] == 5);
    }
}


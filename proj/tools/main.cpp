// newton-compact: command-line front end for the zero-set compactness library.
//
// Exit codes: 0 when the requested result is definitive (or the command is
// purely informational), 2 when the analysis verdict is inconclusive, and 1
// for input errors (unparsable polynomials, bad flags, impossible requests).

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nwc/criteria.hpp"
#include "nwc/errors.hpp"
#include "nwc/newton.hpp"
#include "nwc/polynomial.hpp"
#include "nwc/signcheck.hpp"

using nlohmann::ordered_json;
using namespace nwc;

namespace {

// --- option state ------------------------------------------------------------

struct Options {
    std::string expr;
    std::string file;
    int var_count = 0;  // 0 = infer from the expression
    std::string format = "json";
    std::string out_path;
    std::uint64_t seed = 0;
    int samples = 2000;
    std::vector<double> radii = {10.0, 100.0};
    int threads = 1;
    bool timings = false;
    std::string sandwich_radius = "10";
    int sandwich_samples = 10000;
    std::string epsilon;
    int trials = 100;
    std::string directed;
    std::vector<std::string> equations;
    std::vector<std::string> inequalities;
    std::string equations_file;
    std::string inequalities_file;
    bool with_analysis = false;
};

// --- small helpers -----------------------------------------------------------

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedInput {
    Polynomial poly;
    int var_count = 0;
    bool inferred = false;
};

LoadedInput load_input(const Options& o) {
    std::string text;
    if (!o.expr.empty())
        text = o.expr;
    else if (!o.file.empty())
        text = read_text_file(o.file);
    else
        throw DomainError("no input polynomial: pass -e/--expr or -f/--file");

    int n = o.var_count;
    const bool inferred = n == 0;
    if (inferred) n = scan_max_var_index(text);
    if (n <= 0) {
        // Distinguish the zero polynomial (a domain fact worth naming) from
        // a constant whose variable count simply cannot be inferred.
        if (parse_polynomial(text, 1).is_zero())
            throw DomainError("zero polynomial has empty Newton polyhedron");
        throw DomainError(
            "no variables found in the expression; pass -n/--variables");
    }
    Polynomial f = parse_polynomial(text, n);
    if (f.is_zero()) throw DomainError("zero polynomial has empty Newton polyhedron");
    return {std::move(f), n, inferred};
}

void emit_output(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw DomainError("cannot write file: " + o.out_path);
    out << text;
    out.flush();
    if (!out) throw DomainError("failed writing file: " + o.out_path);
}

std::uint64_t seed_from_environment() {
    const char* env = std::getenv("NEWTON_COMPACT_SEED");
    if (env == nullptr || *env == '\0') return 0;
    if (!std::isdigit(static_cast<unsigned char>(env[0])))
        throw DomainError(std::string("NEWTON_COMPACT_SEED must be an unsigned "
                                      "integer, got: ") +
                          env);
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
        throw DomainError(std::string("NEWTON_COMPACT_SEED must be an unsigned "
                                      "integer, got: ") +
                          env);
    return static_cast<std::uint64_t>(value);
}

ExponentVec parse_exponents(const std::string& text, int n) {
    ExponentVec alpha;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto first = token.find_first_not_of(" \t");
        const auto last = token.find_last_not_of(" \t");
        if (first == std::string::npos)
            throw DomainError("bad exponent list: " + text);
        token = token.substr(first, last - first + 1);
        errno = 0;
        char* end = nullptr;
        const long value = std::strtol(token.c_str(), &end, 10);
        if (errno != 0 || end == token.c_str() || *end != '\0' || value < 0)
            throw DomainError("exponents must be nonnegative integers, got: " +
                              token);
        alpha.push_back(static_cast<int>(value));
    }
    if (static_cast<int>(alpha.size()) != n)
        throw DomainError("expected " + std::to_string(n) +
                          " comma-separated exponents, got " +
                          std::to_string(alpha.size()));
    return alpha;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

AnalyzeOptions make_analyze_options(const Options& o) {
    AnalyzeOptions ao;
    ao.budget.samples_per_orthant = o.samples;
    ao.budget.seed = o.seed;
    ao.probe_radii = o.radii;
    ao.sandwich_radius = rat_from_string(o.sandwich_radius);
    if (!(ao.sandwich_radius > 0))
        throw DomainError("the sandwich radius must be positive");
    ao.sandwich_samples = o.sandwich_samples;
    ao.threads = o.threads;
    return ao;
}

SearchBudget make_budget(const Options& o) {
    SearchBudget b;
    b.samples_per_orthant = o.samples;
    b.seed = o.seed;
    return b;
}

ordered_json input_json(const LoadedInput& in) {
    ordered_json j;
    j["polynomial"] = to_string(in.poly);
    j["variables"] = in.var_count;
    j["variables_inferred"] = in.inferred;
    j["terms"] = in.poly.term_count();
    return j;
}

// --- text rendering ----------------------------------------------------------

std::string approx(const Rat& r) {
    std::ostringstream s;
    s << rat_to_double(r);
    return s.str();
}

std::string approx(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

std::string point_text(const std::vector<Rat>& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += x[i].get_str();
    }
    return s + ")";
}

std::string point_text(const std::vector<double>& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += approx(x[i]);
    }
    return s + ")";
}

std::string exponent_text(const ExponentVec& alpha) {
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(alpha[i]);
    }
    return s + ")";
}

std::string radii_text(const std::vector<double>& radii) {
    std::string s;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (i) s += ", ";
        s += approx(radii[i]);
    }
    return s;
}

std::string subspace_text(const SubspaceMask& m) {
    std::string s = "{";
    bool first = true;
    for (int v = 1; v <= m.n; ++v) {
        if (!m.contains(v)) continue;
        if (!first) s += ", ";
        s += "x" + std::to_string(v);
        first = false;
    }
    return s + "}";
}

std::string face_kind_text(const Face& face) {
    if (face.improper) return "whole polytope";
    if (face.dim == 0) return "vertex";
    if (face.dim == 1) return "edge";
    return std::to_string(face.dim) + "-face";
}

std::string sign_phrase(SignKind k) {
    switch (k) {
        case SignKind::StrictlyPositive: return "strictly positive";
        case SignKind::StrictlyNegative: return "strictly negative";
        case SignKind::TakesZero: return "takes the value zero";
        case SignKind::TakesBothSigns: return "takes both signs";
        case SignKind::Unknown: return "undetermined";
    }
    return "undetermined";
}

std::string compactness_phrase(CompactnessVerdict v) {
    switch (v) {
        case CompactnessVerdict::CompactCertified: return "compact (certified)";
        case CompactnessVerdict::NotCompactCertified:
            return "not compact (certified)";
        case CompactnessVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string stability_phrase(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::StablyCompactCertified:
            return "stably compact (certified)";
        case StabilityVerdict::NotStablyCompact:
            return "not stably compact (certified)";
        case StabilityVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string necessary_phrase(NecessaryStatus s) {
    switch (s) {
        case NecessaryStatus::ConsistentWithCompact:
            return "satisfied (consistent with a compact zero set)";
        case NecessaryStatus::ViolatedNotCompact:
            return "violated: the zero set is unbounded";
        case NecessaryStatus::Inconclusive: return "undetermined";
    }
    return "undetermined";
}

std::string sufficient_phrase(SufficientStatus s) {
    switch (s) {
        case SufficientStatus::CompactCertified:
            return "satisfied: compactness certified";
        case SufficientStatus::NotApplicable: return "not applicable";
        case SufficientStatus::Inconclusive: return "undetermined";
    }
    return "undetermined";
}

void text_header(std::ostream& out, const LoadedInput& in,
                 const NewtonPolytope& p, const std::vector<Face>& faces,
                 const std::string& digest) {
    out << "polynomial: " << to_string(in.poly) << "\n";
    out << "variables: " << in.var_count << (in.inferred ? " (inferred)" : "")
        << "\n";
    out << "terms: " << in.poly.term_count() << "\n";
    const std::size_t at_infinity = static_cast<std::size_t>(std::count_if(
        faces.begin(), faces.end(), [](const Face& f) { return f.at_infinity; }));
    out << "newton polytope: dimension " << p.dim << ", " << p.vertices.size()
        << (p.vertices.size() == 1 ? " vertex, " : " vertices, ") << faces.size()
        << " faces, " << at_infinity << " on the boundary at infinity\n";
    out << "geometry digest: " << digest << "\n";
}

void text_face_block(std::ostream& out, const AnalysisResult& r) {
    out << "\nboundary faces at infinity:\n";
    if (r.face_analyses.empty()) {
        out << "  (none)\n";
        return;
    }
    for (const FaceSignAnalysis& a : r.face_analyses) {
        const Face& face = r.faces[a.face_index];
        out << "  face " << a.face_index << " (" << face_kind_text(face) << ") "
            << to_string(a.face_poly) << ": " << sign_phrase(a.verdict.kind)
            << "\n";
    }
}

void text_compactness(std::ostream& out, const AnalysisResult& r) {
    const CompactnessReport& c = r.compactness;
    out << "\ncompactness: " << compactness_phrase(c.overall) << "\n";
    out << "  necessary conditions: " << necessary_phrase(c.necessary_status)
        << "\n";
    out << "  sufficient condition: " << sufficient_phrase(c.sufficient_status);
    if (c.certified_sign != 0)
        out << " with sign " << (c.certified_sign > 0 ? "+1" : "-1");
    out << "\n";
    out << "  value at origin: " << c.value_at_origin.get_str() << "\n";
    if (c.witness) {
        const UnboundednessWitness& w = *c.witness;
        out << "  unboundedness witness:\n";
        if (w.vanishing_subspace)
            out << "    the polynomial vanishes identically on the coordinate "
                   "subspace "
                << subspace_text(*w.vanishing_subspace) << "\n";
        if (w.positive_point) {
            out << "    positive face value";
            if (w.positive_face) out << " (face " << *w.positive_face << ")";
            out << ": " << w.positive_point->value.get_str() << " at "
                << point_text(w.positive_point->point) << "\n";
        }
        if (w.negative_point) {
            out << "    negative face value";
            if (w.negative_face) out << " (face " << *w.negative_face << ")";
            out << ": " << w.negative_point->value.get_str() << " at "
                << point_text(w.negative_point->point) << "\n";
        }
    }
    if (!c.note.empty()) out << "  note: " << c.note << "\n";
}

void text_stability(std::ostream& out, const AnalysisResult& r) {
    const StabilityReport& s = r.stability;
    out << "stability: " << stability_phrase(s.verdict) << "\n";
    if (s.certified_sign != 0)
        out << "  certified sign: " << (s.certified_sign > 0 ? "+1" : "-1")
            << "\n";
    if (s.vanishing_subspace)
        out << "  witness: the polynomial vanishes identically on the "
               "coordinate subspace "
            << subspace_text(*s.vanishing_subspace) << "\n";
    if (s.witness_face) out << "  witness face: " << *s.witness_face << "\n";
    for (const WitnessPoint& w : s.witnesses)
        out << "  witness value: " << w.value.get_str() << " at "
            << point_text(w.point) << "\n";
    if (s.epsilon_estimate) {
        out << "  perturbation radius estimate: " << s.epsilon_estimate->get_str()
            << " (~ " << approx(*s.epsilon_estimate) << ")\n";
        if (!s.epsilon_provenance.empty())
            out << "    provenance: " << s.epsilon_provenance << "\n";
    }
    if (s.sandwich) {
        const SandwichEstimate& sw = *s.sandwich;
        out << "  sandwich beyond |x| = " << sw.radius.get_str() << ": c1 ~ "
            << approx(sw.c1_hat) << ", c2 ~ " << approx(sw.c2_hat)
            << ", violations " << sw.violations.size() << "/" << sw.samples
            << "\n";
    }
    if (!s.note.empty()) out << "  note: " << s.note << "\n";
}

void text_probe_evidence(std::ostream& out, const ProbeEvidence& pe) {
    if (!pe.far_zeros_found) {
        out << "numeric probe: no far zeros found at radii "
            << radii_text(pe.radii) << "\n";
        return;
    }
    out << "numeric probe: " << pe.far_zeros.size()
        << " approximate far zero(s) found\n";
    for (const ApproximateZero& z : pe.far_zeros)
        out << "  |x| ~ " << approx(z.radius) << ": value ~ " << approx(z.value)
            << " at " << point_text(z.point) << " via " << z.method << "\n";
}

void text_eventual_sign(std::ostream& out, const EventualSignEvidence& ev) {
    out << "eventual sign: ";
    switch (ev.kind) {
        case EventualSign::NonnegBeyond:
            out << "nonnegative at all " << ev.samples
                << " sampled points per radius (radii " << radii_text(ev.radii)
                << ")\n";
            break;
        case EventualSign::NonposBeyond:
            out << "nonpositive at all " << ev.samples
                << " sampled points per radius (radii " << radii_text(ev.radii)
                << ")\n";
            break;
        case EventualSign::SignChangeFound:
            out << "values of both signs found (radii " << radii_text(ev.radii)
                << ")\n";
            for (const WitnessPoint& w : ev.sign_change)
                out << "  value " << w.value.get_str() << " at "
                    << point_text(w.point) << "\n";
            break;
    }
}

void text_probes(std::ostream& out, const AnalysisResult& r) {
    const NondegeneracyReport& nd = r.nondegeneracy;
    if (!nd.faces.empty()) {
        if (nd.all_certified) {
            out << "nondegeneracy: every boundary face certified free of "
                   "critical zeros\n";
        } else if (nd.any_degenerate) {
            out << "nondegeneracy: exact critical zero found\n";
            for (const FaceCriticalityReport& fc : nd.faces)
                if (fc.verdict == FaceCriticality::DegeneratePoint)
                    out << "  face " << fc.face_index << ": vanishing point "
                        << point_text(fc.witness) << "\n";
        } else {
            out << "nondegeneracy: undetermined for some faces\n";
        }
    }
    text_eventual_sign(out, r.eventual_sign);
    if (r.compactness.probe_evidence)
        text_probe_evidence(out, *r.compactness.probe_evidence);
}

void text_warnings(std::ostream& out, const AnalysisResult& r) {
    if (!r.internally_inconsistent) return;
    out << "WARNING: exact results contradict each other; treat this report as "
           "a defect indicator\n";
    for (const std::string& note : r.inconsistency_notes)
        out << "  - " << note << "\n";
}

void text_timings(std::ostream& out, const AnalysisResult& r) {
    if (r.timings_ms.empty()) return;
    out << "timings (ms):";
    for (const auto& [phase, ms] : r.timings_ms) out << " " << phase << "=" << ms;
    out << "\n";
}

std::string analysis_text(const LoadedInput& in, const AnalysisResult& r,
                          bool timings) {
    std::ostringstream out;
    text_header(out, in, r.polytope, r.faces, r.geometry_digest);
    text_face_block(out, r);
    text_compactness(out, r);
    text_stability(out, r);
    text_probes(out, r);
    text_warnings(out, r);
    if (timings) text_timings(out, r);
    return out.str();
}

// --- command implementations ---------------------------------------------------

int exit_for_compactness(const AnalysisResult& r) {
    return r.compactness.overall == CompactnessVerdict::Inconclusive ? 2 : 0;
}

int run_analyze(const Options& o) {
    const LoadedInput in = load_input(o);
    const AnalysisResult r = analyze(in.poly, make_analyze_options(o));
    std::string out;
    if (o.format == "text") {
        out = analysis_text(in, r, o.timings);
    } else {
        ordered_json j = analysis_to_json(in.poly, r, o.timings);
        j["input"]["variables_inferred"] = in.inferred;
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return exit_for_compactness(r);
}

int run_check_compact(const Options& o) {
    const LoadedInput in = load_input(o);
    const AnalysisResult r = analyze(in.poly, make_analyze_options(o));
    std::string out;
    if (o.format == "text") {
        std::ostringstream s;
        text_header(s, in, r.polytope, r.faces, r.geometry_digest);
        text_face_block(s, r);
        text_compactness(s, r);
        text_warnings(s, r);
        out = s.str();
    } else {
        ordered_json j;
        j["report_version"] = 1;
        j["input"] = input_json(in);
        j["geometry_digest"] = r.geometry_digest;
        j["univariate"] = r.univariate;
        j["compactness"] = compactness_to_json(r.compactness, r.face_analyses);
        j["internally_inconsistent"] = r.internally_inconsistent;
        if (!r.inconsistency_notes.empty())
            j["inconsistency_notes"] = r.inconsistency_notes;
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return exit_for_compactness(r);
}

int run_check_stable(const Options& o) {
    const LoadedInput in = load_input(o);
    const AnalysisResult r = analyze(in.poly, make_analyze_options(o));
    std::string out;
    if (o.format == "text") {
        std::ostringstream s;
        text_header(s, in, r.polytope, r.faces, r.geometry_digest);
        text_face_block(s, r);
        s << "\n";
        text_stability(s, r);
        text_warnings(s, r);
        out = s.str();
    } else {
        ordered_json j;
        j["report_version"] = 1;
        j["input"] = input_json(in);
        j["geometry_digest"] = r.geometry_digest;
        j["univariate"] = r.univariate;
        j["stability"] = stability_to_json(r.stability);
        j["internally_inconsistent"] = r.internally_inconsistent;
        if (!r.inconsistency_notes.empty())
            j["inconsistency_notes"] = r.inconsistency_notes;
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return r.stability.verdict == StabilityVerdict::Inconclusive ? 2 : 0;
}

int run_newton(const Options& o) {
    const LoadedInput in = load_input(o);
    const NewtonPolytope p = newton_polytope(in.poly);
    std::vector<Face> faces = enumerate_faces(p);
    boundary_at_infinity(p, faces);
    std::string out;
    if (o.format == "svg") {
        out = polytope_to_svg(p, faces);
    } else if (o.format == "text") {
        std::ostringstream s;
        text_header(s, in, p, faces, geometry_digest(p, faces));
        s << "vertices:\n";
        for (const ExponentVec& v : p.vertices)
            s << "  " << exponent_text(v) << "\n";
        s << "faces:\n";
        for (std::size_t i = 0; i < faces.size(); ++i) {
            const Face& face = faces[i];
            s << "  face " << i << " (" << face_kind_text(face)
              << (face.at_infinity ? ", at infinity" : "") << "): vertices";
            for (int idx : face.vertex_indices)
                s << " "
                  << exponent_text(p.vertices[static_cast<std::size_t>(idx)]);
            s << "\n";
        }
        out = s.str();
    } else {
        ordered_json j;
        j["report_version"] = 1;
        j["input"] = input_json(in);
        j["geometry_digest"] = geometry_digest(p, faces);
        j["geometry"] = polytope_to_json(p, faces);
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return 0;
}

int run_faces(const Options& o) {
    const LoadedInput in = load_input(o);
    const NewtonPolytope p = newton_polytope(in.poly);
    std::vector<Face> faces = enumerate_faces(p);
    boundary_at_infinity(p, faces);
    std::string out;
    if (o.format == "text") {
        std::ostringstream s;
        text_header(s, in, p, faces, geometry_digest(p, faces));
        s << "faces:\n";
        for (std::size_t i = 0; i < faces.size(); ++i) {
            const Face& face = faces[i];
            s << "  face " << i << " (" << face_kind_text(face)
              << (face.at_infinity ? ", at infinity" : "")
              << "): " << to_string(face_polynomial(in.poly, p, face)) << "\n";
        }
        out = s.str();
    } else {
        ordered_json geo = polytope_to_json(p, faces);
        ordered_json rows = geo["faces"];
        for (std::size_t i = 0; i < faces.size(); ++i)
            rows[i]["polynomial"] =
                to_string(face_polynomial(in.poly, p, faces[i]));
        ordered_json j;
        j["report_version"] = 1;
        j["input"] = input_json(in);
        j["geometry_digest"] = geometry_digest(p, faces);
        j["faces"] = rows;
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return 0;
}

int run_probe(const Options& o) {
    const LoadedInput in = load_input(o);
    const SearchBudget budget = make_budget(o);
    const ProbeEvidence pe = numeric_compactness_probe(in.poly, o.radii, budget);
    const EventualSignEvidence ev = eventual_sign_probe(in.poly, o.radii, budget);
    std::string out;
    if (o.format == "text") {
        std::ostringstream s;
        s << "polynomial: " << to_string(in.poly) << "\n";
        s << "variables: " << in.var_count << (in.inferred ? " (inferred)" : "")
          << "\n";
        text_probe_evidence(s, pe);
        text_eventual_sign(s, ev);
        s << "seed: " << o.seed << "\n";
        out = s.str();
    } else {
        ordered_json j;
        j["report_version"] = 1;
        j["input"] = input_json(in);
        j["probe"] = probe_to_json(pe);
        j["eventual_sign"] = eventual_sign_to_json(ev);
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return 0;
}

int run_perturb_experiment(const Options& o) {
    const LoadedInput in = load_input(o);
    const NewtonPolytope p = newton_polytope(in.poly);

    Rat epsilon;
    bool derived = false;
    if (!o.epsilon.empty()) {
        epsilon = rat_from_string(o.epsilon);
    } else {
        const AnalysisResult r = analyze(in.poly, make_analyze_options(o));
        if (!r.stability.epsilon_estimate)
            throw DomainError(
                "no perturbation radius estimate is available for this "
                "polynomial (stable compactness was not certified with a clean "
                "sandwich pass); pass --epsilon explicitly");
        epsilon = *r.stability.epsilon_estimate;
        derived = true;
    }
    if (!(epsilon > 0))
        throw DomainError("the perturbation radius epsilon must be positive");

    PerturbationSpec spec;
    spec.epsilon = epsilon;
    spec.count = o.trials;
    spec.seed = o.seed;
    if (!o.directed.empty())
        spec.directed_vertex = parse_exponents(o.directed, in.var_count);

    const PerturbationExperiment e =
        perturbation_experiment(in.poly, p, spec, o.radii, make_budget(o));

    std::string out;
    if (o.format == "text") {
        std::ostringstream s;
        s << "polynomial: " << to_string(in.poly) << "\n";
        s << "variables: " << in.var_count << (in.inferred ? " (inferred)" : "")
          << "\n";
        s << "epsilon: " << epsilon.get_str() << " (~ " << approx(epsilon) << ")"
          << (derived ? " [estimated]" : "") << "\n";
        if (e.directed)
            s << "mode: directed, subtracting epsilon * x^"
              << exponent_text(e.directed_vertex) << "\n";
        else
            s << "mode: random coefficients within the radius\n";
        s << "trials: " << e.trials << "\n";
        s << "probe radii: " << radii_text(e.probe_radii) << "\n";
        s << "trials with far zeros: " << e.far_zero_trials.size() << " of "
          << e.trials << "\n";
        if (!e.far_zero_trials.empty()) {
            s << "  trial indices:";
            for (int idx : e.far_zero_trials) s << " " << idx;
            s << "\n";
        }
        s << "seed: " << o.seed << "\n";
        out = s.str();
    } else {
        ordered_json j;
        j["report_version"] = 1;
        j["input"] = input_json(in);
        j["epsilon_derived"] = derived;
        j["experiment"] = perturbation_experiment_to_json(e);
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return 0;
}

int run_semialgebraic(const Options& o) {
    std::vector<std::string> eq_texts = o.equations;
    std::vector<std::string> ge_texts = o.inequalities;
    if (!o.equations_file.empty())
        for (const std::string& line : split_lines(read_text_file(o.equations_file)))
            eq_texts.push_back(line);
    if (!o.inequalities_file.empty())
        for (const std::string& line :
             split_lines(read_text_file(o.inequalities_file)))
            ge_texts.push_back(line);
    if (eq_texts.empty() && ge_texts.empty())
        throw DomainError(
            "a semialgebraic description needs at least one equation (--eq) or "
            "inequality (--ge)");

    int n = o.var_count;
    if (n == 0) {
        for (const std::string& t : eq_texts) n = std::max(n, scan_max_var_index(t));
        for (const std::string& t : ge_texts) n = std::max(n, scan_max_var_index(t));
    }
    if (n <= 0)
        throw DomainError(
            "no variables found in the description; pass -n/--variables");

    std::vector<Polynomial> equations, inequalities;
    for (const std::string& t : eq_texts)
        equations.push_back(parse_polynomial(t, n));
    for (const std::string& t : ge_texts)
        inequalities.push_back(parse_polynomial(t, n));

    const Polynomial aggregate = semialgebraic_to_zero_set(equations, inequalities);

    std::optional<AnalysisResult> r;
    int code = 0;
    if (o.with_analysis) {
        if (aggregate.is_zero())
            throw DomainError(
                "the aggregate polynomial is identically zero (the described "
                "set is all of space), so there is nothing to analyze");
        r = analyze(aggregate, make_analyze_options(o));
        code = exit_for_compactness(*r);
    }

    std::string out;
    if (o.format == "text") {
        std::ostringstream s;
        s << "semialgebraic description: " << equations.size() << " equation(s), "
          << inequalities.size() << " inequality(ies)\n";
        for (const Polynomial& g : equations)
            s << "  equation: " << to_string(g) << " = 0\n";
        for (const Polynomial& h : inequalities)
            s << "  inequality: " << to_string(h) << " >= 0\n";
        s << "variables: " << n << " (+" << inequalities.size() << " slack)\n";
        s << "aggregate polynomial: " << to_string(aggregate) << "\n";
        if (r) {
            s << "\n";
            const LoadedInput agg{aggregate, aggregate.var_count(), false};
            s << analysis_text(agg, *r, o.timings);
        }
        out = s.str();
    } else {
        ordered_json j;
        j["report_version"] = 1;
        j["variables"] = n;
        j["slack_variables"] = inequalities.size();
        ordered_json eq_arr = ordered_json::array();
        for (const Polynomial& g : equations) eq_arr.push_back(to_string(g));
        ordered_json ge_arr = ordered_json::array();
        for (const Polynomial& h : inequalities) ge_arr.push_back(to_string(h));
        j["equations"] = eq_arr;
        j["inequalities"] = ge_arr;
        j["aggregate"] = to_string(aggregate);
        j["aggregate_variables"] = aggregate.var_count();
        if (r) j["analysis"] = analysis_to_json(aggregate, *r, o.timings);
        out = j.dump(2) + "\n";
    }
    emit_output(o, out);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "newton-compact: decide whether the real zero set of a polynomial is "
        "compact from its Newton polytope"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "newton-compact 1.0.0");

    Options o;
    std::vector<CLI::Option*> seed_options;

    const auto add_input = [&](CLI::App* cmd) {
        CLI::Option* expr = cmd->add_option(
            "-e,--expr", o.expr,
            "Polynomial in variables x1..xN (integer or rational coefficients)");
        CLI::Option* file =
            cmd->add_option("-f,--file", o.file, "Read the polynomial from a file");
        expr->excludes(file);
        file->excludes(expr);
        cmd->add_option("-n,--variables", o.var_count,
                        "Variable count (default: highest index that appears)")
            ->check(CLI::Range(1, 6));
    };
    const auto add_output = [&](CLI::App* cmd,
                                const std::vector<std::string>& formats) {
        cmd->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember(formats));
        cmd->add_option("-o,--output", o.out_path,
                        "Write the report to this file instead of stdout");
    };
    const auto add_search = [&](CLI::App* cmd) {
        seed_options.push_back(cmd->add_option(
            "--seed", o.seed,
            "Seed for randomized searches (overrides NEWTON_COMPACT_SEED)"));
        cmd->add_option("--samples", o.samples,
                        "Sample budget per orthant for sign searches")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--radii", o.radii,
                        "Probe radii (comma-separated or repeated)")
            ->delimiter(',')
            ->check(CLI::PositiveNumber);
        cmd->add_option("--threads", o.threads,
                        "Worker threads for per-face analysis")
            ->check(CLI::Range(1, 64));
    };
    const auto add_sandwich = [&](CLI::App* cmd) {
        cmd->add_option("--sandwich-radius", o.sandwich_radius,
                        "Shell radius for the two-sided comparison (rational)");
        cmd->add_option("--sandwich-samples", o.sandwich_samples,
                        "Sample count for the two-sided comparison")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "Full report: geometry, face signs, verdicts, probes");
    add_input(analyze_cmd);
    add_output(analyze_cmd, {"json", "text"});
    add_search(analyze_cmd);
    add_sandwich(analyze_cmd);
    analyze_cmd->add_flag("--timings", o.timings,
                          "Include phase timings in the report");

    CLI::App* newton_cmd = app.add_subcommand(
        "newton", "Newton polytope: vertices, faces, boundary at infinity");
    add_input(newton_cmd);
    add_output(newton_cmd, {"json", "text", "svg"});

    CLI::App* faces_cmd = app.add_subcommand(
        "faces", "Face table with the polynomial carried by each face");
    add_input(faces_cmd);
    add_output(faces_cmd, {"json", "text"});

    CLI::App* compact_cmd = app.add_subcommand(
        "check-compact", "Compactness verdict only (exit 0 definitive, 2 not)");
    add_input(compact_cmd);
    add_output(compact_cmd, {"json", "text"});
    add_search(compact_cmd);

    CLI::App* stable_cmd = app.add_subcommand(
        "check-stable",
        "Stable-compactness verdict only (exit 0 definitive, 2 not)");
    add_input(stable_cmd);
    add_output(stable_cmd, {"json", "text"});
    add_search(stable_cmd);
    add_sandwich(stable_cmd);

    CLI::App* probe_cmd = app.add_subcommand(
        "probe", "Numeric far-zero scan and eventual-sign sampling");
    add_input(probe_cmd);
    add_output(probe_cmd, {"json", "text"});
    add_search(probe_cmd);

    CLI::App* perturb_cmd = app.add_subcommand(
        "perturb-experiment",
        "Perturb the coefficients and probe each perturbed polynomial");
    add_input(perturb_cmd);
    add_output(perturb_cmd, {"json", "text"});
    add_search(perturb_cmd);
    add_sandwich(perturb_cmd);
    perturb_cmd->add_option(
        "--epsilon", o.epsilon,
        "Perturbation radius (rational; default: the analyzer's estimate)");
    perturb_cmd->add_option("--trials", o.trials, "Number of perturbation trials")
        ->check(CLI::PositiveNumber);
    perturb_cmd->add_option(
        "--directed", o.directed,
        "Subtract epsilon * x^alpha for this comma-separated vertex exponent");

    CLI::App* semi_cmd = app.add_subcommand(
        "semialgebraic",
        "Aggregate equations and inequalities into one polynomial zero set");
    semi_cmd->add_option("--eq", o.equations, "Equation g = 0 (repeatable)");
    semi_cmd->add_option("--ge", o.inequalities,
                         "Inequality h >= 0 (repeatable)");
    semi_cmd->add_option("--eq-file", o.equations_file,
                         "File with one equation per line");
    semi_cmd->add_option("--ge-file", o.inequalities_file,
                         "File with one inequality per line");
    semi_cmd->add_option("-n,--variables", o.var_count,
                         "Variable count before slack variables")
        ->check(CLI::Range(1, 6));
    add_output(semi_cmd, {"json", "text"});
    add_search(semi_cmd);
    add_sandwich(semi_cmd);
    semi_cmd->add_flag("--analyze", o.with_analysis,
                       "Run the full analysis on the aggregate polynomial");
    semi_cmd->add_flag("--timings", o.timings,
                       "Include phase timings in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        bool seed_given = false;
        for (const CLI::Option* opt : seed_options)
            if (opt->count() > 0) seed_given = true;
        if (!seed_given) o.seed = seed_from_environment();

        if (analyze_cmd->parsed()) return run_analyze(o);
        if (newton_cmd->parsed()) return run_newton(o);
        if (faces_cmd->parsed()) return run_faces(o);
        if (compact_cmd->parsed()) return run_check_compact(o);
        if (stable_cmd->parsed()) return run_check_stable(o);
        if (probe_cmd->parsed()) return run_probe(o);
        if (perturb_cmd->parsed()) return run_perturb_experiment(o);
        if (semi_cmd->parsed()) return run_semialgebraic(o);
        std::cerr << "error: no command given\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ScaleLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
}

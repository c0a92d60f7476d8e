#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nwc/criteria.hpp"
#include "nwc/kernels.hpp"
#include "nwc/prng.hpp"

namespace nwc {

namespace {

// Sampling and search limits.  These are part of the observable behaviour
// (reports are reproducible bit for bit), so they live here as pinned
// constants rather than knobs.
constexpr double kOuterRadius = 1e6;        // sandwich shell outer bound
constexpr long kSandwichDenominator = 1000000;
constexpr double kAxisFloor = 1e-3;         // sampled directions stay off the axes
constexpr int kEventualSamplesPerRadius = 400;
constexpr int kProbeArcs = 32;              // great circles scanned per sphere
constexpr int kProbeSteps = 256;            // points per great circle
constexpr int kProbeAntipodalPairs = 64;
constexpr int kProbeBisectionIters = 60;
constexpr std::size_t kProbeMaxPerRadius = 6;
constexpr int kProbeGridPoints = 512;       // minimum-tracking coarse grid
constexpr int kProbeDescentStarts = 6;
constexpr int kProbeDescentIters = 300;
constexpr double kFarZeroThresholdScale = 1e-8;
constexpr long kPerturbGrid = 10000;        // coefficient grid (-1, 1) * epsilon
// Substream tags (arbitrary odd-ish constants, one per consumer).
constexpr std::uint64_t kEventualStream = 0x9d2c5681;
constexpr std::uint64_t kProbeStream = 0x6c078965;
constexpr std::uint64_t kTrialStream = 0xb5026f5a;

std::vector<double> unit_direction(Prng& rng, int n) {
    std::vector<double> u(static_cast<std::size_t>(n));
    while (true) {
        double norm2 = 0.0;
        for (double& c : u) {
            c = rng.gaussian();
            norm2 += c * c;
        }
        const double norm = std::sqrt(norm2);
        if (norm < 1e-8) continue;
        bool off_axes = true;
        for (double& c : u) {
            c /= norm;
            if (std::fabs(c) < kAxisFloor) off_axes = false;
        }
        if (off_axes) return u;
    }
}

// Orthonormal pair spanning a random 2-plane; no axis avoidance needed.
std::pair<std::vector<double>, std::vector<double>> orthonormal_pair(Prng& rng, int n) {
    while (true) {
        std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
        double nu = 0.0;
        for (double& c : u) {
            c = rng.gaussian();
            nu += c * c;
        }
        if (nu < 1e-12) continue;
        nu = std::sqrt(nu);
        for (double& c : u) c /= nu;
        double dot = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] = rng.gaussian();
            dot += v[j] * u[j];
        }
        double nv = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] -= dot * u[j];
            nv += v[j] * v[j];
        }
        if (nv < 1e-12) continue;
        nv = std::sqrt(nv);
        for (double& c : v) c /= nv;
        return {u, v};
    }
}

std::vector<Rat> rationalized_sphere_point(Prng& rng, int n, double radius,
                                           long max_denominator) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<double> u = n == 1 ? std::vector<double>{rng.u01() < 0.5 ? -1.0 : 1.0}
                                       : unit_direction(rng, n);
        std::vector<Rat> x(static_cast<std::size_t>(n));
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            x[static_cast<std::size_t>(j)] =
                rationalize(radius * u[static_cast<std::size_t>(j)], max_denominator);
            if (x[static_cast<std::size_t>(j)] == 0) {
                ok = false;
                break;
            }
        }
        if (ok) return x;
    }
    throw std::logic_error("sphere sampling kept hitting zero coordinates");
}

bool polytope_contains(const NewtonPolytope& p, const ExponentVec& alpha) {
    for (const Facet& fc : p.facets) {
        Int s = 0;
        for (int j = 0; j < p.n; ++j) s += fc.normal[static_cast<std::size_t>(j)] * alpha[static_cast<std::size_t>(j)];
        if (s < fc.offset) return false;
    }
    for (const AffineEquality& eq : p.affine_hull) {
        Int s = 0;
        for (int j = 0; j < p.n; ++j) s += eq.normal[static_cast<std::size_t>(j)] * alpha[static_cast<std::size_t>(j)];
        if (s != eq.offset) return false;
    }
    return true;
}

nlohmann::ordered_json witness_json(const WitnessPoint& w) {
    nlohmann::ordered_json j;
    j["point"] = nlohmann::ordered_json::array();
    for (const Rat& c : w.point) j["point"].push_back(rat_to_string(c));
    j["value"] = rat_to_string(w.value);
    return j;
}

}  // namespace

// --- sandwich ----------------------------------------------------------------

SandwichEstimate sandwich_check(const Polynomial& f, const NewtonPolytope& p,
                                int sigma, const Rat& radius, int samples,
                                std::uint64_t seed) {
    if (f.is_constant()) throw DomainError("sandwich comparison of a constant polynomial");
    if (sigma != 1 && sigma != -1) throw DomainError("sigma must be +1 or -1");
    if (samples <= 0) throw DomainError("sample count must be positive");
    if (radius <= 0) throw DomainError("shell radius must be positive");
    const double lo = rat_to_double(radius) * (1.0 + 1e-9);
    if (lo >= kOuterRadius) throw DomainError("shell radius exceeds the sampling range");

    const std::vector<ExponentVec> lattice = lattice_points(p);
    const int n = f.var_count();
    const Rat radius_sq = radius * radius;

    SandwichEstimate est;
    est.sigma = sigma;
    est.radius = radius;
    est.samples = samples;
    est.seed = seed;

    Prng rng(seed);
    bool first = true;
    for (int s = 0; s < samples; ++s) {
        std::vector<Rat> x;
        // Rationalization can nudge a point back inside the shell; the norm
        // test is exact, so retry until the sample really lies beyond it.
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 256) throw std::logic_error("could not sample beyond the shell");
            const double r = rng.log_uniform(lo, kOuterRadius);
            x = rationalized_sphere_point(rng, n, r, kSandwichDenominator);
            Rat norm2 = 0;
            for (const Rat& c : x) {
                Rat sq = c * c;
                norm2 += sq;
            }
            if (norm2 > radius_sq) break;
        }
        const Rat value = f.evaluate(x);
        Rat sf = value;
        if (sigma < 0) sf = -value;
        const Rat denom = abs_monomial_sum(lattice, x);
        const Rat ratio = sf / denom;
        if (first || ratio < est.c1_hat) est.c1_hat = ratio;
        if (first || ratio > est.c2_hat) est.c2_hat = ratio;
        first = false;
        if (sf <= 0) est.violations.push_back({x, value});
    }
    return est;
}

// --- eventual sign ------------------------------------------------------------

EventualSignEvidence eventual_sign_probe(const Polynomial& f,
                                         const std::vector<double>& radii,
                                         const SearchBudget& budget) {
    if (f.is_constant()) throw DomainError("eventual-sign probe of a constant polynomial");
    const int n = f.var_count();

    EventualSignEvidence ev;
    ev.radii = radii;
    ev.samples = kEventualSamplesPerRadius;
    ev.seed = budget.seed;

    std::optional<WitnessPoint> positive, negative;
    Prng rng(mix_seed(budget.seed, kEventualStream));
    for (double radius : radii) {
        for (int s = 0; s < kEventualSamplesPerRadius; ++s) {
            const std::vector<Rat> x =
                rationalized_sphere_point(rng, n, radius, budget.max_denominator);
            const Rat value = f.evaluate(x);
            if (value > 0 && !positive) positive = WitnessPoint{x, value};
            if (value < 0 && !negative) negative = WitnessPoint{x, value};
            if (positive && negative) break;
        }
        if (positive && negative) break;
    }

    if (positive && negative) {
        ev.kind = EventualSign::SignChangeFound;
        ev.sign_change = {*positive, *negative};
    } else if (negative) {
        ev.kind = EventualSign::NonposBeyond;
    } else {
        ev.kind = EventualSign::NonnegBeyond;
    }
    return ev;
}

std::string eventual_sign_name(EventualSign s) {
    switch (s) {
        case EventualSign::NonnegBeyond: return "nonneg_beyond";
        case EventualSign::NonposBeyond: return "nonpos_beyond";
        case EventualSign::SignChangeFound: return "sign_change_found";
    }
    return "?";
}

// --- numeric compactness probe --------------------------------------------------

namespace {

struct SphereScan {
    const DoublePoly* poly = nullptr;
    const DoublePoly* monomial_sum = nullptr;  // lattice |x^alpha| sum
    BatchEvalFn kernel = nullptr;
    double fnorm = 0.0;
    double radius = 0.0;
    int n = 0;
    std::vector<ApproximateZero> found;

    // |f(x)| below this counts as a zero for evidence purposes; it scales
    // with the monomial sum so the test means the same thing at any radius.
    double threshold_at(const std::vector<double>& x) const {
        std::vector<double> ax(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) ax[j] = std::fabs(x[j]);
        return kFarZeroThresholdScale * (1.0 + fnorm * eval_single(*monomial_sum, ax.data()));
    }

    bool near_existing(const std::vector<double>& x) const {
        for (const ApproximateZero& z : found) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double d = z.point[j] - x[j];
                d2 += d * d;
            }
            if (std::sqrt(d2) < 1e-3 * radius) return true;
        }
        return false;
    }

    void record(const std::vector<double>& x, double value, const char* method) {
        if (found.size() >= kProbeMaxPerRadius || near_existing(x)) return;
        found.push_back({x, value, radius, method});
    }

    std::vector<double> arc_point(const std::vector<double>& u, const std::vector<double>& v,
                                  double theta) const {
        std::vector<double> x(static_cast<std::size_t>(n));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] =
                radius * (c * u[static_cast<std::size_t>(j)] + s * v[static_cast<std::size_t>(j)]);
        return x;
    }

    // Sign change of f between arc angles a and b: shrink to a near-zero.
    void bisect_arc(const std::vector<double>& u, const std::vector<double>& v, double a,
                    double fa, double b) {
        for (int i = 0; i < kProbeBisectionIters; ++i) {
            const double m = 0.5 * (a + b);
            const std::vector<double> x = arc_point(u, v, m);
            const double fm = eval_single(*poly, x.data());
            if (fm == 0.0) {
                record(x, fm, "sign-change bisection");
                return;
            }
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        const std::vector<double> x = arc_point(u, v, 0.5 * (a + b));
        record(x, eval_single(*poly, x.data()), "sign-change bisection");
    }

    void scan_great_circles(Prng& rng) {
        std::vector<double> xs(static_cast<std::size_t>(n) * kProbeSteps);
        std::vector<double> values(kProbeSteps);
        for (int arc = 0; arc < kProbeArcs; ++arc) {
            if (found.size() >= kProbeMaxPerRadius) return;
            const auto [u, v] = orthonormal_pair(rng, n);
            for (int k = 0; k < kProbeSteps; ++k) {
                const double theta = 2.0 * M_PI * k / kProbeSteps;
                const double c = std::cos(theta), s = std::sin(theta);
                for (int j = 0; j < n; ++j)
                    xs[static_cast<std::size_t>(j) * kProbeSteps + static_cast<std::size_t>(k)] =
                        radius * (c * u[static_cast<std::size_t>(j)] +
                                  s * v[static_cast<std::size_t>(j)]);
            }
            kernel(*poly, xs.data(), kProbeSteps, values.data());
            for (int k = 0; k < kProbeSteps; ++k) {
                const int k2 = (k + 1) % kProbeSteps;
                if (values[k] == 0.0) {
                    std::vector<double> x(static_cast<std::size_t>(n));
                    for (int j = 0; j < n; ++j)
                        x[static_cast<std::size_t>(j)] =
                            xs[static_cast<std::size_t>(j) * kProbeSteps +
                               static_cast<std::size_t>(k)];
                    record(x, 0.0, "sign-change bisection");
                } else if ((values[k] > 0.0) != (values[k2] > 0.0) && values[k2] != 0.0) {
                    const double a = 2.0 * M_PI * k / kProbeSteps;
                    const double b = 2.0 * M_PI * (k + 1) / kProbeSteps;
                    bisect_arc(u, v, a, values[k], b);
                }
                if (found.size() >= kProbeMaxPerRadius) break;
            }
        }
    }

    void scan_antipodal_arcs(Prng& rng) {
        for (int pair = 0; pair < kProbeAntipodalPairs; ++pair) {
            if (found.size() >= kProbeMaxPerRadius) return;
            const auto [u, w] = orthonormal_pair(rng, n);
            const std::vector<double> xp = arc_point(u, w, 0.0);
            const std::vector<double> xm = arc_point(u, w, M_PI);
            const double fp = eval_single(*poly, xp.data());
            const double fm = eval_single(*poly, xm.data());
            if (fp == 0.0) {
                record(xp, 0.0, "sign-change bisection");
            } else if (fm != 0.0 && (fp > 0.0) != (fm > 0.0)) {
                // Any path between antipodes with opposite signs crosses a
                // zero; follow the half great circle through w.
                bisect_arc(u, w, 0.0, fp, M_PI);
            }
        }
    }

    // For polynomials without sign changes (squares), chase minima of f^2
    // restricted to the sphere down to the evidence threshold.
    void track_minima(Prng& rng) {
        struct Start {
            std::vector<double> dir;
            double value;
        };
        std::vector<Start> starts;
        for (int gp = 0; gp < kProbeGridPoints; ++gp) {
            auto [u, v] = orthonormal_pair(rng, n);
            (void)v;
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = radius * u[static_cast<std::size_t>(j)];
            const double val = std::fabs(eval_single(*poly, x.data()));
            starts.push_back({u, val});
        }
        std::sort(starts.begin(), starts.end(),
                  [](const Start& a, const Start& b) { return a.value < b.value; });

        const int tries = std::min<int>(kProbeDescentStarts, static_cast<int>(starts.size()));
        for (int s = 0; s < tries; ++s) {
            std::vector<double> z = starts[static_cast<std::size_t>(s)].dir;
            const auto objective = [&](const std::vector<double>& y) {
                double norm = 0.0;
                for (double c : y) norm += c * c;
                norm = std::sqrt(norm);
                std::vector<double> x(y.size());
                for (std::size_t j = 0; j < y.size(); ++j) x[j] = radius * y[j] / norm;
                const double fv = eval_single(*poly, x.data());
                return fv * fv;
            };
            double step = 0.1;
            double current = objective(z);
            for (int iter = 0; iter < kProbeDescentIters && step > 1e-15; ++iter) {
                std::vector<double> grad(z.size());
                double gnorm = 0.0;
                const double h = 1e-7;
                for (std::size_t j = 0; j < z.size(); ++j) {
                    std::vector<double> zp = z, zm = z;
                    zp[j] += h;
                    zm[j] -= h;
                    grad[j] = (objective(zp) - objective(zm)) / (2.0 * h);
                    gnorm += grad[j] * grad[j];
                }
                gnorm = std::sqrt(gnorm);
                if (gnorm == 0.0) break;
                std::vector<double> trial = z;
                for (std::size_t j = 0; j < z.size(); ++j) trial[j] -= step * grad[j] / gnorm;
                const double tv = objective(trial);
                if (tv < current) {
                    z = trial;
                    current = tv;
                    double norm = 0.0;
                    for (double c : z) norm += c * c;
                    norm = std::sqrt(norm);
                    for (double& c : z) c /= norm;
                    step *= 1.3;
                } else {
                    step *= 0.5;
                }
            }
            double norm = 0.0;
            for (double c : z) norm += c * c;
            norm = std::sqrt(norm);
            std::vector<double> x(z.size());
            for (std::size_t j = 0; j < z.size(); ++j) x[j] = radius * z[j] / norm;
            const double value = eval_single(*poly, x.data());
            if (std::fabs(value) < threshold_at(x)) record(x, value, "minimum tracking");
        }
    }
};

}  // namespace

ProbeEvidence numeric_compactness_probe(const Polynomial& f,
                                        const std::vector<double>& radii,
                                        const SearchBudget& budget) {
    if (f.is_constant()) throw DomainError("probing a constant polynomial");
    const int n = f.var_count();

    ProbeEvidence ev;
    ev.radii = radii;
    ev.seed = budget.seed;

    const DoublePoly dp = DoublePoly::compile(f);
    const NewtonPolytope p = newton_polytope(f);
    Polynomial monomials(n);
    for (const ExponentVec& alpha : lattice_points(p)) monomials.add_term(alpha, make_rat(1));
    const DoublePoly dsum = DoublePoly::compile(monomials);
    const double fnorm = rat_to_double(coeff_norm(f));

    for (std::size_t ridx = 0; ridx < radii.size(); ++ridx) {
        SphereScan scan;
        scan.poly = &dp;
        scan.monomial_sum = &dsum;
        scan.kernel = select_eval_kernel();
        scan.fnorm = fnorm;
        scan.radius = radii[ridx];
        scan.n = n;

        Prng rng(mix_seed(budget.seed, kProbeStream + ridx));
        if (n == 1) {
            // The "sphere" is two points; report them when f is tiny there.
            for (double sgn : {1.0, -1.0}) {
                const std::vector<double> x{sgn * scan.radius};
                const double value = eval_single(dp, x.data());
                if (std::fabs(value) < scan.threshold_at(x))
                    scan.record(x, value, "endpoint evaluation");
            }
        } else {
            scan.scan_great_circles(rng);
            scan.scan_antipodal_arcs(rng);
            if (scan.found.empty()) scan.track_minima(rng);
        }
        ev.far_zeros.insert(ev.far_zeros.end(), scan.found.begin(), scan.found.end());
    }
    ev.far_zeros_found = !ev.far_zeros.empty();
    return ev;
}

// --- perturbations ---------------------------------------------------------------

Polynomial perturb(const Polynomial& f, const NewtonPolytope& p, const Rat& epsilon,
                   std::uint64_t seed) {
    if (epsilon <= 0) throw DomainError("perturbation radius must be positive");
    Prng rng(seed);
    Polynomial g(f.var_count());
    for (const ExponentVec& alpha : lattice_points(p)) {
        const long k = rng.uniform_int(-(kPerturbGrid - 1), kPerturbGrid - 1);
        if (k == 0) continue;
        const Rat grid = make_rat(k, kPerturbGrid);
        const Rat coeff = grid * epsilon;
        g.add_term(alpha, coeff);
    }
    if (!g.is_zero()) {
        const Rat norm = coeff_norm(g);
        if (!(norm < epsilon)) throw std::logic_error("perturbation exceeded its norm bound");
    }
    for (const ExponentVec& alpha : g.support())
        if (!polytope_contains(p, alpha))
            throw std::logic_error("perturbation support escaped the polytope");
    return g;
}

Polynomial directed_perturbation(const Polynomial& f, const NewtonPolytope& p,
                                 const Rat& epsilon, const ExponentVec& vertex) {
    if (epsilon <= 0) throw DomainError("perturbation radius must be positive");
    if (static_cast<int>(vertex.size()) != f.var_count())
        throw DomainError("vertex dimension does not match the polynomial");
    if (std::find(p.vertices.begin(), p.vertices.end(), vertex) == p.vertices.end())
        throw DomainError("exponent is not a vertex of the polytope");
    const Rat coeff = -epsilon;
    return Polynomial::monomial(vertex, coeff);
}

PerturbationExperiment perturbation_experiment(const Polynomial& f,
                                               const NewtonPolytope& p,
                                               const PerturbationSpec& spec,
                                               const std::vector<double>& probe_radii,
                                               const SearchBudget& budget) {
    if (spec.epsilon <= 0) throw DomainError("perturbation radius must be positive");
    if (spec.count <= 0) throw DomainError("trial count must be positive");

    PerturbationExperiment ex;
    ex.epsilon = spec.epsilon;
    ex.trials = spec.count;
    ex.probe_radii = probe_radii;
    if (spec.directed_vertex) {
        ex.directed = true;
        ex.directed_vertex = *spec.directed_vertex;
    }

    for (int t = 0; t < spec.count; ++t) {
        const std::uint64_t trial_seed = mix_seed(spec.seed, kTrialStream + static_cast<std::uint64_t>(t));
        ex.trial_seeds.push_back(trial_seed);
        const Polynomial g = ex.directed
                                 ? directed_perturbation(f, p, spec.epsilon, ex.directed_vertex)
                                 : perturb(f, p, spec.epsilon, trial_seed);
        const Polynomial sum = f + g;
        bool far_zeros;
        if (sum.is_zero()) {
            far_zeros = true;  // the zero polynomial vanishes everywhere
        } else if (sum.is_constant()) {
            far_zeros = false;  // a nonzero constant vanishes nowhere
        } else {
            SearchBudget b = budget;
            b.seed = trial_seed;
            far_zeros = numeric_compactness_probe(sum, probe_radii, b).far_zeros_found;
        }
        if (far_zeros) ex.far_zero_trials.push_back(t);
    }
    return ex;
}

nlohmann::ordered_json perturbation_experiment_to_json(const PerturbationExperiment& e) {
    nlohmann::ordered_json j;
    j["epsilon"] = rat_to_string(e.epsilon);
    j["trials"] = e.trials;
    j["mode"] = e.directed ? "directed" : "random";
    if (e.directed) j["vertex"] = e.directed_vertex;
    j["probe_radii"] = e.probe_radii;
    j["far_zero_trials"] = e.far_zero_trials;
    j["far_zero_count"] = e.far_zero_trials.size();
    j["trial_seeds"] = e.trial_seeds;
    return j;
}

// --- JSON for probe results -------------------------------------------------------

nlohmann::ordered_json sandwich_to_json(const SandwichEstimate& s) {
    nlohmann::ordered_json j;
    j["sigma"] = s.sigma;
    j["radius"] = rat_to_string(s.radius);
    j["samples"] = s.samples;
    j["c1_hat"] = rat_to_string(s.c1_hat);
    j["c1_hat_approx"] = rat_to_double(s.c1_hat);
    j["c2_hat"] = rat_to_string(s.c2_hat);
    j["c2_hat_approx"] = rat_to_double(s.c2_hat);
    j["violations"] = nlohmann::ordered_json::array();
    for (const WitnessPoint& w : s.violations) j["violations"].push_back(witness_json(w));
    j["seed"] = s.seed;
    return j;
}

nlohmann::ordered_json probe_to_json(const ProbeEvidence& e) {
    nlohmann::ordered_json j;
    j["far_zeros_found"] = e.far_zeros_found;
    j["radii"] = e.radii;
    j["far_zeros"] = nlohmann::ordered_json::array();
    for (const ApproximateZero& z : e.far_zeros) {
        nlohmann::ordered_json pt;
        pt["point"] = z.point;
        pt["value"] = z.value;
        pt["radius"] = z.radius;
        pt["method"] = z.method;
        pt["approximate"] = true;
        j["far_zeros"].push_back(pt);
    }
    j["seed"] = e.seed;
    return j;
}

nlohmann::ordered_json eventual_sign_to_json(const EventualSignEvidence& e) {
    nlohmann::ordered_json j;
    j["kind"] = eventual_sign_name(e.kind);
    j["radii"] = e.radii;
    j["samples_per_radius"] = e.samples;
    j["sign_change"] = nlohmann::ordered_json::array();
    for (const WitnessPoint& w : e.sign_change) j["sign_change"].push_back(witness_json(w));
    j["seed"] = e.seed;
    return j;
}

}  // namespace nwc

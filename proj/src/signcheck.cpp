#include "nwc/signcheck.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "nwc/errors.hpp"
#include "nwc/linalg.hpp"
#include "nwc/prng.hpp"

namespace nwc {

namespace {

std::vector<int> orthant_sigma(int n, std::uint64_t index) {
    std::vector<int> sigma(static_cast<std::size_t>(n), 1);
    for (int j = 0; j < n; ++j) {
        if ((index >> j) & 1u) sigma[static_cast<std::size_t>(j)] = -1;
    }
    return sigma;
}

// Support on an affine line: f = x^beta * u(x^w) with u(0) != 0, where w is
// the primitive direction and beta the support point at the line's lower end.
struct LineReduction {
    ExponentVec beta;
    IntVec w;
    std::vector<Rat> u;  // ascending coefficients
};

std::optional<LineReduction> reduce_to_line(const Polynomial& f) {
    std::vector<ExponentVec> pts = f.support();
    if (pts.size() < 2) return std::nullopt;
    const int n = f.var_count();
    IntVec w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Int d = Int(pts[1][static_cast<std::size_t>(j)]) - Int(pts[0][static_cast<std::size_t>(j)]);
        w[static_cast<std::size_t>(j)] = d;
    }
    make_primitive(w);
    std::size_t pivot = 0;
    while (pivot < w.size() && w[pivot] == 0) ++pivot;
    if (pivot == w.size()) return std::nullopt;
    // Every support difference must be an integer multiple of w.
    std::vector<Int> multiples(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Int num = Int(pts[i][pivot]) - Int(pts[0][pivot]);
        Int rem = num % w[pivot];
        if (rem != 0) return std::nullopt;
        Int k = num / w[pivot];
        for (int j = 0; j < n; ++j) {
            Int expect = k * w[static_cast<std::size_t>(j)];
            Int actual = Int(pts[i][static_cast<std::size_t>(j)]) -
                         Int(pts[0][static_cast<std::size_t>(j)]);
            if (actual != expect) return std::nullopt;
        }
        multiples[i] = k;
    }
    std::size_t base = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (multiples[i] < multiples[base]) base = i;
    }
    Int span = multiples[0] - multiples[base];
    for (const Int& k : multiples) {
        Int shifted = k - multiples[base];
        if (shifted > span) span = shifted;
    }
    // Dense univariate degree guard; beyond this the sampling tier takes over.
    if (span > 50000) return std::nullopt;
    LineReduction red;
    red.beta = pts[base];
    red.w = w;
    red.u.assign(static_cast<std::size_t>(span.get_ui()) + 1, Rat(0));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Int shifted = multiples[i] - multiples[base];
        red.u[static_cast<std::size_t>(shifted.get_ui())] = f.coeff(pts[i]);
    }
    return red;
}

// Integer coefficients c with <c, w> = 1; requires w primitive.
IntVec bezout_for_primitive(const IntVec& w) {
    IntVec c(w.size(), Int(0));
    Int g = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        if (g == 0) {
            Int mag = w[i] < 0 ? Int(-w[i]) : w[i];
            g = mag;
            c[i] = w[i] < 0 ? -1 : 1;
            continue;
        }
        Int gn, s, t;
        mpz_gcdext(gn.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(),
                   w[i].get_mpz_t());
        for (std::size_t j = 0; j < i; ++j) {
            Int scaled = c[j] * s;
            c[j] = scaled;
        }
        c[i] = t;
        g = gn;
    }
    if (g != 1) throw std::logic_error("direction vector is not primitive");
    return c;
}

std::vector<Rat> point_from_parameter(const Rat& s, const IntVec& c) {
    std::vector<Rat> x(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (!c[j].fits_slong_p())
            throw ScaleLimitError("parameter exponent exceeds the supported range");
        x[j] = pow_rat(s, c[j].get_si());
    }
    return x;
}

SignKind strict_kind(int sign) {
    return sign > 0 ? SignKind::StrictlyPositive : SignKind::StrictlyNegative;
}

// Bisection between a negative-value and a positive-value point on the open
// positive orthant, looking for an exactly reconstructible zero.
std::optional<WitnessPoint> bisect_for_zero(const Polynomial& f, const WitnessPoint& pos,
                                            const WitnessPoint& neg, int max_steps,
                                            long max_denominator) {
    const std::size_t n = pos.point.size();
    auto point_at = [&](const Rat& t) {
        std::vector<Rat> x(n);
        for (std::size_t j = 0; j < n; ++j) {
            Rat step = t * (pos.point[j] - neg.point[j]);
            x[j] = neg.point[j] + step;
        }
        return x;
    };
    Rat lo = 0;  // f < 0 side
    Rat hi = 1;  // f > 0 side
    for (int step = 0; step < max_steps; ++step) {
        Rat mid = (lo + hi) / 2;
        std::vector<Rat> xm = point_at(mid);
        Rat value = f.evaluate(xm);
        if (value == 0) return WitnessPoint{xm, value};
        if (value > 0)
            hi = mid;
        else
            lo = mid;
    }
    // The crossing parameter is now bracketed tightly; try small-denominator
    // reconstructions of it.
    Rat mid = (lo + hi) / 2;
    double approx = rat_to_double(mid);
    for (long den : {10L, 100L, 1000L, max_denominator}) {
        Rat candidate = rationalize(approx, den);
        if (!(candidate > 0 && candidate < 1)) continue;
        std::vector<Rat> xc = point_at(candidate);
        Rat value = f.evaluate(xc);
        if (value == 0) return WitnessPoint{xc, value};
    }
    return std::nullopt;
}

}  // namespace

std::string sign_kind_name(SignKind k) {
    switch (k) {
        case SignKind::StrictlyPositive: return "StrictlyPositive";
        case SignKind::StrictlyNegative: return "StrictlyNegative";
        case SignKind::TakesZero: return "TakesZero";
        case SignKind::TakesBothSigns: return "TakesBothSigns";
        case SignKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string certificate_kind_name(Certificate::Kind k) {
    switch (k) {
        case Certificate::Kind::MonomialFace: return "MonomialFace";
        case Certificate::Kind::OrthantCoefficient: return "OrthantCoefficient";
        case Certificate::Kind::UnivariateSturm: return "UnivariateSturm";
    }
    return "UnivariateSturm";
}

std::string face_criticality_name(FaceCriticality v) {
    switch (v) {
        case FaceCriticality::NoCriticalZeroFound: return "NoCriticalZeroFound";
        case FaceCriticality::DegeneratePoint: return "DegeneratePoint";
        case FaceCriticality::Unknown: return "Unknown";
    }
    return "Unknown";
}

Polynomial orthant_substitute(const Polynomial& f, const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != f.var_count())
        throw DomainError("sign vector length does not match the variable count");
    for (int s : sigma) {
        if (s != 1 && s != -1) throw DomainError("sign vector entries must be +1 or -1");
    }
    Polynomial out(f.var_count());
    for (const ExponentVec& alpha : f.support()) {
        int parity = 0;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            if (sigma[j] == -1) parity += alpha[j];
        }
        Rat c = f.coeff(alpha);
        if (parity % 2 != 0) c = -c;
        out.add_term(alpha, c);
    }
    return out;
}

SignVerdict sign_on_positive_orthant(const Polynomial& f, const SearchBudget& budget) {
    SignVerdict v;
    v.budget = budget;
    std::vector<ExponentVec> support = f.support();
    const int n = f.var_count();
    if (support.empty()) throw DomainError("sign analysis of the zero polynomial");
    if (support.size() == 1) {
        Certificate cert;
        cert.kind = Certificate::Kind::MonomialFace;
        cert.sign = sign_of(f.coeff(support[0]));
        v.kind = strict_kind(cert.sign);
        v.certificates.push_back(std::move(cert));
        return v;
    }
    {
        int shared = sign_of(f.coeff(support[0]));
        bool uniform = true;
        for (const ExponentVec& alpha : support) {
            if (sign_of(f.coeff(alpha)) != shared) {
                uniform = false;
                break;
            }
        }
        if (uniform) {
            Certificate cert;
            cert.kind = Certificate::Kind::OrthantCoefficient;
            cert.sign = shared;
            v.kind = strict_kind(shared);
            v.certificates.push_back(std::move(cert));
            return v;
        }
    }
    if (std::optional<LineReduction> red = reduce_to_line(f)) {
        ZPoly uz = from_rational_coeffs(red->u);
        ZPoly usf = squarefree_part(uz);
        int nroots = count_positive_roots(usf);
        if (nroots == 0) {
            Rat one = 1;
            Certificate cert;
            cert.kind = Certificate::Kind::UnivariateSturm;
            cert.sign = sign_at(uz, one);
            cert.beta = red->beta;
            cert.direction = red->w;
            cert.reduced = uz;
            cert.positive_root_count = 0;
            v.kind = strict_kind(cert.sign);
            v.certificates.push_back(std::move(cert));
            return v;
        }
        IntVec c = bezout_for_primitive(red->w);
        std::vector<Rat> roots = positive_rational_roots(usf);
        PositiveRootIsolation iso;
        if (roots.empty()) {
            iso = isolate_positive_roots(usf);
            roots = iso.exact_roots;
        }
        if (!roots.empty()) {
            std::vector<Rat> x = point_from_parameter(roots.front(), c);
            Rat value = f.evaluate(x);
            if (value != 0)
                throw std::logic_error("reconstructed zero fails exact re-evaluation");
            v.kind = SignKind::TakesZero;
            v.witnesses.push_back({std::move(x), Rat(0)});
            return v;
        }
        for (const auto& [a, b] : iso.intervals) {
            int sa = sign_at(uz, a);
            int sb = sign_at(uz, b);
            if (sa * sb >= 0) continue;
            std::vector<Rat> xa = point_from_parameter(a, c);
            std::vector<Rat> xb = point_from_parameter(b, c);
            Rat va = f.evaluate(xa);
            Rat vb = f.evaluate(xb);
            if (sign_of(va) != sa || sign_of(vb) != sb)
                throw std::logic_error("sign-change endpoints fail exact re-evaluation");
            WitnessPoint first{std::move(xa), std::move(va)};
            WitnessPoint second{std::move(xb), std::move(vb)};
            if (sign_of(first.value) < 0) std::swap(first, second);
            v.kind = SignKind::TakesBothSigns;
            v.witnesses.push_back(std::move(first));
            v.witnesses.push_back(std::move(second));
            return v;
        }
        v.kind = SignKind::Unknown;
        v.note =
            "univariate reduction has positive zeros, but they are irrational with even "
            "multiplicity; no exact witness exists at any budget";
        return v;
    }
    // Sampling: log-uniform magnitudes, exact evaluation of rationalized points.
    Prng rng(budget.seed);
    std::optional<WitnessPoint> pos;
    std::optional<WitnessPoint> neg;
    for (int iter = 0; iter < budget.samples_per_orthant; ++iter) {
        std::vector<Rat> x(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            double mag = rng.log_uniform(1e-3, 1e3);
            Rat r = rationalize(mag, budget.max_denominator);
            if (!(r > 0)) r = make_rat(1, 1000);
            x[static_cast<std::size_t>(j)] = r;
        }
        Rat value = f.evaluate(x);
        int s = sign_of(value);
        if (s == 0) {
            v.kind = SignKind::TakesZero;
            v.witnesses.push_back({std::move(x), std::move(value)});
            return v;
        }
        if (s > 0 && !pos) pos = WitnessPoint{std::move(x), std::move(value)};
        else if (s < 0 && !neg) neg = WitnessPoint{std::move(x), std::move(value)};
        if (pos && neg) break;
    }
    if (pos && neg) {
        if (std::optional<WitnessPoint> zero = bisect_for_zero(
                f, *pos, *neg, budget.bisection_steps, budget.max_denominator)) {
            v.kind = SignKind::TakesZero;
            v.witnesses.push_back(std::move(*zero));
            return v;
        }
        v.kind = SignKind::TakesBothSigns;
        v.witnesses.push_back(std::move(*pos));
        v.witnesses.push_back(std::move(*neg));
        return v;
    }
    v.kind = SignKind::Unknown;
    std::string seen = pos ? "positive" : (neg ? "negative" : "no");
    v.note = std::to_string(budget.samples_per_orthant) +
             " samples on the open positive orthant produced only " + seen +
             " values; strict sign not certified at this budget";
    return v;
}

SignVerdict sign_on_punctured_space(const Polynomial& f, const SearchBudget& budget) {
    const int n = f.var_count();
    if (n > kMaxVariables)
        throw ScaleLimitError("orthant sign analysis supports at most " +
                              std::to_string(kMaxVariables) + " variables");
    SignVerdict v;
    v.budget = budget;
    if (f.support().empty()) throw DomainError("sign analysis of the zero polynomial");
    struct OrthantOutcome {
        std::vector<int> sigma;
        SignVerdict verdict;
    };
    std::vector<OrthantOutcome> outcomes;
    const std::uint64_t count = std::uint64_t(1) << n;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<int> sigma = orthant_sigma(n, idx);
        Polynomial g = orthant_substitute(f, sigma);
        SearchBudget sub = budget;
        sub.seed = mix_seed(budget.seed, idx);
        SignVerdict verdict = sign_on_positive_orthant(g, sub);
        outcomes.push_back({std::move(sigma), std::move(verdict)});
    }
    auto map_witness = [](const std::vector<int>& sigma, const WitnessPoint& w) {
        WitnessPoint mapped = w;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            if (sigma[j] == -1) mapped.point[j] = -mapped.point[j];
        }
        return mapped;
    };
    for (const OrthantOutcome& o : outcomes) {
        if (o.verdict.kind != SignKind::TakesZero) continue;
        v.kind = SignKind::TakesZero;
        for (const WitnessPoint& w : o.verdict.witnesses)
            v.witnesses.push_back(map_witness(o.sigma, w));
        return v;
    }
    for (const OrthantOutcome& o : outcomes) {
        if (o.verdict.kind != SignKind::TakesBothSigns) continue;
        v.kind = SignKind::TakesBothSigns;
        for (const WitnessPoint& w : o.verdict.witnesses)
            v.witnesses.push_back(map_witness(o.sigma, w));
        return v;
    }
    const OrthantOutcome* strictly_pos = nullptr;
    const OrthantOutcome* strictly_neg = nullptr;
    bool any_unknown = false;
    for (const OrthantOutcome& o : outcomes) {
        if (o.verdict.kind == SignKind::StrictlyPositive && !strictly_pos) strictly_pos = &o;
        if (o.verdict.kind == SignKind::StrictlyNegative && !strictly_neg) strictly_neg = &o;
        if (o.verdict.kind == SignKind::Unknown) any_unknown = true;
    }
    if (strictly_pos && strictly_neg) {
        auto corner_witness = [&](const OrthantOutcome& o, int expected_sign) {
            std::vector<Rat> x(o.sigma.size());
            for (std::size_t j = 0; j < o.sigma.size(); ++j) x[j] = Rat(o.sigma[j]);
            Rat value = f.evaluate(x);
            if (sign_of(value) != expected_sign)
                throw std::logic_error("orthant corner fails its certified strict sign");
            return WitnessPoint{std::move(x), std::move(value)};
        };
        v.kind = SignKind::TakesBothSigns;
        v.witnesses.push_back(corner_witness(*strictly_pos, 1));
        v.witnesses.push_back(corner_witness(*strictly_neg, -1));
        return v;
    }
    if (any_unknown) {
        v.kind = SignKind::Unknown;
        std::string undecided;
        for (const OrthantOutcome& o : outcomes) {
            if (o.verdict.kind != SignKind::Unknown) continue;
            std::string pattern;
            for (int s : o.sigma) pattern += (s > 0 ? '+' : '-');
            if (!undecided.empty()) undecided += ", ";
            undecided += pattern;
            if (o.verdict.note.size() && v.note.empty()) v.note = o.verdict.note;
        }
        v.note = "orthants " + undecided + " undecided; " +
                 (v.note.empty() ? std::string("no witness found on any orthant") : v.note);
        return v;
    }
    // Every orthant certified the same strict sign.
    v.kind = strictly_pos ? SignKind::StrictlyPositive : SignKind::StrictlyNegative;
    for (OrthantOutcome& o : outcomes) {
        for (Certificate& cert : o.verdict.certificates) {
            cert.sigma = o.sigma;
            v.certificates.push_back(std::move(cert));
        }
    }
    return v;
}

nlohmann::ordered_json verdict_to_json(const SignVerdict& v) {
    nlohmann::ordered_json j;
    j["kind"] = sign_kind_name(v.kind);
    nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
    for (const WitnessPoint& w : v.witnesses) {
        nlohmann::ordered_json entry;
        nlohmann::ordered_json point = nlohmann::ordered_json::array();
        for (const Rat& c : w.point) point.push_back(rat_to_string(c));
        entry["point"] = std::move(point);
        entry["value"] = rat_to_string(w.value);
        witnesses.push_back(std::move(entry));
    }
    j["witnesses"] = std::move(witnesses);
    auto cert_json = [](const Certificate& c) {
        nlohmann::ordered_json e;
        e["kind"] = certificate_kind_name(c.kind);
        if (c.sigma.empty()) {
            e["sigma"] = nullptr;
        } else {
            e["sigma"] = c.sigma;
        }
        e["sign"] = c.sign;
        if (c.kind == Certificate::Kind::UnivariateSturm) {
            e["beta"] = c.beta;
            nlohmann::ordered_json dir = nlohmann::ordered_json::array();
            for (const Int& d : c.direction) dir.push_back(d.get_str());
            e["direction"] = std::move(dir);
            nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
            for (const Int& u : c.reduced) coeffs.push_back(u.get_str());
            e["reduced"] = std::move(coeffs);
            e["positive_root_count"] = c.positive_root_count;
        }
        return e;
    };
    if (v.certificates.empty()) {
        j["certificate"] = nullptr;
    } else if (v.certificates.size() == 1) {
        j["certificate"] = cert_json(v.certificates.front());
    } else {
        nlohmann::ordered_json per;
        per["kind"] = "PerOrthant";
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const Certificate& c : v.certificates) list.push_back(cert_json(c));
        per["orthants"] = std::move(list);
        j["certificate"] = std::move(per);
    }
    j["budget"] = {{"samples_per_orthant", v.budget.samples_per_orthant},
                   {"max_denominator", v.budget.max_denominator},
                   {"bisection_steps", v.budget.bisection_steps}};
    j["seed"] = v.budget.seed;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

namespace {

struct DoubleTerm {
    ExponentVec alpha;
    double coeff;
};

std::vector<DoubleTerm> double_terms(const Polynomial& f) {
    std::vector<DoubleTerm> out;
    for (const ExponentVec& alpha : f.support())
        out.push_back({alpha, rat_to_double(f.coeff(alpha))});
    return out;
}

double eval_terms(const std::vector<DoubleTerm>& terms, const std::vector<double>& x) {
    double acc = 0.0;
    for (const DoubleTerm& t : terms) {
        double m = t.coeff;
        for (std::size_t j = 0; j < x.size(); ++j) {
            for (int e = 0; e < t.alpha[j]; ++e) m *= x[j];
        }
        acc += m;
    }
    return acc;
}

// Search one orthant numerically for a joint zero of the polynomial and its
// gradient, working in log-coordinates so iterates stay inside the orthant.
std::optional<std::vector<Rat>> numeric_critical_search(
    const Polynomial& fd, const std::vector<Polynomial>& partials,
    const std::vector<int>& sigma, std::uint64_t seed, long max_denominator) {
    const int n = fd.var_count();
    std::vector<DoubleTerm> f_terms = double_terms(fd);
    std::vector<std::vector<DoubleTerm>> grad_terms;
    grad_terms.reserve(partials.size());
    for (const Polynomial& p : partials) grad_terms.push_back(double_terms(p));
    auto objective = [&](const std::vector<double>& z) {
        std::vector<double> x(z.size());
        for (std::size_t j = 0; j < z.size(); ++j)
            x[j] = static_cast<double>(sigma[j]) * std::exp(z[j]);
        double value = eval_terms(f_terms, x);
        double total = value * value;
        for (const auto& g : grad_terms) {
            double gv = eval_terms(g, x);
            total += gv * gv;
        }
        return total;
    };
    Prng rng(seed);
    constexpr int kStarts = 12;
    constexpr int kIters = 160;
    for (int start = 0; start < kStarts; ++start) {
        std::vector<double> z(static_cast<std::size_t>(n));
        for (double& zj : z) zj = 3.0 * rng.u01() - 1.5;
        double step = 0.25;
        double current = objective(z);
        for (int iter = 0; iter < kIters && step > 1e-14; ++iter) {
            std::vector<double> grad(z.size());
            const double h = 1e-6;
            for (std::size_t j = 0; j < z.size(); ++j) {
                std::vector<double> zp = z;
                std::vector<double> zm = z;
                zp[j] += h;
                zm[j] -= h;
                grad[j] = (objective(zp) - objective(zm)) / (2 * h);
            }
            double norm = 0.0;
            for (double g : grad) norm += g * g;
            norm = std::sqrt(norm);
            if (norm < 1e-18) break;
            std::vector<double> trial(z.size());
            for (std::size_t j = 0; j < z.size(); ++j)
                trial[j] = z[j] - step * grad[j] / norm;
            double next = objective(trial);
            if (next < current) {
                z = std::move(trial);
                current = next;
                step *= 1.3;
            } else {
                step *= 0.5;
            }
        }
        if (current > 1e-16) continue;
        std::vector<double> x(z.size());
        for (std::size_t j = 0; j < z.size(); ++j)
            x[j] = static_cast<double>(sigma[j]) * std::exp(z[j]);
        for (long den : {1L, 10L, 100L, 1000L, max_denominator}) {
            std::vector<Rat> candidate(x.size());
            bool usable = true;
            for (std::size_t j = 0; j < x.size(); ++j) {
                Rat r = rationalize(x[j], den);
                if (r == 0) {
                    usable = false;
                    break;
                }
                candidate[j] = r;
            }
            if (!usable) continue;
            Rat value = fd.evaluate(candidate);
            if (value != 0) continue;
            bool gradient_vanishes = true;
            for (const Polynomial& p : partials) {
                Rat g = p.evaluate(candidate);
                if (g != 0) {
                    gradient_vanishes = false;
                    break;
                }
            }
            if (gradient_vanishes) return candidate;
        }
    }
    return std::nullopt;
}

}  // namespace

NondegeneracyReport check_nondegeneracy(const Polynomial& f, const NewtonPolytope& p,
                                        const std::vector<Face>& faces,
                                        const SearchBudget& budget) {
    NondegeneracyReport report;
    const int n = f.var_count();
    if (n > kMaxVariables)
        throw ScaleLimitError("orthant sign analysis supports at most " +
                              std::to_string(kMaxVariables) + " variables");
    bool all_ok = true;
    for (std::size_t index = 0; index < faces.size(); ++index) {
        const Face& face = faces[index];
        if (!face.at_infinity) continue;
        FaceCriticalityReport entry;
        entry.face_index = index;
        Polynomial fd = face_polynomial(f, p, face);
        std::vector<Polynomial> partials = partial_derivatives(fd);
        std::vector<ExponentVec> support = fd.support();
        if (support.size() == 1) {
            entry.verdict = FaceCriticality::NoCriticalZeroFound;
            entry.note = "single monomial: never zero when all coordinates are nonzero";
            report.faces.push_back(std::move(entry));
            continue;
        }
        // Support on a line: repeated positive roots of the reduced
        // univariate polynomial decide the question exactly per orthant.
        if (reduce_to_line(fd)) {
            bool degenerate_found = false;
            bool undecided = false;
            const std::uint64_t count = std::uint64_t(1) << n;
            for (std::uint64_t idx = 0; idx < count && !degenerate_found; ++idx) {
                std::vector<int> sigma = orthant_sigma(n, idx);
                Polynomial g = orthant_substitute(fd, sigma);
                std::optional<LineReduction> red = reduce_to_line(g);
                if (!red) throw std::logic_error("line reduction lost under sign flips");
                ZPoly uz = from_rational_coeffs(red->u);
                ZPoly repeated = gcd_poly(uz, derivative(uz));
                if (degree(repeated) < 1) continue;
                int nroots = count_positive_roots(repeated);
                if (nroots == 0) continue;
                std::vector<Rat> roots = positive_rational_roots(repeated);
                if (roots.empty()) {
                    ZPoly rsf = squarefree_part(repeated);
                    PositiveRootIsolation iso = isolate_positive_roots(rsf);
                    roots = iso.exact_roots;
                }
                if (roots.empty()) {
                    undecided = true;
                    entry.note =
                        "a repeated positive root of the reduced univariate polynomial "
                        "exists but is irrational; no exact witness";
                    continue;
                }
                IntVec c = bezout_for_primitive(red->w);
                std::vector<Rat> x = point_from_parameter(roots.front(), c);
                for (std::size_t j = 0; j < x.size(); ++j) {
                    if (sigma[j] == -1) x[j] = -x[j];
                }
                Rat value = fd.evaluate(x);
                if (value != 0)
                    throw std::logic_error("repeated root fails exact re-evaluation");
                for (const Polynomial& dp : partials) {
                    Rat g_val = dp.evaluate(x);
                    if (g_val != 0)
                        throw std::logic_error("repeated root fails exact gradient check");
                }
                entry.verdict = FaceCriticality::DegeneratePoint;
                entry.witness = std::move(x);
                degenerate_found = true;
            }
            if (degenerate_found) {
                report.faces.push_back(std::move(entry));
                report.any_degenerate = true;
                all_ok = false;
                continue;
            }
            if (undecided) {
                entry.verdict = FaceCriticality::Unknown;
                report.faces.push_back(std::move(entry));
                all_ok = false;
                continue;
            }
            entry.verdict = FaceCriticality::NoCriticalZeroFound;
            entry.note =
                "reduced univariate polynomial has no repeated positive root in any orthant";
            report.faces.push_back(std::move(entry));
            continue;
        }
        // A certified strict sign rules out zeros entirely.
        SignVerdict sv = sign_on_punctured_space(fd, budget);
        if (sv.kind == SignKind::StrictlyPositive || sv.kind == SignKind::StrictlyNegative) {
            entry.verdict = FaceCriticality::NoCriticalZeroFound;
            entry.note = "certified strict sign: the face polynomial never vanishes";
            report.faces.push_back(std::move(entry));
            continue;
        }
        if (sv.kind == SignKind::TakesZero && !sv.witnesses.empty()) {
            const std::vector<Rat>& x = sv.witnesses.front().point;
            bool gradient_vanishes = true;
            for (const Polynomial& dp : partials) {
                Rat g_val = dp.evaluate(x);
                if (g_val != 0) {
                    gradient_vanishes = false;
                    break;
                }
            }
            if (gradient_vanishes) {
                entry.verdict = FaceCriticality::DegeneratePoint;
                entry.witness = sv.witnesses.front().point;
                report.faces.push_back(std::move(entry));
                report.any_degenerate = true;
                all_ok = false;
                continue;
            }
        }
        // Numeric multistart per orthant with exact reconstruction.
        bool found = false;
        const std::uint64_t count = std::uint64_t(1) << n;
        for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
            std::vector<int> sigma = orthant_sigma(n, idx);
            std::uint64_t seed = mix_seed(mix_seed(budget.seed, 0x6e6f6e64u + index), idx);
            if (std::optional<std::vector<Rat>> witness = numeric_critical_search(
                    fd, partials, sigma, seed, budget.max_denominator)) {
                entry.verdict = FaceCriticality::DegeneratePoint;
                entry.witness = std::move(*witness);
                report.faces.push_back(entry);
                report.any_degenerate = true;
                all_ok = false;
                found = true;
            }
        }
        if (found) continue;
        entry.verdict = FaceCriticality::Unknown;
        entry.note = "no exactly verifiable critical zero found by numeric search";
        report.faces.push_back(std::move(entry));
        all_ok = false;
    }
    report.all_certified = all_ok;
    return report;
}

nlohmann::ordered_json nondegeneracy_to_json(const NondegeneracyReport& r) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json faces = nlohmann::ordered_json::array();
    for (const FaceCriticalityReport& e : r.faces) {
        nlohmann::ordered_json entry;
        entry["face_index"] = e.face_index;
        entry["verdict"] = face_criticality_name(e.verdict);
        if (e.witness.empty()) {
            entry["witness"] = nullptr;
        } else {
            nlohmann::ordered_json point = nlohmann::ordered_json::array();
            for (const Rat& c : e.witness) point.push_back(rat_to_string(c));
            entry["witness"] = std::move(point);
        }
        if (!e.note.empty()) entry["note"] = e.note;
        faces.push_back(std::move(entry));
    }
    j["faces"] = std::move(faces);
    j["any_degenerate"] = r.any_degenerate;
    j["all_certified"] = r.all_certified;
    return j;
}

}  // namespace nwc

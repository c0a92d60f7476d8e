#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "nwc/errors.hpp"
#include "nwc/newton.hpp"
#include "nwc/polynomial.hpp"
#include "nwc/prng.hpp"
#include "nwc/rational.hpp"
#include "nwc/signcheck.hpp"
#include "nwc/sturm.hpp"
#include "test_util.hpp"

using namespace nwc;

namespace {

Rat Q(const std::string& s) { return rat_from_string(s); }

Polynomial P(int n, const std::string& expr) { return parse_polynomial(expr, n); }

ZPoly zp(std::initializer_list<long> coeffs) {
    ZPoly out;
    for (long c : coeffs) out.emplace_back(c);
    return normalize(std::move(out));
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly out(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            Int term = a[i] * b[j];
            out[i + j] += term;
        }
    }
    return normalize(std::move(out));
}

// Exact sign of f at a witness, demanding every coordinate nonzero.
void require_sound_witness(const Polynomial& f, const WitnessPoint& w, int expected_sign) {
    REQUIRE(w.point.size() == static_cast<std::size_t>(f.var_count()));
    for (const Rat& c : w.point) REQUIRE(c != 0);
    Rat value = f.evaluate(w.point);
    CHECK(value == w.value);
    CHECK(sign_of(value) == expected_sign);
}

void require_verdict_sound(const Polynomial& f, const SignVerdict& v) {
    switch (v.kind) {
        case SignKind::TakesZero:
            REQUIRE(!v.witnesses.empty());
            require_sound_witness(f, v.witnesses.front(), 0);
            break;
        case SignKind::TakesBothSigns: {
            REQUIRE(v.witnesses.size() >= 2);
            bool saw_pos = false, saw_neg = false;
            for (const WitnessPoint& w : v.witnesses) {
                for (const Rat& c : w.point) REQUIRE(c != 0);
                Rat value = f.evaluate(w.point);
                CHECK(value == w.value);
                if (value > 0) saw_pos = true;
                if (value < 0) saw_neg = true;
            }
            CHECK(saw_pos);
            CHECK(saw_neg);
            break;
        }
        case SignKind::StrictlyPositive:
        case SignKind::StrictlyNegative:
            REQUIRE(!v.certificates.empty());
            for (const Certificate& c : v.certificates) {
                auto err = verify_certificate(f, c);
                if (err) FAIL("certificate rejected: " << *err);
            }
            break;
        case SignKind::Unknown:
            CHECK(!v.note.empty());
            break;
    }
}

}  // namespace

TEST_CASE("integer univariate machinery counts and finds roots exactly") {
    // (s-1)(s-2)(s+3) = s^3 - 7s + 6
    ZPoly p = zp({6, -7, 0, 1});
    CHECK(degree(p) == 3);
    CHECK(eval_poly(p, Q("2")) == 0);
    CHECK(eval_poly(p, Q("0")) == 6);
    CHECK(sign_at(p, Q("3/2")) == -1);  // between the roots 1 and 2
    CHECK(count_positive_roots(p) == 2);
    std::vector<Rat> roots = positive_rational_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == 1);
    CHECK(roots[1] == 2);
    Rat bound = cauchy_root_bound(p);
    CHECK(bound > 2);
    CHECK(count_roots_in(p, Q("-4"), Q("0")) == 1);  // the root -3

    // Denominator clearing: 1/2 + s/3 -> 3 + 2s.
    ZPoly cleared = from_rational_coeffs({Q("1/2"), Q("1/3")});
    CHECK(cleared == zp({3, 2}));

    // (s-1)^2 (s+2) = s^3 - 3s + 2; the square-free part drops the doubling.
    ZPoly doubled = zp({2, -3, 0, 1});
    ZPoly sf = squarefree_part(doubled);
    CHECK(sf == zp({-2, 1, 1}));  // (s-1)(s+2)
    CHECK(count_positive_roots(doubled) == 1);

    // gcd((s-1)(s-2), (s-1)(s-3)) = s-1.
    ZPoly g = gcd_poly(mul(zp({-1, 1}), zp({-2, 1})), mul(zp({-1, 1}), zp({-3, 1})));
    CHECK(g == zp({-1, 1}));

    // s^2 - 2 has one (irrational) positive root.
    ZPoly irr = zp({-2, 0, 1});
    CHECK(count_positive_roots(irr) == 1);
    CHECK(positive_rational_roots(irr).empty());
    PositiveRootIsolation iso = isolate_positive_roots(irr);
    CHECK(iso.exact_roots.empty());
    REQUIRE(iso.intervals.size() == 1);
    CHECK(sign_at(irr, iso.intervals[0].first) == -1);
    CHECK(sign_at(irr, iso.intervals[0].second) == 1);

    CHECK_THROWS_AS(count_positive_roots(ZPoly{}), DomainError);
    CHECK_THROWS_AS(count_positive_roots(zp({0, 1})), DomainError);
    CHECK_THROWS_AS(cauchy_root_bound(ZPoly{}), DomainError);
}

TEST_CASE("root machinery agrees with planted factorizations") {
    Prng rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        // Plant distinct positive rational roots, a few negative ones, and an
        // irreducible quadratic, then multiply out.
        int npos = static_cast<int>(rng.uniform_int(0, 3));
        int nneg = static_cast<int>(rng.uniform_int(0, 2));
        std::set<Rat> pos_roots;
        while (static_cast<int>(pos_roots.size()) < npos) {
            long num = rng.uniform_int(1, 9);
            long den = rng.uniform_int(1, 6);
            pos_roots.insert(make_rat(num, den));
        }
        ZPoly u = zp({1});
        for (const Rat& r : pos_roots) {
            // factor (den*s - num)
            ZPoly factor;
            factor.push_back(Int(-r.get_num()));
            factor.push_back(r.get_den());
            u = mul(u, factor);
        }
        for (int i = 0; i < nneg; ++i) {
            long r = rng.uniform_int(1, 9);
            ZPoly factor = zp({r, 1});  // s + r
            u = mul(u, factor);
        }
        long shift = rng.uniform_int(1, 5);
        u = mul(u, zp({shift, 0, 1}));  // s^2 + shift, no real roots
        CHECK(count_positive_roots(u) == npos);
        std::vector<Rat> found = positive_rational_roots(u);
        std::vector<Rat> expected(pos_roots.begin(), pos_roots.end());
        CHECK(found == expected);
        PositiveRootIsolation iso = isolate_positive_roots(u);
        CHECK(iso.intervals.size() + iso.exact_roots.size() ==
              static_cast<std::size_t>(npos));
        for (const auto& [a, b] : iso.intervals) {
            CHECK(count_roots_in(u, a, b) == 1);
        }
        for (const Rat& r : iso.exact_roots) CHECK(eval_poly(u, r) == 0);
    }
}

TEST_CASE("orthant reflection flips odd-degree coefficients") {
    Polynomial f = P(2, "x1*x2 - 1");
    CHECK(orthant_substitute(f, {-1, 1}) == P(2, "-x1*x2 - 1"));

    Polynomial circle_terms = P(2, "x1^2 + x2^2");
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        std::vector<int> sigma{(idx & 1) ? -1 : 1, (idx & 2) ? -1 : 1};
        CHECK(orthant_substitute(circle_terms, sigma) == circle_terms);
    }

    Polynomial square = P(2, "(x1 - x2)^2");
    CHECK(orthant_substitute(square, {-1, -1}) == square);

    CHECK_THROWS_AS(orthant_substitute(f, {1}), DomainError);
    CHECK_THROWS_AS(orthant_substitute(f, {1, 0}), DomainError);

    Prng rng(11);
    for (int iter = 0; iter < 20; ++iter) {
        int n = static_cast<int>(rng.uniform_int(1, 3));
        Polynomial g = nwc_test::random_polynomial(rng, n, 5, 3);
        std::vector<int> sigma(static_cast<std::size_t>(n));
        for (int& s : sigma) s = rng.uniform_int(0, 1) ? 1 : -1;
        std::vector<Rat> y = nwc_test::random_point(rng, n, true);
        std::vector<Rat> x(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) {
            Rat flipped = Rat(sigma[j]) * y[j];
            x[j] = flipped;
        }
        Rat direct = g.evaluate(x);
        Rat reflected = orthant_substitute(g, sigma).evaluate(y);
        CHECK(direct == reflected);
    }
}

TEST_CASE("positive-orthant signs: coefficient and monomial tiers") {
    SearchBudget budget;
    SignVerdict v = sign_on_positive_orthant(P(2, "x1^2 + x2^2"), budget);
    CHECK(v.kind == SignKind::StrictlyPositive);
    REQUIRE(v.certificates.size() == 1);
    CHECK(v.certificates[0].kind == Certificate::Kind::OrthantCoefficient);
    require_verdict_sound(P(2, "x1^2 + x2^2"), v);

    Polynomial mono = P(2, "-3*x1^2*x2");
    SignVerdict vm = sign_on_positive_orthant(mono, budget);
    CHECK(vm.kind == SignKind::StrictlyNegative);
    REQUIRE(vm.certificates.size() == 1);
    CHECK(vm.certificates[0].kind == Certificate::Kind::MonomialFace);
    require_verdict_sound(mono, vm);

    CHECK_THROWS_AS(sign_on_positive_orthant(Polynomial(2), budget), DomainError);
}

TEST_CASE("positive-orthant signs: univariate reduction tier") {
    SearchBudget budget;

    // (y1-y2)^2: support on a line, u(s) = (1-s)^2 with double root s = 1.
    Polynomial square = P(2, "(x1 - x2)^2");
    SignVerdict v = sign_on_positive_orthant(square, budget);
    CHECK(v.kind == SignKind::TakesZero);
    REQUIRE(v.witnesses.size() == 1);
    CHECK(v.witnesses[0].point == std::vector<Rat>{Q("1"), Q("1")});
    CHECK(v.witnesses[0].value == 0);

    // y1y2 - 1: two terms lie on a line; u(s) = s - 1 has the exact root 1,
    // so the reduction tier resolves it as TakesZero at (1,1) before any
    // sampling runs.  The claimed values at (1,2) and (1,1/2) stay exact.
    Polynomial hyp = P(2, "x1*x2 - 1");
    CHECK(hyp.evaluate({Q("1"), Q("2")}) == 1);
    CHECK(hyp.evaluate({Q("1"), Q("1/2")}) == Q("-1/2"));
    SignVerdict vh = sign_on_positive_orthant(hyp, budget);
    CHECK(vh.kind == SignKind::TakesZero);
    REQUIRE(vh.witnesses.size() == 1);
    CHECK(vh.witnesses[0].point == std::vector<Rat>{Q("1"), Q("1")});

    // Mixed coefficients, no positive root: x1^2x2^2 - x1x2 + 1 reduces to
    // s^2 - s + 1 (negative discriminant).
    Polynomial posline = P(2, "x1^2*x2^2 - x1*x2 + 1");
    SignVerdict vp = sign_on_positive_orthant(posline, budget);
    CHECK(vp.kind == SignKind::StrictlyPositive);
    REQUIRE(vp.certificates.size() == 1);
    CHECK(vp.certificates[0].kind == Certificate::Kind::UnivariateSturm);
    CHECK(vp.certificates[0].positive_root_count == 0);
    require_verdict_sound(posline, vp);

    // Sign change with an exact rational crossing: u(s) = s^2 - 4 has the
    // root 2; support of x1^2x2^2 - 4 is on a line.
    Polynomial crossing = P(2, "x1^2*x2^2 - 4");
    SignVerdict vc = sign_on_positive_orthant(crossing, budget);
    CHECK(vc.kind == SignKind::TakesZero);
    require_verdict_sound(crossing, vc);

    // Direction with mixed signs still lands on a valid positive point:
    // x1^2 - x2^2 reduces along w = (1,-1); the root s = 1 maps to (1,1).
    Polynomial diff = P(2, "x1^2 - x2^2");
    SignVerdict vd = sign_on_positive_orthant(diff, budget);
    CHECK(vd.kind == SignKind::TakesZero);
    REQUIRE(vd.witnesses.size() == 1);
    CHECK(vd.witnesses[0].point == std::vector<Rat>{Q("1"), Q("1")});

    // Irrational crossing: x1^2x2^2 - 2 changes sign at s = sqrt(2); the
    // tier reports exact opposite-sign endpoints instead.
    Polynomial irr = P(2, "x1^2*x2^2 - 2");
    SignVerdict vi = sign_on_positive_orthant(irr, budget);
    CHECK(vi.kind == SignKind::TakesBothSigns);
    require_verdict_sound(irr, vi);
}

TEST_CASE("positive-orthant signs: sampling and honest unknowns") {
    SearchBudget budget;

    // x1 + x2 - x1x2 is not line-supported and has mixed signs; sampling
    // finds both signs, and the crossing reconstructs only if rational.
    Polynomial mixed = P(2, "x1 + x2 - x1*x2");
    SignVerdict v = sign_on_positive_orthant(mixed, budget);
    CHECK((v.kind == SignKind::TakesBothSigns || v.kind == SignKind::TakesZero));
    require_verdict_sound(mixed, v);

    // A nonnegative polynomial with only isolated zeros defeats sampling:
    // the honest outcome is Unknown, never a strict claim.
    Polynomial motzkin = P(2, "x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1");
    SignVerdict vm = sign_on_positive_orthant(motzkin, budget);
    CHECK(vm.kind == SignKind::Unknown);
    CHECK(!vm.note.empty());
}

TEST_CASE("punctured-space signs combine all orthants") {
    SearchBudget budget;

    Polynomial circle_terms = P(2, "x1^2 + x2^2");
    SignVerdict v = sign_on_punctured_space(circle_terms, budget);
    CHECK(v.kind == SignKind::StrictlyPositive);
    CHECK(v.certificates.size() == 4);  // one per orthant
    std::set<std::vector<int>> seen;
    for (const Certificate& c : v.certificates) seen.insert(c.sigma);
    CHECK(seen.size() == 4);
    require_verdict_sound(circle_terms, v);

    Polynomial square = P(2, "(x1 - x2)^2");
    SignVerdict vs = sign_on_punctured_space(square, budget);
    CHECK(vs.kind == SignKind::TakesZero);
    REQUIRE(!vs.witnesses.empty());
    CHECK(vs.witnesses[0].point == std::vector<Rat>{Q("1"), Q("1")});

    // An odd power splits the orthants into strictly positive and strictly
    // negative halves; the corners (1,1) and (-1,1) witness the mix.
    Polynomial cube = P(2, "x1^3");
    SignVerdict vc = sign_on_punctured_space(cube, budget);
    CHECK(vc.kind == SignKind::TakesBothSigns);
    REQUIRE(vc.witnesses.size() == 2);
    CHECK(vc.witnesses[0].point == std::vector<Rat>{Q("1"), Q("1")});
    CHECK(vc.witnesses[0].value == 1);
    CHECK(vc.witnesses[1].point == std::vector<Rat>{Q("-1"), Q("1")});
    CHECK(vc.witnesses[1].value == -1);

    Polynomial hyp = P(2, "x1*x2 - 1");
    SignVerdict vh = sign_on_punctured_space(hyp, budget);
    CHECK(vh.kind == SignKind::TakesZero);
    require_verdict_sound(hyp, vh);

    CHECK_THROWS_AS(sign_on_punctured_space(Polynomial(2), budget), DomainError);
    CHECK_THROWS_AS(sign_on_punctured_space(Polynomial(7), budget), ScaleLimitError);
}

TEST_CASE("verdicts are invariant under reflections and positive scaling") {
    SearchBudget budget;
    std::vector<Polynomial> instances{
        P(2, "x1^2 + x2^2"),
        P(2, "(x1 - x2)^2"),
        P(2, "x1*x2 - 1"),
        P(2, "x1^3"),
        P(2, "-x1^2 - x2^2 - 1"),
        P(2, "x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1"),
    };
    for (const Polynomial& f : instances) {
        SignVerdict base = sign_on_punctured_space(f, budget);
        for (const Rat& lambda : {Q("3"), Q("1/7"), Q("12/5")}) {
            SignVerdict scaled = sign_on_punctured_space(f.scaled(lambda), budget);
            CHECK(scaled.kind == base.kind);
        }
        for (std::uint64_t idx = 0; idx < 4; ++idx) {
            std::vector<int> sigma{(idx & 1) ? -1 : 1, (idx & 2) ? -1 : 1};
            Polynomial reflected = orthant_substitute(f, sigma);
            SignVerdict rv = sign_on_punctured_space(reflected, budget);
            CHECK(rv.kind == base.kind);
            // Witnesses for the reflected polynomial map back through sigma
            // to witnesses for f with identical values.
            for (const WitnessPoint& w : rv.witnesses) {
                std::vector<Rat> mapped(w.point.size());
                for (std::size_t j = 0; j < w.point.size(); ++j) {
                    Rat back = Rat(sigma[j]) * w.point[j];
                    mapped[j] = back;
                }
                CHECK(f.evaluate(mapped) == w.value);
            }
        }
    }
}

TEST_CASE("strict verdicts never contradict a brute-force sign grid") {
    SearchBudget budget;
    std::vector<Polynomial> instances{
        P(2, "x1^2 + x2^2"),
        P(2, "-x1^2 - x2^2 - 1"),
        P(2, "x1^2*x2^2 + 1"),
        P(2, "x1^4 - x1^2*x2^2 + x2^4"),
        P(2, "(x1 - x2)^2"),
        P(2, "x1*x2 - 1"),
        P(2, "x1^3"),
    };
    for (const Polynomial& f : instances) {
        SignVerdict v = sign_on_punctured_space(f, budget);
        int required = 0;
        if (v.kind == SignKind::StrictlyPositive) required = 1;
        if (v.kind == SignKind::StrictlyNegative) required = -1;
        if (required == 0) continue;
        for (int i = 0; i <= 400; ++i) {
            Rat x1 = Q("-10") + Rat(i) * Q("1/20");
            if (x1 == 0) continue;
            for (int j = 0; j <= 400; ++j) {
                Rat x2 = Q("-10") + Rat(j) * Q("1/20");
                if (x2 == 0) continue;
                Rat value = f.evaluate({x1, x2});
                if (sign_of(value) != required) {
                    CAPTURE(rat_to_string(x1));
                    CAPTURE(rat_to_string(x2));
                    REQUIRE(sign_of(value) == required);
                }
            }
        }
    }
}

TEST_CASE("reduction identity holds on random line supports") {
    Prng rng(23);
    for (int iter = 0; iter < 100; ++iter) {
        int n = static_cast<int>(rng.uniform_int(1, 4));
        IntVec w(static_cast<std::size_t>(n), Int(0));
        bool nonzero = false;
        while (!nonzero) {
            for (Int& c : w) {
                c = rng.uniform_int(-3, 3);
                if (c != 0) nonzero = true;
            }
        }
        make_primitive(w);
        int kmax = static_cast<int>(rng.uniform_int(1, 5));
        ExponentVec beta(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            long wj = w[static_cast<std::size_t>(j)].get_si();
            long floor_j = wj < 0 ? -wj * kmax : 0;
            beta[static_cast<std::size_t>(j)] =
                static_cast<int>(floor_j + rng.uniform_int(0, 2));
        }
        // Random coefficients on a subset of multiples of w.
        std::vector<Rat> u(static_cast<std::size_t>(kmax) + 1, Rat(0));
        Polynomial f(n);
        int terms = 0;
        for (int k = 0; k <= kmax; ++k) {
            if (k != 0 && k != kmax && rng.uniform_int(0, 1) == 0) continue;
            Rat a = nwc_test::random_nonzero_rat(rng, -5, 5, 4);
            u[static_cast<std::size_t>(k)] = a;
            ExponentVec alpha(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                long wj = w[static_cast<std::size_t>(j)].get_si();
                alpha[static_cast<std::size_t>(j)] =
                    beta[static_cast<std::size_t>(j)] + static_cast<int>(wj) * k;
            }
            f.add_term(alpha, a);
            ++terms;
        }
        REQUIRE(terms >= 2);
        for (int rep = 0; rep < 1; ++rep) {
            std::vector<Rat> p(static_cast<std::size_t>(n));
            for (Rat& c : p) {
                long num = rng.uniform_int(1, 9);
                long den = rng.uniform_int(1, 9);
                c = make_rat(num, den);
            }
            // p^w and p^beta, exactly.
            Rat s = 1;
            Rat monom = 1;
            for (int j = 0; j < n; ++j) {
                Rat pw = pow_rat(p[static_cast<std::size_t>(j)],
                                 w[static_cast<std::size_t>(j)].get_si());
                Rat pb = pow_rat(p[static_cast<std::size_t>(j)],
                                 beta[static_cast<std::size_t>(j)]);
                s *= pw;
                monom *= pb;
            }
            Rat horner = 0;
            for (std::size_t k = u.size(); k-- > 0;) {
                Rat next = horner * s + u[k];
                horner = next;
            }
            Rat reduced = monom * horner;
            CHECK(f.evaluate(p) == reduced);
        }
    }
}

TEST_CASE("certificate verifier rejects corrupted claims") {
    SearchBudget budget;

    Polynomial sum = P(2, "x1^2 + x2^2");
    SignVerdict v = sign_on_positive_orthant(sum, budget);
    REQUIRE(v.certificates.size() == 1);
    Certificate good = v.certificates[0];
    CHECK(!verify_certificate(sum, good));
    Certificate flipped = good;
    flipped.sign = -flipped.sign;
    CHECK(verify_certificate(sum, flipped).has_value());
    CHECK(verify_certificate(P(2, "x1^2 - x2^2"), good).has_value());

    Polynomial mono = P(2, "-3*x1^2*x2");
    SignVerdict vm = sign_on_positive_orthant(mono, budget);
    Certificate mono_cert = vm.certificates[0];
    CHECK(verify_certificate(sum, mono_cert).has_value());  // not a monomial

    Polynomial posline = P(2, "x1^2*x2^2 - x1*x2 + 1");
    SignVerdict vp = sign_on_positive_orthant(posline, budget);
    REQUIRE(vp.certificates.size() == 1);
    Certificate sturm_cert = vp.certificates[0];
    CHECK(!verify_certificate(posline, sturm_cert));
    {
        Certificate bad = sturm_cert;
        bad.reduced[1] = Int(5);  // breaks proportionality with the terms
        CHECK(verify_certificate(posline, bad).has_value());
    }
    {
        Certificate bad = sturm_cert;
        bad.positive_root_count = 1;  // wrong count, and not a strict claim
        CHECK(verify_certificate(posline, bad).has_value());
    }
    {
        Certificate bad = sturm_cert;
        bad.direction[0] = Int(2);  // support no longer lies on this line
        CHECK(verify_certificate(posline, bad).has_value());
    }
    {
        // A certificate claiming zero roots for a polynomial that has one.
        Certificate bad = sturm_cert;
        Polynomial crossing = P(2, "x1^2*x2^2 - 4");
        bad.reduced = zp({-4, 0, 1});
        bad.beta = ExponentVec{0, 0};
        bad.direction = IntVec{Int(1), Int(1)};
        bad.positive_root_count = 0;
        bad.sign = 1;
        CHECK(verify_certificate(crossing, bad).has_value());
    }
}

TEST_CASE("verdicts serialize with exact witnesses and budget") {
    SearchBudget budget;
    budget.seed = 42;
    Polynomial square = P(2, "(x1 - x2)^2");
    SignVerdict v = sign_on_punctured_space(square, budget);
    nlohmann::ordered_json j = verdict_to_json(v);
    CHECK(j["kind"] == "TakesZero");
    REQUIRE(j["witnesses"].is_array());
    CHECK(j["witnesses"][0]["point"][0] == "1");
    CHECK(j["witnesses"][0]["value"] == "0");
    CHECK(j["certificate"].is_null());
    CHECK(j["budget"]["samples_per_orthant"] == 2000);
    CHECK(j["seed"] == 42);

    SignVerdict strict = sign_on_punctured_space(P(2, "x1^2 + x2^2"), budget);
    nlohmann::ordered_json js = verdict_to_json(strict);
    CHECK(js["kind"] == "StrictlyPositive");
    CHECK(js["certificate"]["kind"] == "PerOrthant");
    CHECK(js["certificate"]["orthants"].size() == 4);

    SignVerdict single = sign_on_positive_orthant(P(2, "x1^2*x2^2 - x1*x2 + 1"), budget);
    nlohmann::ordered_json j1 = verdict_to_json(single);
    CHECK(j1["certificate"]["kind"] == "UnivariateSturm");
    CHECK(j1["certificate"]["positive_root_count"] == 0);
    CHECK(j1["certificate"]["sigma"].is_null());
}

TEST_CASE("critical-zero search certifies clean faces and finds real ones") {
    SearchBudget budget;

    // Unit circle: every face at infinity has a nonvanishing face polynomial.
    Polynomial circle = P(2, "x1^2 + x2^2 - 1");
    NewtonPolytope cp = newton_polytope(circle);
    std::vector<Face> cfaces = enumerate_faces(cp);
    boundary_at_infinity(cp, cfaces);
    NondegeneracyReport cr = check_nondegeneracy(circle, cp, cfaces, budget);
    CHECK(cr.all_certified);
    CHECK(!cr.any_degenerate);
    std::size_t infinity_count = 0;
    for (const Face& face : cfaces)
        if (face.at_infinity) ++infinity_count;
    CHECK(cr.faces.size() == infinity_count);
    for (const FaceCriticalityReport& e : cr.faces)
        CHECK(e.verdict == FaceCriticality::NoCriticalZeroFound);

    // (x1-x2)^2: the improper segment face carries the whole polynomial,
    // whose gradient vanishes on the diagonal; (1,1) is the exact witness.
    Polynomial square = P(2, "(x1 - x2)^2");
    NewtonPolytope sp = newton_polytope(square);
    std::vector<Face> sfaces = enumerate_faces(sp);
    boundary_at_infinity(sp, sfaces);
    NondegeneracyReport sr = check_nondegeneracy(square, sp, sfaces, budget);
    CHECK(sr.any_degenerate);
    CHECK(!sr.all_certified);
    bool found_witness = false;
    for (const FaceCriticalityReport& e : sr.faces) {
        if (e.verdict != FaceCriticality::DegeneratePoint) continue;
        CHECK(e.witness == std::vector<Rat>{Q("1"), Q("1")});
        found_witness = true;
        Polynomial fd = face_polynomial(square, sp, sfaces[e.face_index]);
        CHECK(fd.evaluate(e.witness) == 0);
        for (const Polynomial& dp : partial_derivatives(fd))
            CHECK(dp.evaluate(e.witness) == 0);
    }
    CHECK(found_witness);

    // Single monomial: trivially certified.
    Polynomial mono = P(2, "7*x1^3*x2");
    NewtonPolytope mp = newton_polytope(mono);
    std::vector<Face> mfaces = enumerate_faces(mp);
    boundary_at_infinity(mp, mfaces);
    NondegeneracyReport mr = check_nondegeneracy(mono, mp, mfaces, budget);
    CHECK(mr.all_certified);
    REQUIRE(!mr.faces.empty());
    CHECK(mr.faces[0].verdict == FaceCriticality::NoCriticalZeroFound);

    // Hyperbola: gradient (x2, x1) never vanishes off the axes.
    Polynomial hyp = P(2, "x1*x2 - 1");
    NewtonPolytope hp = newton_polytope(hyp);
    std::vector<Face> hfaces = enumerate_faces(hp);
    boundary_at_infinity(hp, hfaces);
    NondegeneracyReport hr = check_nondegeneracy(hyp, hp, hfaces, budget);
    CHECK(hr.all_certified);
    CHECK(!hr.any_degenerate);

    nlohmann::ordered_json j = nondegeneracy_to_json(sr);
    CHECK(j["any_degenerate"] == true);
    CHECK(j["all_certified"] == false);
    REQUIRE(j["faces"].is_array());
    CHECK(j["faces"].size() == sr.faces.size());
}

TEST_CASE("critical-zero search handles faces of dimension two and higher") {
    SearchBudget budget;

    // All coefficients positive: certified by strict sign, no line support.
    Polynomial sum3 = P(3, "x1^2 + x2^2 + x3^2");
    NewtonPolytope pp = newton_polytope(sum3);
    std::vector<Face> pfaces = enumerate_faces(pp);
    boundary_at_infinity(pp, pfaces);
    NondegeneracyReport pr = check_nondegeneracy(sum3, pp, pfaces, budget);
    CHECK(pr.all_certified);

    // (x1-x2)^2 + (x1-x3)^2 vanishes with its gradient along the diagonal
    // x1 = x2 = x3; the planar support defeats the line reduction, so the
    // numeric search must reconstruct an exact rational point.
    Polynomial diag = P(3, "(x1 - x2)^2 + (x1 - x3)^2");
    NewtonPolytope dp = newton_polytope(diag);
    std::vector<Face> dfaces = enumerate_faces(dp);
    boundary_at_infinity(dp, dfaces);
    NondegeneracyReport dr = check_nondegeneracy(diag, dp, dfaces, budget);
    CHECK(dr.any_degenerate);
    bool verified = false;
    for (const FaceCriticalityReport& e : dr.faces) {
        if (e.verdict != FaceCriticality::DegeneratePoint) continue;
        Polynomial fd = face_polynomial(diag, dp, dfaces[e.face_index]);
        CHECK(fd.evaluate(e.witness) == 0);
        for (const Polynomial& dpoly : partial_derivatives(fd))
            CHECK(dpoly.evaluate(e.witness) == 0);
        for (const Rat& c : e.witness) CHECK(c != 0);
        verified = true;
    }
    CHECK(verified);

    // x1^2 + x2^2 - x3^2 has no critical zero off the origin, but the tiers
    // cannot certify that; the verdict must stay Unknown, never a false
    // witness.
    Polynomial cone = P(3, "x1^2 + x2^2 - x3^2");
    NewtonPolytope cp = newton_polytope(cone);
    std::vector<Face> cfaces = enumerate_faces(cp);
    boundary_at_infinity(cp, cfaces);
    NondegeneracyReport cr = check_nondegeneracy(cone, cp, cfaces, budget);
    CHECK(!cr.any_degenerate);
    bool has_unknown = false;
    for (const FaceCriticalityReport& e : cr.faces) {
        CHECK(e.verdict != FaceCriticality::DegeneratePoint);
        if (e.verdict == FaceCriticality::Unknown) has_unknown = true;
    }
    CHECK(has_unknown);
}

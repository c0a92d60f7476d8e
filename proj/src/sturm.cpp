#include "nwc/sturm.hpp"

#include <algorithm>
#include <stdexcept>

#include "nwc/errors.hpp"

namespace nwc {

namespace {

using QPoly = std::vector<Rat>;  // ascending, used internally for remainders

QPoly to_qpoly(const ZPoly& p) {
    QPoly q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = Rat(p[i]);
    return q;
}

QPoly normalize_q(QPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

// Remainder of a by b over the rationals; b must be nonzero.
QPoly q_remainder(QPoly a, const QPoly& b) {
    a = normalize_q(std::move(a));
    while (a.size() >= b.size() && !a.empty()) {
        Rat factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            Rat delta = factor * b[i];
            a[shift + i] -= delta;
        }
        a = normalize_q(std::move(a));
    }
    return a;
}

// Exact quotient a / b over the rationals; remainder must vanish.
QPoly q_quotient_exact(QPoly a, const QPoly& b) {
    a = normalize_q(std::move(a));
    if (b.empty()) throw DomainError("polynomial division by zero");
    QPoly quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rat factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        quot[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) {
            Rat delta = factor * b[i];
            a[shift + i] -= delta;
        }
        a = normalize_q(std::move(a));
    }
    if (!a.empty()) throw std::logic_error("polynomial division expected to be exact");
    return quot;
}

ZPoly clear_denominators(const QPoly& p) {
    if (p.empty()) return {};
    Int scale = 1;
    for (const Rat& c : p) {
        Int den = c.get_den();
        Int next;
        mpz_lcm(next.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
        scale = next;
    }
    ZPoly out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Rat scaled = p[i] * Rat(scale);
        out[i] = scaled.get_num();
    }
    // Divide by the content so the result is primitive.
    Int content = 0;
    for (const Int& c : out) {
        Int next;
        mpz_gcd(next.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
        content = next;
    }
    if (content > 1) {
        for (Int& c : out) c /= content;
    }
    return out;
}

// Sturm chain starting from (p, p'); subsequent entries are negated
// remainders.  Coefficients are kept primitive-integer to control growth.
std::vector<ZPoly> sturm_chain(const ZPoly& p) {
    std::vector<ZPoly> chain;
    ZPoly first = normalize(p);
    if (first.empty()) return chain;
    chain.push_back(first);
    ZPoly second = derivative(first);
    if (second.empty()) return chain;
    chain.push_back(second);
    while (true) {
        const ZPoly& a = chain[chain.size() - 2];
        const ZPoly& b = chain[chain.size() - 1];
        QPoly rem = q_remainder(to_qpoly(a), to_qpoly(b));
        if (rem.empty()) break;
        for (Rat& c : rem) c = -c;
        chain.push_back(clear_denominators(rem));
    }
    return chain;
}

int sign_variations(const std::vector<ZPoly>& chain, const Rat& x) {
    int variations = 0;
    int last = 0;
    for (const ZPoly& p : chain) {
        int s = sign_at(p, x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++variations;
        last = s;
    }
    return variations;
}

// Sign variations "at +infinity": use leading-coefficient signs.
int sign_variations_at_infinity(const std::vector<ZPoly>& chain) {
    int variations = 0;
    int last = 0;
    for (const ZPoly& p : chain) {
        if (p.empty()) continue;
        int s = sgn(p.back());
        if (s == 0) continue;
        if (last != 0 && s != last) ++variations;
        last = s;
    }
    return variations;
}

// All positive divisors of |n|, best effort: trial division by primes up to
// 10^5, any remaining cofactor treated as prime.  The divisor list is capped;
// the cap is far above anything the input scale guards admit.
std::vector<Int> positive_divisors(Int n) {
    constexpr std::size_t kDivisorCap = 4096;
    if (n < 0) n = -n;
    if (n == 0) return {};
    std::vector<std::pair<Int, unsigned>> factors;
    Int remaining = n;
    for (long p = 2; p <= 100000 && remaining > 1; p == 2 ? p = 3 : p += 2) {
        Int prime = p;
        if (remaining % prime != 0) continue;
        unsigned mult = 0;
        while (remaining % prime == 0) {
            remaining /= prime;
            ++mult;
        }
        factors.emplace_back(prime, mult);
        Int bound = prime * prime;
        if (bound > remaining) break;
    }
    if (remaining > 1) factors.emplace_back(remaining, 1);
    std::vector<Int> divisors{Int(1)};
    for (const auto& [prime, mult] : factors) {
        std::size_t existing = divisors.size();
        Int power = 1;
        for (unsigned e = 1; e <= mult; ++e) {
            Int next_power = power * prime;
            power = next_power;
            for (std::size_t i = 0; i < existing; ++i) {
                if (divisors.size() >= kDivisorCap) break;
                Int d = divisors[i] * power;
                divisors.push_back(d);
            }
        }
    }
    std::sort(divisors.begin(), divisors.end());
    divisors.erase(std::unique(divisors.begin(), divisors.end()), divisors.end());
    return divisors;
}

}  // namespace

ZPoly normalize(ZPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

ZPoly from_rational_coeffs(const std::vector<Rat>& coeffs) {
    return clear_denominators(normalize_q(QPoly(coeffs.begin(), coeffs.end())));
}

ZPoly derivative(const ZPoly& p) {
    if (p.size() <= 1) return {};
    ZPoly out(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) {
        Int c = p[i] * Int(static_cast<long>(i));
        out[i - 1] = c;
    }
    return normalize(std::move(out));
}

Rat eval_poly(const ZPoly& p, const Rat& x) {
    Rat acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        Rat next = acc * x + Rat(p[i]);
        acc = next;
    }
    return acc;
}

int sign_at(const ZPoly& p, const Rat& x) {
    Rat v = eval_poly(p, x);
    return sign_of(v);
}

ZPoly gcd_poly(ZPoly a, ZPoly b) {
    a = normalize(std::move(a));
    b = normalize(std::move(b));
    if (a.empty()) return b;
    if (b.empty()) return a;
    QPoly qa = to_qpoly(a);
    QPoly qb = to_qpoly(b);
    while (!qb.empty()) {
        QPoly rem = q_remainder(qa, qb);
        qa = std::move(qb);
        qb = std::move(rem);
    }
    ZPoly g = clear_denominators(qa);
    if (!g.empty() && g.back() < 0) {
        for (Int& c : g) c = -c;
    }
    return g;
}

ZPoly squarefree_part(const ZPoly& p) {
    ZPoly q = normalize(p);
    if (degree(q) <= 0) return q;
    ZPoly g = gcd_poly(q, derivative(q));
    if (degree(g) <= 0) return q;
    QPoly quot = q_quotient_exact(to_qpoly(q), to_qpoly(g));
    return clear_denominators(quot);
}

Rat cauchy_root_bound(const ZPoly& p) {
    ZPoly q = normalize(p);
    if (q.empty()) throw DomainError("root bound of the zero polynomial");
    Int lead = q.back();
    if (lead < 0) lead = -lead;
    Int top = 0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        Int mag = q[i];
        if (mag < 0) mag = -mag;
        if (mag > top) top = mag;
    }
    Rat ratio = Rat(top) / Rat(lead);
    Rat bound = ratio + 1;
    return bound;
}

int count_roots_in(const ZPoly& p, const Rat& a, const Rat& b) {
    ZPoly q = normalize(p);
    if (q.empty()) throw DomainError("root count of the zero polynomial");
    if (!(a < b)) return 0;
    if (sign_at(q, a) == 0)
        throw DomainError("root count requires a nonroot left endpoint");
    std::vector<ZPoly> chain = sturm_chain(q);
    return sign_variations(chain, a) - sign_variations(chain, b);
}

int count_positive_roots(const ZPoly& p) {
    ZPoly q = normalize(p);
    if (q.empty()) throw DomainError("root count of the zero polynomial");
    if (q.size() == 1) return 0;
    if (q.front() == 0)
        throw DomainError("positive root count requires a nonzero constant term");
    std::vector<ZPoly> chain = sturm_chain(q);
    Rat zero = 0;
    return sign_variations(chain, zero) - sign_variations_at_infinity(chain);
}

std::vector<Rat> positive_rational_roots(const ZPoly& p) {
    ZPoly q = normalize(p);
    if (q.empty()) throw DomainError("roots of the zero polynomial");
    // Strip any power of the variable; it only contributes the root 0.
    std::size_t shift = 0;
    while (shift < q.size() && q[shift] == 0) ++shift;
    ZPoly reduced(q.begin() + static_cast<std::ptrdiff_t>(shift), q.end());
    if (reduced.size() <= 1) return {};
    std::vector<Int> nums = positive_divisors(reduced.front());
    std::vector<Int> dens = positive_divisors(reduced.back());
    std::vector<Rat> roots;
    for (const Int& num : nums) {
        for (const Int& den : dens) {
            Rat candidate = make_rat(num, den);
            Rat value = eval_poly(reduced, candidate);
            if (value == 0) roots.push_back(candidate);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

PositiveRootIsolation isolate_positive_roots(const ZPoly& squarefree) {
    ZPoly q = normalize(squarefree);
    if (q.empty()) throw DomainError("root isolation of the zero polynomial");
    if (q.front() == 0)
        throw DomainError("root isolation requires a nonzero constant term");
    PositiveRootIsolation result;
    if (q.size() == 1) return result;
    std::vector<ZPoly> chain = sturm_chain(q);
    Rat zero = 0;
    auto count = [&](const Rat& a, const Rat& b) {
        return sign_variations(chain, a) - sign_variations(chain, b);
    };
    Rat bound = cauchy_root_bound(q);
    struct Segment {
        Rat lo, hi;
        int roots;
    };
    std::vector<Segment> stack;
    int total = count(zero, bound);
    if (total > 0) stack.push_back({zero, bound, total});
    while (!stack.empty()) {
        Segment seg = stack.back();
        stack.pop_back();
        if (seg.roots == 1) {
            if (sign_at(q, seg.hi) == 0) {
                result.exact_roots.push_back(seg.hi);
                continue;
            }
            Rat lo = seg.lo;
            if (lo == 0) {
                // Keep endpoints strictly positive: q(0) != 0, so the root is
                // bounded away from zero and halving terminates.
                Rat a = seg.hi / 2;
                while (count(zero, a) > 0) a /= 2;
                lo = a;
            }
            result.intervals.emplace_back(lo, seg.hi);
            continue;
        }
        Rat mid = (seg.lo + seg.hi) / 2;
        if (sign_at(q, mid) == 0) {
            result.exact_roots.push_back(mid);
            // Shrink around the known root so each half keeps nonroot
            // endpoints; a square-free polynomial has isolated roots, so a
            // small enough offset works.
            Rat radius = (seg.hi - seg.lo) / 4;
            while (sign_at(q, mid - radius) == 0 || sign_at(q, mid + radius) == 0)
                radius /= 2;
            Rat left_hi = mid - radius;
            Rat right_lo = mid + radius;
            int left = count(seg.lo, left_hi);
            if (left > 0) stack.push_back({seg.lo, left_hi, left});
            int right = count(right_lo, seg.hi);
            if (right > 0) stack.push_back({right_lo, seg.hi, right});
            continue;
        }
        int left = count(seg.lo, mid);
        if (left > 0) stack.push_back({seg.lo, mid, left});
        int right = seg.roots - left;
        if (right > 0) stack.push_back({mid, seg.hi, right});
    }
    auto by_left = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::sort(result.intervals.begin(), result.intervals.end(), by_left);
    std::sort(result.exact_roots.begin(), result.exact_roots.end());
    return result;
}

}  // namespace nwc

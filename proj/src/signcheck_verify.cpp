// Independent recheck of strict-sign certificates.  Everything here is
// written against the certificate's claims alone: the reduction identity is
// re-expanded term by term, and root counting uses its own rational-
// arithmetic variation count rather than the search module's machinery.

#include <optional>
#include <string>
#include <vector>

#include "nwc/polynomial.hpp"
#include "nwc/rational.hpp"
#include "nwc/signcheck.hpp"

namespace nwc {

namespace {

using QVec = std::vector<Rat>;  // ascending univariate coefficients

QVec trim_high(QVec p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

QVec derivative_of(const QVec& p) {
    QVec out;
    for (std::size_t i = 1; i < p.size(); ++i) {
        Rat c = p[i] * Rat(static_cast<long>(i));
        out.push_back(c);
    }
    return trim_high(std::move(out));
}

Rat value_at(const QVec& p, const Rat& x) {
    Rat acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        Rat next = acc * x + p[i];
        acc = next;
    }
    return acc;
}

QVec remainder_of(QVec a, const QVec& b) {
    a = trim_high(std::move(a));
    while (a.size() >= b.size() && !a.empty()) {
        Rat scale = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            Rat d = scale * b[i];
            a[shift + i] -= d;
        }
        a = trim_high(std::move(a));
    }
    return a;
}

// Distinct roots of p in (0, inf), requiring p(0) != 0, by counting sign
// variations of the classical remainder chain at 0 and at +infinity.
int distinct_positive_roots(const QVec& p) {
    std::vector<QVec> chain;
    chain.push_back(p);
    QVec d = derivative_of(p);
    if (!d.empty()) {
        chain.push_back(d);
        while (true) {
            QVec r = remainder_of(chain[chain.size() - 2], chain.back());
            if (r.empty()) break;
            for (Rat& c : r) c = -c;
            chain.push_back(std::move(r));
        }
    }
    Rat zero = 0;
    int at_zero = 0, at_inf = 0;
    int last = 0;
    for (const QVec& q : chain) {
        Rat v = value_at(q, zero);
        int s = sign_of(v);
        if (s == 0) continue;
        if (last != 0 && s != last) ++at_zero;
        last = s;
    }
    last = 0;
    for (const QVec& q : chain) {
        if (q.empty()) continue;
        int s = sign_of(q.back());
        if (s == 0) continue;
        if (last != 0 && s != last) ++at_inf;
        last = s;
    }
    return at_zero - at_inf;
}

}  // namespace

std::optional<std::string> verify_certificate(const Polynomial& f, const Certificate& c) {
    const int n = f.var_count();
    if (c.sign != 1 && c.sign != -1) return "certified sign must be +1 or -1";
    std::vector<int> sigma = c.sigma;
    if (sigma.empty()) sigma.assign(static_cast<std::size_t>(n), 1);
    if (static_cast<int>(sigma.size()) != n)
        return "orthant sign vector length does not match the variable count";
    for (int s : sigma) {
        if (s != 1 && s != -1) return "orthant sign vector entries must be +1 or -1";
    }
    // Reflect f into the claimed orthant independently of the search code.
    std::vector<ExponentVec> support = f.support();
    auto reflected_coeff = [&](const ExponentVec& alpha) {
        Rat coeff = f.coeff(alpha);
        int parity = 0;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            if (sigma[j] == -1) parity += alpha[j];
        }
        if (parity % 2 != 0) coeff = -coeff;
        return coeff;
    };
    switch (c.kind) {
        case Certificate::Kind::MonomialFace: {
            if (support.size() != 1) return "polynomial is not a single monomial";
            Rat coeff = reflected_coeff(support[0]);
            if (sign_of(coeff) != c.sign)
                return "monomial coefficient does not have the certified sign";
            return std::nullopt;
        }
        case Certificate::Kind::OrthantCoefficient: {
            if (support.empty()) return "polynomial has no terms";
            for (const ExponentVec& alpha : support) {
                Rat coeff = reflected_coeff(alpha);
                if (sign_of(coeff) != c.sign)
                    return "a coefficient does not have the certified sign";
            }
            return std::nullopt;
        }
        case Certificate::Kind::UnivariateSturm: {
            if (support.size() < 2) return "reduction certificate for a monomial";
            if (static_cast<int>(c.beta.size()) != n ||
                static_cast<int>(c.direction.size()) != n)
                return "reduction exponents do not match the variable count";
            if (c.reduced.empty()) return "reduced polynomial is empty";
            // Re-expand x^beta * u(x^w) and compare against f on this orthant.
            std::size_t pivot = c.direction.size();
            for (std::size_t j = 0; j < c.direction.size(); ++j) {
                if (c.direction[j] != 0) {
                    pivot = j;
                    break;
                }
            }
            if (pivot == c.direction.size()) return "direction vector is zero";
            std::vector<bool> matched(c.reduced.size(), false);
            std::optional<Rat> scale;  // f = scale * (x^beta u(x^w)) with scale > 0
            for (const ExponentVec& alpha : support) {
                Int offset = Int(alpha[pivot]) - Int(c.beta[pivot]);
                Int rem = offset % c.direction[pivot];
                if (rem != 0) return "a support point leaves the reduction line";
                Int k = offset / c.direction[pivot];
                if (k < 0 || k >= Int(static_cast<long>(c.reduced.size())))
                    return "a support point falls outside the reduced polynomial";
                for (int j = 0; j < n; ++j) {
                    Int expect = Int(c.beta[static_cast<std::size_t>(j)]) +
                                 k * c.direction[static_cast<std::size_t>(j)];
                    if (expect != alpha[static_cast<std::size_t>(j)])
                        return "a support point leaves the reduction line";
                }
                std::size_t ki = static_cast<std::size_t>(k.get_ui());
                if (c.reduced[ki] == 0)
                    return "a support point maps to a zero reduced coefficient";
                Rat coeff = reflected_coeff(alpha);
                Rat ratio = coeff / Rat(c.reduced[ki]);
                if (!scale) {
                    if (!(ratio > 0)) return "reduction scale is not positive";
                    scale = ratio;
                } else if (ratio != *scale) {
                    return "reduced coefficients are not proportional to the polynomial";
                }
                matched[ki] = true;
            }
            for (std::size_t ki = 0; ki < c.reduced.size(); ++ki) {
                if (c.reduced[ki] != 0 && !matched[ki])
                    return "the reduced polynomial has a coefficient with no matching term";
            }
            // Count distinct positive roots with this module's own chain.
            QVec u;
            for (const Int& coeff : c.reduced) u.push_back(Rat(coeff));
            u = trim_high(std::move(u));
            std::size_t low = 0;
            while (low < u.size() && u[low] == 0) ++low;
            QVec stripped(u.begin() + static_cast<std::ptrdiff_t>(low), u.end());
            if (stripped.empty()) return "reduced polynomial is zero";
            int nroots =
                stripped.size() == 1 ? 0 : distinct_positive_roots(stripped);
            if (nroots != c.positive_root_count)
                return "positive root count does not match the certificate";
            if (nroots != 0) return "certificate does not establish a strict sign";
            Rat one = 1;
            Rat u1 = value_at(stripped, one);
            if (sign_of(u1) != c.sign)
                return "reduced polynomial sign at 1 does not match the certified sign";
            return std::nullopt;
        }
    }
    return "unrecognized certificate kind";
}

}  // namespace nwc

#include "nwc/fourier_motzkin.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "nwc/errors.hpp"

namespace nwc {

namespace {

constexpr std::size_t kRowLimit = 100000;

struct Row {
    RatVec a;  // full width (nvars)
    Rat b;     // <a, x> >= b
};

// Scale so the coefficient vector is the primitive integer vector in its
// positive ray; the bound scales along.  Rows differing only in bound then
// collide in a map keyed by the coefficients, where the largest bound wins.
void normalize_row(Row& row, IntVec& key) {
    Int lcm(1);
    for (const Rat& x : row.a)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
    IntVec ints;
    ints.reserve(row.a.size());
    Int gcd(0);
    for (const Rat& x : row.a) {
        Rat scaled = x * Rat(lcm);
        ints.push_back(scaled.get_num());
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), ints.back().get_mpz_t());
    }
    if (gcd == 0) {  // all-zero coefficients; keep bound as-is
        key = ints;
        return;
    }
    Rat factor = make_rat(lcm, gcd);  // positive
    for (std::size_t i = 0; i < ints.size(); ++i) {
        ints[i] /= gcd;
        row.a[i] = Rat(ints[i]);
    }
    row.b *= factor;
    key = ints;
}

}  // namespace

std::optional<RatVec> find_feasible_point(int nvars,
                                          const std::vector<LinearConstraint>& constraints) {
    if (nvars < 0) throw DomainError("negative variable count");
    for (const LinearConstraint& c : constraints)
        if (static_cast<int>(c.coeffs.size()) != nvars)
            throw DomainError("constraint width does not match variable count");

    // --- Phase 1: eliminate equalities by substitution -----------------------
    RatMat eq;
    for (const LinearConstraint& c : constraints) {
        if (!c.is_equality) continue;
        RatVec row = c.coeffs;
        row.push_back(c.bound);
        eq.push_back(std::move(row));
    }
    std::vector<int> pivots;
    if (!eq.empty()) {
        rref(eq, &pivots);
        if (!pivots.empty() && pivots.back() == nvars) return std::nullopt;  // 0 = 1
    }
    std::vector<int> pivot_row(nvars, -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<int>(r);

    // Substitute x_p = eq[r][nvars] - sum_{free f} eq[r][f] x_f into a row.
    auto substitute = [&](const RatVec& coeffs, const Rat& bound) {
        Row out{RatVec(nvars, Rat(0)), bound};
        for (int j = 0; j < nvars; ++j) {
            if (coeffs[j] == 0) continue;
            int r = pivot_row[j];
            if (r < 0) {
                out.a[j] += coeffs[j];
                continue;
            }
            Rat shift = coeffs[j] * eq[r][nvars];
            out.b -= shift;
            for (int f = 0; f < nvars; ++f) {
                if (f == j || pivot_row[f] >= 0 || eq[r][f] == 0) continue;
                Rat delta = coeffs[j] * eq[r][f];
                out.a[f] -= delta;
            }
        }
        return out;
    };

    std::vector<Row> rows;
    for (const LinearConstraint& c : constraints) {
        if (c.is_equality) continue;
        rows.push_back(substitute(c.coeffs, c.bound));
    }

    // --- Phase 2: Fourier-Motzkin on the free variables ----------------------
    auto dedup = [](std::vector<Row>& rs) -> std::optional<bool> {
        std::map<IntVec, Row> best;
        for (Row& r : rs) {
            IntVec key;
            normalize_row(r, key);
            bool all_zero = true;
            for (const Int& k : key)
                if (k != 0) { all_zero = false; break; }
            if (all_zero) {
                if (r.b > 0) return std::nullopt;  // 0 >= positive: infeasible
                continue;
            }
            auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(std::move(key), std::move(r));
            } else if (r.b > it->second.b) {
                it->second = std::move(r);
            }
        }
        rs.clear();
        for (auto& [k, r] : best) rs.push_back(std::move(r));
        return true;
    };

    if (!dedup(rows)) return std::nullopt;

    std::vector<bool> active(nvars, false);
    for (int j = 0; j < nvars; ++j) active[j] = pivot_row[j] < 0;

    // Snapshots for back-substitution: (variable, constraint set before its
    // elimination).  Each snapshot's rows mention only that variable and
    // variables eliminated later, so values resolve in reverse order.
    std::vector<std::pair<int, std::vector<Row>>> trail;

    while (true) {
        // Pick the active variable minimizing the product of positive and
        // negative occurrence counts (deterministic tie-break: lowest index).
        int var = -1;
        std::size_t best_cost = 0;
        for (int j = 0; j < nvars; ++j) {
            if (!active[j]) continue;
            std::size_t pos = 0, neg = 0;
            for (const Row& r : rows) {
                if (r.a[j] > 0) ++pos;
                else if (r.a[j] < 0) ++neg;
            }
            std::size_t cost = pos * neg + pos + neg;
            if (var < 0 || cost < best_cost) {
                var = j;
                best_cost = cost;
            }
        }
        if (var < 0) break;
        active[var] = false;

        std::vector<Row> pos, neg, rest;
        for (Row& r : rows) {
            if (r.a[var] > 0) pos.push_back(std::move(r));
            else if (r.a[var] < 0) neg.push_back(std::move(r));
            else rest.push_back(std::move(r));
        }
        std::vector<Row> snapshot = pos;
        snapshot.insert(snapshot.end(), neg.begin(), neg.end());
        trail.emplace_back(var, std::move(snapshot));

        if (pos.size() * neg.size() + rest.size() > kRowLimit)
            throw ScaleLimitError("inequality elimination exceeded the row limit");
        std::vector<Row> next = std::move(rest);
        for (const Row& p : pos) {
            for (const Row& m : neg) {
                // coef_p > 0, coef_m < 0: (-coef_m) * p + coef_p * m drops var.
                Rat wp = -m.a[var];
                Rat wm = p.a[var];
                Row combined{RatVec(nvars, Rat(0)), Rat(0)};
                for (int j = 0; j < nvars; ++j) {
                    if (p.a[j] == 0 && m.a[j] == 0) continue;
                    Rat value = wp * p.a[j] + wm * m.a[j];
                    combined.a[j] = value;
                }
                Rat bound = wp * p.b + wm * m.b;
                combined.b = bound;
                next.push_back(std::move(combined));
            }
        }
        rows = std::move(next);
        if (!dedup(rows)) return std::nullopt;
    }

    // --- Phase 3: reconstruct a point ----------------------------------------
    RatVec x(nvars, Rat(0));
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
        int var = it->first;
        bool have_lo = false, have_hi = false;
        Rat lo(0), hi(0);
        for (const Row& r : it->second) {
            Rat rest = r.b;
            for (int j = 0; j < nvars; ++j) {
                if (j == var || r.a[j] == 0) continue;
                Rat used = r.a[j] * x[j];
                rest -= used;
            }
            Rat bound = rest / r.a[var];
            if (r.a[var] > 0) {  // x_var >= bound
                if (!have_lo || bound > lo) lo = bound;
                have_lo = true;
            } else {  // x_var <= bound
                if (!have_hi || bound < hi) hi = bound;
                have_hi = true;
            }
        }
        if (have_lo && have_hi) {
            Rat mid = (lo + hi) / 2;
            x[var] = mid;
        } else if (have_lo) {
            Rat up = lo + 1;
            x[var] = up;
        } else if (have_hi) {
            Rat dn = hi - 1;
            x[var] = dn;
        }
    }
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        int p = pivots[r];
        Rat value = eq[r][nvars];
        for (int f = 0; f < nvars; ++f) {
            if (pivot_row[f] >= 0 || eq[r][f] == 0) continue;
            Rat used = eq[r][f] * x[f];
            value -= used;
        }
        x[p] = value;
    }

    // --- Phase 4: exact re-check against the original system -----------------
    for (const LinearConstraint& c : constraints) {
        Rat lhs = dot(c.coeffs, x);
        bool ok = c.is_equality ? lhs == c.bound : lhs >= c.bound;
        if (!ok) throw std::logic_error("feasible point failed verification");
    }
    return x;
}

}  // namespace nwc

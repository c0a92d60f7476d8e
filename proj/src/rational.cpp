#include "nwc/rational.hpp"

#include <cctype>
#include <utility>
#include <cstdlib>

namespace nwc {

Rat rat_from_string(const std::string& text) {
    if (text.empty()) throw DomainError("empty rational literal");
    std::size_t slash = text.find('/');
    std::size_t dot = text.find('.');
    if (slash != std::string::npos && dot != std::string::npos)
        throw DomainError("rational literal mixes '/' and '.': " + text);

    auto check_integer = [&](const std::string& s, bool allow_sign) {
        if (s.empty()) throw DomainError("bad rational literal: " + text);
        std::size_t i = 0;
        if (allow_sign && (s[0] == '+' || s[0] == '-')) i = 1;
        if (i == s.size()) throw DomainError("bad rational literal: " + text);
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw DomainError("bad rational literal: " + text);
    };

    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        check_integer(num, true);
        check_integer(den, false);
        return make_rat(Int(num, 10), Int(den, 10));
    }
    if (dot != std::string::npos) {
        std::string head = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        if (!head.empty() && (head[0] == '+' || head[0] == '-')) head = head.substr(1);
        if (head.empty() && frac.empty())
            throw DomainError("bad rational literal: " + text);
        if (head.empty()) head = "0";
        check_integer(head, false);
        if (!frac.empty()) check_integer(frac, false);
        Int scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Int digits(head + frac, 10);  // explicit base: default base 0 reads "025" as octal
        Rat r = make_rat(digits, scale);
        return neg ? Rat(-r) : r;
    }
    check_integer(text, true);
    Rat r{Int(text, 10)};
    return r;
}

Rat rationalize(double value, long max_denominator) {
    if (!std::isfinite(value)) throw DomainError("rationalize: non-finite value");
    if (max_denominator < 1) throw DomainError("rationalize: max_denominator < 1");

    // Doubles convert to rationals exactly, so the whole computation is an
    // exact continued-fraction expansion of that rational.
    Rat x(value);
    bool neg = x < 0;
    if (neg) x = -x;

    Int bound(max_denominator);
    Int h_prev(0), h_curr(1);  // numerators  h_{-2}, h_{-1}
    Int k_prev(1), k_curr(0);  // denominators k_{-2}, k_{-1}
    Int num = x.get_num(), den = x.get_den();
    while (den != 0) {
        Int a, rem;
        mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        Int k_next = a * k_curr + k_prev;
        if (k_next > bound) {
            // Best semiconvergent still under the bound, if any; compare its
            // error against the last full convergent exactly.
            Int t = (bound - k_prev) / k_curr;
            if (t > 0) {
                Rat cand = make_rat(t * h_curr + h_prev, t * k_curr + k_prev);
                Rat best = make_rat(h_curr, k_curr);
                if (abs(x - cand) < abs(x - best)) {
                    return neg ? Rat(-cand) : cand;
                }
            }
            break;
        }
        // Note: gmpxx operator expressions are lazy; materialize into a named
        // Int before shuffling operands.
        Int h_next = a * h_curr + h_prev;
        h_prev = h_curr; h_curr = h_next;
        k_prev = k_curr; k_curr = k_next;
        num = den; den = rem;
    }
    if (k_curr == 0) return Rat(0);
    Rat r = make_rat(h_curr, k_curr);
    return neg ? Rat(-r) : r;
}

}  // namespace nwc

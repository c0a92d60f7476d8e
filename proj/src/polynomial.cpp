#include "nwc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "nwc/errors.hpp"

namespace nwc {

namespace {

// Graded-lex: compare total degree first, then the exponent tuple
// lexicographically.  Printing and serialization list terms in descending
// graded-lex order so output is canonical.
bool graded_lex_less(const ExponentVec& a, const ExponentVec& b) {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

constexpr std::size_t kParseExpansionLimit = 100000;
constexpr long kMaxExponent = 1000000;

}  // namespace

Polynomial::Polynomial(int var_count) : n_(var_count) {
    if (var_count < 1) throw DomainError("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(int var_count, const Rat& value) {
    Polynomial p(var_count);
    p.add_term(ExponentVec(var_count, 0), value);
    return p;
}

Polynomial Polynomial::monomial(const ExponentVec& alpha, const Rat& coeff) {
    Polynomial p(static_cast<int>(alpha.size()));
    p.add_term(alpha, coeff);
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

void Polynomial::add_term(const ExponentVec& alpha, const Rat& coeff) {
    if (static_cast<int>(alpha.size()) != n_)
        throw DomainError("exponent vector length does not match variable count");
    for (int e : alpha)
        if (e < 0) throw DomainError("negative exponent in polynomial term");
    if (coeff == 0) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(alpha, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

Rat Polynomial::coeff(const ExponentVec& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Rat(0) : it->second;
}

std::vector<ExponentVec> Polynomial::support() const {
    std::vector<ExponentVec> s;
    s.reserve(terms_.size());
    for (const auto& [alpha, c] : terms_) s.push_back(alpha);
    return s;
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [alpha, c] : terms_) d = std::max(d, total_degree(alpha));
    return d;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(n_);
    for (const auto& [alpha, c] : terms_) r.terms_.emplace(alpha, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    if (n_ != rhs.n_) throw DomainError("variable count mismatch in +");
    Polynomial r = *this;
    for (const auto& [alpha, c] : rhs.terms_) r.add_term(alpha, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    if (n_ != rhs.n_) throw DomainError("variable count mismatch in -");
    Polynomial r = *this;
    for (const auto& [alpha, c] : rhs.terms_) r.add_term(alpha, Rat(-c));
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (n_ != rhs.n_) throw DomainError("variable count mismatch in *");
    Polynomial r(n_);
    ExponentVec sum(n_);
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : rhs.terms_) {
            for (int j = 0; j < n_; ++j) sum[j] = a[j] + b[j];
            r.add_term(sum, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::scaled(const Rat& c) const {
    Polynomial r(n_);
    if (c == 0) return r;
    for (const auto& [alpha, a] : terms_) r.terms_.emplace(alpha, a * c);
    return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result = Polynomial::constant(n_, Rat(1));
    Polynomial base = *this;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

Rat Polynomial::evaluate(const std::vector<Rat>& point) const {
    if (static_cast<int>(point.size()) != n_)
        throw DomainError("evaluation point length does not match variable count");
    // Power tables per variable, up to the largest exponent that occurs.
    std::vector<int> max_exp(n_, 0);
    for (const auto& [alpha, c] : terms_)
        for (int j = 0; j < n_; ++j) max_exp[j] = std::max(max_exp[j], alpha[j]);
    std::vector<std::vector<Rat>> powers(n_);
    for (int j = 0; j < n_; ++j) {
        powers[j].resize(max_exp[j] + 1);
        powers[j][0] = Rat(1);
        for (int e = 1; e <= max_exp[j]; ++e) powers[j][e] = powers[j][e - 1] * point[j];
    }
    Rat acc(0);
    for (const auto& [alpha, c] : terms_) {
        Rat v = c;
        for (int j = 0; j < n_; ++j)
            if (alpha[j] > 0) v *= powers[j][alpha[j]];
        acc += v;
    }
    return acc;
}

// --- parser ------------------------------------------------------------------

namespace {

enum class Tok { Number, Var, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string digits;  // Number: literal digits; Var: variable index digits
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= text_.size()) {
            current_ = {Tok::End, start, {}};
            return;
        }
        char c = text_[i_];
        switch (c) {
            case '+': ++i_; current_ = {Tok::Plus, start, {}}; return;
            case '-': ++i_; current_ = {Tok::Minus, start, {}}; return;
            case '*': ++i_; current_ = {Tok::Star, start, {}}; return;
            case '/': ++i_; current_ = {Tok::Slash, start, {}}; return;
            case '^': ++i_; current_ = {Tok::Caret, start, {}}; return;
            case '(': ++i_; current_ = {Tok::LParen, start, {}}; return;
            case ')': ++i_; current_ = {Tok::RParen, start, {}}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            current_ = {Tok::Number, start, text_.substr(i_, j - i_)};
            i_ = j;
            return;
        }
        if (c == 'x') {
            std::size_t j = i_ + 1;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            if (j == i_ + 1) throw ParseError(start, "expected variable index after 'x'");
            current_ = {Tok::Var, start, text_.substr(i_ + 1, j - i_ - 1)};
            i_ = j;
            return;
        }
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, int var_count) : lex_(text), n_(var_count) {
        if (var_count < 1) throw DomainError("variable count must be positive");
    }

    Polynomial run() {
        Polynomial p = parse_expr();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) throw ParseError(t.pos, "unexpected trailing input");
        return p;
    }

private:
    Polynomial parse_expr() {
        bool negate = false;
        if (lex_.peek().kind == Tok::Plus) {
            lex_.take();
        } else if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            negate = true;
        }
        Polynomial acc = parse_term();
        if (negate) acc = -acc;
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                acc = acc + parse_term();
            } else if (k == Tok::Minus) {
                lex_.take();
                acc = acc - parse_term();
            } else {
                return acc;
            }
        }
    }

    Polynomial parse_term() {
        Polynomial acc = parse_factor();
        while (lex_.peek().kind == Tok::Star) {
            std::size_t pos = lex_.take().pos;
            Polynomial rhs = parse_factor();
            if (acc.term_count() * rhs.term_count() > kParseExpansionLimit)
                throw ParseError(pos, "product expansion exceeds the term limit");
            acc = acc * rhs;
        }
        return acc;
    }

    Polynomial parse_factor() {
        Polynomial base = parse_base();
        if (lex_.peek().kind != Tok::Caret) return base;
        std::size_t caret = lex_.take().pos;
        const Token& t = lex_.peek();
        if (t.kind == Tok::Minus)
            throw ParseError(t.pos, "exponents must be nonnegative integers");
        if (t.kind != Tok::Number) throw ParseError(t.pos, "expected integer exponent");
        long e = to_long(lex_.take(), "exponent");
        // Repeated-squaring with the same expansion guard as '*'.
        double estimated = 1.0;
        for (long i = 0; i < std::min(e, 64L); ++i) {
            estimated *= static_cast<double>(base.term_count());
            if (estimated > static_cast<double>(kParseExpansionLimit))
                throw ParseError(caret, "power expansion exceeds the term limit");
        }
        return base.pow(static_cast<unsigned>(e));
    }

    Polynomial parse_base() {
        Token t = lex_.peek();
        // Signed literal directly in base position, e.g. "2*-3".
        bool negate = false;
        if (t.kind == Tok::Plus || t.kind == Tok::Minus) {
            lex_.take();
            negate = t.kind == Tok::Minus;
            Token num = lex_.peek();
            if (num.kind != Tok::Number)
                throw ParseError(num.pos, "expected number after sign");
            Rat v = parse_rational();
            return Polynomial::constant(n_, negate ? Rat(-v) : v);
        }
        if (t.kind == Tok::Number) {
            return Polynomial::constant(n_, parse_rational());
        }
        if (t.kind == Tok::Var) {
            lex_.take();
            long idx = to_long(t, "variable index");
            if (idx == 0) throw ParseError(t.pos, "variable indices start at x1");
            if (idx > n_)
                throw ParseError(t.pos, "variable x" + t.digits + " exceeds the variable count " +
                                            std::to_string(n_));
            ExponentVec alpha(n_, 0);
            alpha[idx - 1] = 1;
            return Polynomial::monomial(alpha, Rat(1));
        }
        if (t.kind == Tok::LParen) {
            lex_.take();
            Polynomial inner = parse_expr();
            const Token& close = lex_.peek();
            if (close.kind != Tok::RParen) throw ParseError(close.pos, "expected ')'");
            lex_.take();
            return inner;
        }
        throw ParseError(t.pos, "expected a number, variable, or '('");
    }

    // A Number token, optionally followed by '/' uint.
    Rat parse_rational() {
        Token num = lex_.take();
        Int p(num.digits, 10);  // explicit base: default base 0 reads "025" as octal
        if (lex_.peek().kind != Tok::Slash) return Rat(p);
        lex_.take();
        const Token& den = lex_.peek();
        if (den.kind != Tok::Number) throw ParseError(den.pos, "expected denominator");
        Token d = lex_.take();
        Int q(d.digits, 10);
        if (q == 0) throw ParseError(d.pos, "zero denominator");
        return make_rat(p, q);
    }

    long to_long(const Token& t, const char* what) {
        if (t.digits.size() > 7)
            throw ParseError(t.pos, std::string(what) + " is too large");
        long v = std::stol(t.digits);
        if (v > kMaxExponent) throw ParseError(t.pos, std::string(what) + " is too large");
        return v;
    }

    Lexer lex_;
    int n_;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, int var_count) {
    return Parser(text, var_count).run();
}

int scan_max_var_index(const std::string& text) {
    int best = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] != 'x' || !std::isdigit(static_cast<unsigned char>(text[i + 1]))) continue;
        std::size_t j = i + 1;
        long idx = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) &&
               idx < 10000000) {
            idx = idx * 10 + (text[j] - '0');
            ++j;
        }
        best = std::max(best, static_cast<int>(idx));
        i = j - 1;
    }
    return best;
}

std::string to_string(const Polynomial& f) {
    if (f.is_zero()) return "0";
    std::vector<const std::pair<const ExponentVec, Rat>*> order;
    for (const auto& term : f.terms()) order.push_back(&term);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
        return graded_lex_less(b->first, a->first);  // descending
    });

    std::ostringstream out;
    bool first = true;
    for (auto* term : order) {
        const ExponentVec& alpha = term->first;
        Rat c = term->second;
        bool negative = c < 0;
        Rat mag = negative ? Rat(-c) : c;
        if (first) {
            if (negative) out << '-';
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        std::vector<std::string> factors;
        if (mag != 1 || total_degree(alpha) == 0) factors.push_back(rat_to_string(mag));
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            if (alpha[j] == 0) continue;
            std::string v = "x" + std::to_string(j + 1);
            if (alpha[j] > 1) v += "^" + std::to_string(alpha[j]);
            factors.push_back(v);
        }
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k > 0) out << '*';
            out << factors[k];
        }
    }
    return out.str();
}

nlohmann::ordered_json polynomial_to_json(const Polynomial& f) {
    nlohmann::ordered_json j;
    j["n"] = f.var_count();
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    std::vector<const std::pair<const ExponentVec, Rat>*> order;
    for (const auto& term : f.terms()) order.push_back(&term);
    std::sort(order.begin(), order.end(),
              [](auto* a, auto* b) { return graded_lex_less(b->first, a->first); });
    for (auto* term : order) {
        nlohmann::ordered_json t;
        t["alpha"] = term->first;
        t["coeff"] = rat_to_string(term->second);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
        throw DomainError("polynomial JSON needs {\"n\", \"terms\"}");
    if (!j["n"].is_number_integer())
        throw DomainError("polynomial JSON: \"n\" must be an integer");
    int n = j["n"].get<int>();
    Polynomial f(n);
    for (const auto& t : j["terms"]) {
        if (!t.contains("alpha") || !t.contains("coeff"))
            throw DomainError("polynomial JSON: each term needs \"alpha\" and \"coeff\"");
        ExponentVec alpha = t["alpha"].get<ExponentVec>();
        Rat c = t["coeff"].is_string() ? rat_from_string(t["coeff"].get<std::string>())
                                       : make_rat(t["coeff"].get<long>());
        f.add_term(alpha, c);
    }
    return f;
}

Polynomial restrict_to_subspace(const Polynomial& f, SubspaceMask vars) {
    if (vars.n != f.var_count())
        throw DomainError("subspace mask variable count does not match the polynomial");
    Polynomial r(f.var_count());
    for (const auto& [alpha, c] : f.terms()) {
        bool inside = true;
        for (int j = 0; j < f.var_count(); ++j) {
            if (alpha[j] > 0 && !vars.contains(j + 1)) {
                inside = false;
                break;
            }
        }
        if (inside) r.add_term(alpha, c);
    }
    return r;
}

std::vector<Polynomial> partial_derivatives(const Polynomial& f) {
    std::vector<Polynomial> out;
    out.reserve(f.var_count());
    for (int j = 0; j < f.var_count(); ++j) {
        Polynomial d(f.var_count());
        for (const auto& [alpha, c] : f.terms()) {
            if (alpha[j] == 0) continue;
            ExponentVec beta = alpha;
            beta[j] -= 1;
            d.add_term(beta, c * alpha[j]);
        }
        out.push_back(std::move(d));
    }
    return out;
}

Rat coeff_norm(const Polynomial& f) {
    if (f.is_zero()) throw DomainError("coefficient norm of the zero polynomial");
    Rat best(0);
    for (const auto& [alpha, c] : f.terms()) {
        Rat a = abs(c);
        if (a > best) best = a;
    }
    return best;
}

// --- Laurent polynomials / monomial curves ------------------------------------

long LaurentPoly::min_exponent() const {
    if (terms_.empty()) throw DomainError("min exponent of the zero Laurent polynomial");
    return terms_.begin()->first;
}

long LaurentPoly::max_exponent() const {
    if (terms_.empty()) throw DomainError("max exponent of the zero Laurent polynomial");
    return terms_.rbegin()->first;
}

Rat LaurentPoly::coeff(long e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
}

void LaurentPoly::add_term(long e, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rat LaurentPoly::evaluate(const Rat& t) const {
    if (t == 0) throw DomainError("Laurent polynomial evaluated at zero");
    Rat acc(0);
    for (const auto& [e, c] : terms_) acc += c * pow_rat(t, e);
    return acc;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        bool negative = c < 0;
        Rat mag = negative ? Rat(-c) : c;
        if (first) {
            if (negative) out << '-';
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        if (mag != 1 || e == 0) out << rat_to_string(mag);
        if (e != 0) {
            if (mag != 1) out << '*';
            out << 't';
            if (e != 1) out << '^' << e;
        }
    }
    return out.str();
}

MonomialCurve make_monomial_curve(const Polynomial& f,
                                  const std::vector<Rat>& base_point,
                                  const std::vector<Rat>& direction) {
    int n = f.var_count();
    if (static_cast<int>(base_point.size()) != n || static_cast<int>(direction.size()) != n)
        throw DomainError("curve base point / direction length does not match the polynomial");
    if (f.is_zero()) throw DomainError("monomial curve valuation of the zero polynomial");
    for (const Rat& b : base_point)
        if (b == 0) throw DomainError("curve base point has a zero coordinate");

    Int lcm(1);
    for (const Rat& q : direction)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());

    MonomialCurve curve;
    curve.base = base_point;
    curve.exponents.resize(n);
    if (!lcm.fits_slong_p()) throw ScaleLimitError("curve direction denominators too large");
    curve.multiplier = lcm.get_si();
    for (int j = 0; j < n; ++j) {
        Rat scaled = direction[j] * Rat(lcm);
        Int num = scaled.get_num();  // denominator is 1 by construction
        if (!num.fits_slong_p()) throw ScaleLimitError("curve exponent too large");
        curve.exponents[j] = num.get_si();
    }
    bool have = false;
    long d = 0;
    for (const auto& [alpha, c] : f.terms()) {
        long v = 0;
        for (int j = 0; j < n; ++j) v += curve.exponents[j] * alpha[j];
        if (!have || v < d) d = v;
        have = true;
    }
    curve.valuation = d;
    return curve;
}

LaurentPoly substitute_monomial_curve(const Polynomial& f, const MonomialCurve& curve) {
    int n = f.var_count();
    if (static_cast<int>(curve.base.size()) != n)
        throw DomainError("curve dimension does not match the polynomial");
    LaurentPoly out;
    for (const auto& [alpha, c] : f.terms()) {
        Rat v = c;
        long e = 0;
        for (int j = 0; j < n; ++j) {
            if (alpha[j] != 0) v *= pow_rat(curve.base[j], alpha[j]);
            e += curve.exponents[j] * alpha[j];
        }
        out.add_term(e, v);
    }
    return out;
}

Polynomial semialgebraic_to_zero_set(const std::vector<Polynomial>& equations,
                                     const std::vector<Polynomial>& inequalities) {
    if (equations.empty() && inequalities.empty())
        throw DomainError("semialgebraic system needs at least one constraint");
    int n = equations.empty() ? inequalities.front().var_count()
                              : equations.front().var_count();
    for (const Polynomial& g : equations)
        if (g.var_count() != n) throw DomainError("mixed variable counts in semialgebraic system");
    for (const Polynomial& h : inequalities)
        if (h.var_count() != n) throw DomainError("mixed variable counts in semialgebraic system");

    int m = static_cast<int>(inequalities.size());
    int total = n + m;
    auto embed = [&](const Polynomial& p) {
        Polynomial q(total);
        for (const auto& [alpha, c] : p.terms()) {
            ExponentVec padded = alpha;
            padded.resize(total, 0);
            q.add_term(padded, c);
        }
        return q;
    };

    Polynomial acc(total);
    for (const Polynomial& g : equations) {
        Polynomial e = embed(g);
        acc = acc + e * e;
    }
    for (int j = 0; j < m; ++j) {
        ExponentVec slack(total, 0);
        slack[n + j] = 2;
        Polynomial diff = embed(inequalities[j]) - Polynomial::monomial(slack, Rat(1));
        acc = acc + diff * diff;
    }
    return acc;
}

}  // namespace nwc

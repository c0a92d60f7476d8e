#include "nwc/kernels.hpp"

namespace nwc {

DoublePoly DoublePoly::compile(const Polynomial& f) {
    DoublePoly p;
    p.n = f.var_count();
    p.term_count = f.term_count();
    p.coeffs.reserve(p.term_count);
    p.exponents.reserve(p.term_count * static_cast<std::size_t>(p.n));
    for (const auto& [alpha, coeff] : f.terms()) {
        p.coeffs.push_back(rat_to_double(coeff));
        p.exponents.insert(p.exponents.end(), alpha.begin(), alpha.end());
    }
    return p;
}

DoublePoly DoublePoly::magnitude() const {
    DoublePoly m = *this;
    for (double& c : m.coeffs) c = c < 0.0 ? -c : c;
    return m;
}

namespace detail {

void eval_range_reference(const DoublePoly& p, const double* xs, std::size_t count,
                          std::size_t begin, std::size_t end, double* out) {
    const int n = p.n;
    for (std::size_t i = begin; i < end; ++i) {
        double acc = 0.0;
        const int* e = p.exponents.data();
        for (std::size_t t = 0; t < p.term_count; ++t, e += n) {
            double m = p.coeffs[t];
            for (int j = 0; j < n; ++j) {
                const double xj = xs[static_cast<std::size_t>(j) * count + i];
                for (int k = 0; k < e[j]; ++k) m *= xj;
            }
            acc += m;
        }
        out[i] = acc;
    }
}

}  // namespace detail

void eval_batch_scalar(const DoublePoly& p, const double* xs, std::size_t count,
                       double* out) {
    detail::eval_range_reference(p, xs, count, 0, count, out);
}

double eval_single(const DoublePoly& p, const double* x) {
    double result;
    detail::eval_range_reference(p, x, 1, 0, 1, &result);
    return result;
}

}  // namespace nwc

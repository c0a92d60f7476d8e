// NEON lane of the batch evaluator (AArch64, where NEON is baseline).  Two
// points advance in lockstep through the reference multiply/add sequence;
// vmulq/vaddq are plain IEEE operations, so results are bitwise identical
// to the scalar kernel.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "nwc/kernels.hpp"

namespace nwc {

void eval_batch_neon(const DoublePoly& p, const double* xs, std::size_t count,
                     double* out) {
    const int n = p.n;
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        const int* e = p.exponents.data();
        for (std::size_t t = 0; t < p.term_count; ++t, e += n) {
            float64x2_t m = vdupq_n_f64(p.coeffs[t]);
            for (int j = 0; j < n; ++j) {
                const float64x2_t xj =
                    vld1q_f64(xs + static_cast<std::size_t>(j) * count + i);
                for (int k = 0; k < e[j]; ++k) m = vmulq_f64(m, xj);
            }
            acc = vaddq_f64(acc, m);
        }
        vst1q_f64(out + i, acc);
    }
    detail::eval_range_reference(p, xs, count, i, count, out);
}

}  // namespace nwc

#endif

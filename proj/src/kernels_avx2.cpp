// AVX2 lane of the batch evaluator.  This translation unit alone is built
// with -mavx2; callers reach it through select_eval_kernel(), which checks
// CPU support at runtime.  The multiply/add sequence per point is exactly
// the one in eval_range_reference -- four points advance in lockstep, no
// FMA, no reassociation -- so results match the scalar kernel bit for bit.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "nwc/kernels.hpp"

namespace nwc {

void eval_batch_avx2(const DoublePoly& p, const double* xs, std::size_t count,
                     double* out) {
    const int n = p.n;
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        const int* e = p.exponents.data();
        for (std::size_t t = 0; t < p.term_count; ++t, e += n) {
            __m256d m = _mm256_set1_pd(p.coeffs[t]);
            for (int j = 0; j < n; ++j) {
                const __m256d xj =
                    _mm256_loadu_pd(xs + static_cast<std::size_t>(j) * count + i);
                for (int k = 0; k < e[j]; ++k) m = _mm256_mul_pd(m, xj);
            }
            acc = _mm256_add_pd(acc, m);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    detail::eval_range_reference(p, xs, count, i, count, out);
}

}  // namespace nwc

#endif

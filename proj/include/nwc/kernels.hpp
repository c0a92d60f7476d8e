#pragma once

// Batch double-precision evaluation of sparse polynomials, for the numeric
// probes (sphere scans, sign-change bisection, minimum tracking) where exact
// rational arithmetic would be needlessly slow.  A Polynomial is compiled
// once into a flat structure-of-arrays form; batches of points are then fed
// through either a scalar reference kernel or a SIMD variant picked at
// runtime.  Every variant performs the same floating-point operations in the
// same order per point, and the build disables FP contraction, so all lanes
// return bitwise-identical results -- the equivalence tests assert exactly
// that, and probe output never depends on which machine ran it.

#include <cstddef>
#include <vector>

#include "nwc/polynomial.hpp"

namespace nwc {

// Evaluation form of a polynomial: term t contributes
//   coeffs[t] * prod_j x_j^exponents[t*n + j].
struct DoublePoly {
    int n = 0;
    std::size_t term_count = 0;
    std::vector<double> coeffs;     // term_count entries
    std::vector<int> exponents;     // term_count * n entries, row-major

    static DoublePoly compile(const Polynomial& f);

    // Same exponents with coefficients replaced by their absolute values;
    // evaluated at (|x_1|, ..., |x_n|) it bounds |f(x)| term by term.
    DoublePoly magnitude() const;
};

// Point batches are coordinate-major: xs[j*count + i] holds coordinate j of
// point i, so each SIMD lane loads consecutive points of one coordinate.
using BatchEvalFn = void (*)(const DoublePoly& p, const double* xs,
                             std::size_t count, double* out);

void eval_batch_scalar(const DoublePoly& p, const double* xs, std::size_t count,
                       double* out);
#if defined(__x86_64__) || defined(_M_X64)
void eval_batch_avx2(const DoublePoly& p, const double* xs, std::size_t count,
                     double* out);
#endif
#if defined(__aarch64__)
void eval_batch_neon(const DoublePoly& p, const double* xs, std::size_t count,
                     double* out);
#endif

// Best kernel available on this machine (detection runs once) and its name
// ("scalar", "avx2", "neon").
BatchEvalFn select_eval_kernel();
const char* eval_kernel_name();

// One point, reference operation order; out-of-line so probes can use it for
// single evaluations without building a batch.
double eval_single(const DoublePoly& p, const double* x);

namespace detail {
// Reference evaluation of points [begin, end) out of a batch of `count`
// (the stride of xs).  This function *defines* the operation order all
// kernels must reproduce; SIMD variants use it for their tail points.
void eval_range_reference(const DoublePoly& p, const double* xs, std::size_t count,
                          std::size_t begin, std::size_t end, double* out);
}  // namespace detail

}  // namespace nwc

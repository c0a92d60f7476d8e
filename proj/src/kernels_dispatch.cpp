#include "nwc/kernels.hpp"

namespace nwc {

namespace {

struct KernelChoice {
    BatchEvalFn fn;
    const char* name;
};

KernelChoice detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return {eval_batch_avx2, "avx2"};
#elif defined(__aarch64__)
    return {eval_batch_neon, "neon"};
#endif
    return {eval_batch_scalar, "scalar"};
}

const KernelChoice& chosen() {
    static const KernelChoice choice = detect();
    return choice;
}

}  // namespace

BatchEvalFn select_eval_kernel() { return chosen().fn; }

const char* eval_kernel_name() { return chosen().name; }

}  // namespace nwc

#include "kernels_impl.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace shgal::simd {
namespace {

inline float64x2_t ipow2(float64x2_t x, unsigned e) {
    float64x2_t result = vdupq_n_f64(1.0);
    float64x2_t base = x;
    while (e != 0) {
        if (e & 1u) result = vmulq_f64(result, base);
        e >>= 1u;
        if (e != 0) base = vmulq_f64(base, base);
    }
    return result;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_sum_squares_neon(const double* w, const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xv = vld1q_f64(x + i);
        acc = vfmaq_f64(acc, vld1q_f64(w + i), vmulq_f64(xv, xv));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += w[i] * (x[i] * x[i]);
    return s;
}

void power_neon(const double* x, double* out, std::size_t n, unsigned exponent) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, ipow2(vld1q_f64(x + i), exponent));
    for (; i < n; ++i) out[i] = detail::ipow(x[i], exponent);
}

double sum_power_neon(const double* x, std::size_t n, unsigned exponent) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, ipow2(vld1q_f64(x + i), exponent));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += detail::ipow(x[i], exponent);
    return s;
}

void axpby_neon(double alpha, const double* x, double beta, const double* y, double* out,
                std::size_t n) {
    const float64x2_t av = vdupq_n_f64(alpha);
    const float64x2_t bv = vdupq_n_f64(beta);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i,
                  vaddq_f64(vmulq_f64(av, vld1q_f64(x + i)), vmulq_f64(bv, vld1q_f64(y + i))));
    for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void multiply_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

namespace detail {
const KernelTable* neon_table_if_compiled() {
    static const KernelTable table{
        "neon",         dot_neon,   weighted_sum_squares_neon, power_neon,
        sum_power_neon, axpby_neon, multiply_neon,
    };
    return &table;
}
}  // namespace detail

}  // namespace shgal::simd

#else

namespace shgal::simd::detail {
const KernelTable* neon_table_if_compiled() { return nullptr; }
}  // namespace shgal::simd::detail

#endif

#include "kernels_impl.hpp"

#if defined(SHGAL_HAVE_AVX2)

#include <immintrin.h>

namespace shgal::simd {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline __m256d ipow4(__m256d x, unsigned e) {
    __m256d result = _mm256_set1_pd(1.0);
    __m256d base = x;
    while (e != 0) {
        if (e & 1u) result = _mm256_mul_pd(result, base);
        e >>= 1u;
        if (e != 0) base = _mm256_mul_pd(base, base);
    }
    return result;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_sum_squares_avx2(const double* w, const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(xv, xv), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * (x[i] * x[i]);
    return s;
}

void power_avx2(const double* x, double* out, std::size_t n, unsigned exponent) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, ipow4(_mm256_loadu_pd(x + i), exponent));
    for (; i < n; ++i) out[i] = detail::ipow(x[i], exponent);
}

double sum_power_avx2(const double* x, std::size_t n, unsigned exponent) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, ipow4(_mm256_loadu_pd(x + i), exponent));
    double s = hsum(acc);
    for (; i < n; ++i) s += detail::ipow(x[i], exponent);
    return s;
}

void axpby_avx2(double alpha, const double* x, double beta, const double* y, double* out,
                std::size_t n) {
    const __m256d av = _mm256_set1_pd(alpha);
    const __m256d bv = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // Separate mul/add keeps lanes bitwise equal to the scalar kernel.
        __m256d ax = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
        __m256d by = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
    }
    for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void multiply_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_compiled() {
    static const KernelTable table{
        "avx2",         dot_avx2,   weighted_sum_squares_avx2, power_avx2,
        sum_power_avx2, axpby_avx2, multiply_avx2,
    };
    return &table;
}
}  // namespace detail

}  // namespace shgal::simd

#else

namespace shgal::simd::detail {
const KernelTable* avx2_table_if_compiled() { return nullptr; }
}  // namespace shgal::simd::detail

#endif

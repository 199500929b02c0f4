#include "kernels_impl.hpp"

namespace shgal::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_sum_squares_scalar(const double* w, const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * (x[i] * x[i]);
    return s;
}

void power_scalar(const double* x, double* out, std::size_t n, unsigned exponent) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::ipow(x[i], exponent);
}

double sum_power_scalar(const double* x, std::size_t n, unsigned exponent) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += detail::ipow(x[i], exponent);
    return s;
}

void axpby_scalar(double alpha, const double* x, double beta, const double* y, double* out,
                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",         dot_scalar,   weighted_sum_squares_scalar, power_scalar,
        sum_power_scalar, axpby_scalar, multiply_scalar,
    };
    return table;
}

}  // namespace shgal::simd

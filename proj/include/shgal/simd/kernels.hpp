#pragma once

// Data-parallel inner loops used by the transforms, norms and time steppers.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (AVX2+FMA on x86-64, NEON on AArch64) are compiled when the toolchain
// supports them and picked at runtime by active_kernels(). Elementwise
// kernels (power, multiply, axpby) are bitwise identical across variants;
// reductions (dot, sums) agree to rounding only, since lane-wise partial
// sums change the summation order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace shgal::simd {

struct KernelTable {
    std::string_view name;

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i w[i] * x[i]^2
    double (*weighted_sum_squares)(const double* w, const double* x, std::size_t n);
    // out[i] = x[i]^exponent, by repeated squaring
    void (*power)(const double* x, double* out, std::size_t n, unsigned exponent);
    // sum_i x[i]^exponent
    double (*sum_power)(const double* x, std::size_t n, unsigned exponent);
    // out[i] = alpha * x[i] + beta * y[i]
    void (*axpby)(double alpha, const double* x, double beta, const double* y, double* out,
                  std::size_t n);
    // out[i] = a[i] * b[i]
    void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best available table. The choice is made once per process; setting the
// environment variable SHGAL_SIMD=scalar forces the reference kernels.
const KernelTable& active_kernels();

// All tables usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// Convenience wrappers over active_kernels() for span arguments.
double dot(std::span<const double> a, std::span<const double> b);
double weighted_sum_squares(std::span<const double> w, std::span<const double> x);

}  // namespace shgal::simd

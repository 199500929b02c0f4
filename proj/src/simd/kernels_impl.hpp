#pragma once

#include "shgal/simd/kernels.hpp"

namespace shgal::simd::detail {

// Square-and-multiply in a fixed operation order. The vector variants
// replay exactly this sequence per lane so results match bit for bit.
inline double ipow(double x, unsigned e) {
    double result = 1.0;
    double base = x;
    while (e != 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e != 0) base *= base;
    }
    return result;
}

const KernelTable* avx2_table_if_compiled();
const KernelTable* neon_table_if_compiled();

}  // namespace shgal::simd::detail

#include <cassert>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace shgal::simd {

const KernelTable* avx2_kernels() {
#if defined(SHGAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? detail::avx2_table_if_compiled() : nullptr;
#else
    return detail::avx2_table_if_compiled();
#endif
}

const KernelTable* neon_kernels() { return detail::neon_table_if_compiled(); }

const KernelTable& active_kernels() {
    static const KernelTable& chosen = []() -> const KernelTable& {
        if (const char* forced = std::getenv("SHGAL_SIMD");
            forced != nullptr && std::string_view(forced) == "scalar")
            return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        if (const KernelTable* t = neon_kernels()) return *t;
        return scalar_kernels();
    }();
    return chosen;
}

std::vector<const KernelTable*> available_kernels() {
    std::vector<const KernelTable*> tables{&scalar_kernels()};
    if (const KernelTable* t = avx2_kernels()) tables.push_back(t);
    if (const KernelTable* t = neon_kernels()) tables.push_back(t);
    return tables;
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active_kernels().dot(a.data(), b.data(), a.size());
}

double weighted_sum_squares(std::span<const double> w, std::span<const double> x) {
    assert(w.size() == x.size());
    return active_kernels().weighted_sum_squares(w.data(), x.data(), x.size());
}

}  // namespace shgal::simd

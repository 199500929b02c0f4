#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "shgal/simd/kernels.hpp"

using namespace shgal::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.5, double hi = 1.5) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels against hand values") {
    const KernelTable& k = scalar_kernels();
    const std::vector<double> a{1.0, 2.0, 3.0}, b{4.0, -5.0, 6.0};
    CHECK(k.dot(a.data(), b.data(), 3) == 12.0);
    CHECK(k.weighted_sum_squares(a.data(), b.data(), 3) == 16.0 + 50.0 + 108.0);
    std::vector<double> out(3);
    k.power(b.data(), out.data(), 3, 3);
    CHECK(out == std::vector<double>{64.0, -125.0, 216.0});
    CHECK(k.sum_power(a.data(), 3, 4) == 1.0 + 16.0 + 81.0);
    k.axpby(2.0, a.data(), -1.0, b.data(), out.data(), 3);
    CHECK(out == std::vector<double>{-2.0, 9.0, 0.0});
    k.multiply(a.data(), b.data(), out.data(), 3);
    CHECK(out == std::vector<double>{4.0, -10.0, 18.0});
    k.power(a.data(), out.data(), 3, 0);
    CHECK(out == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(k.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("every available kernel table matches the scalar reference") {
    const KernelTable& ref = scalar_kernels();
    const auto tables = available_kernels();
    REQUIRE(!tables.empty());
    CHECK(tables.front() == &ref);
    std::mt19937_64 rng(7);
    for (const KernelTable* t : tables) {
        CAPTURE(t->name);
        for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 65u, 257u, 1000u}) {
            CAPTURE(n);
            const auto x = random_vector(n, rng), y = random_vector(n, rng);
            const auto w = random_vector(n, rng, 0.0, 100.0);

            double scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);
            CHECK(std::abs(t->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <=
                  1e-15 * (scale + 1.0) * 4);
            const double wss = ref.weighted_sum_squares(w.data(), x.data(), n);
            CHECK(std::abs(t->weighted_sum_squares(w.data(), x.data(), n) - wss) <= 1e-14 * (wss + 1.0));

            for (unsigned e : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 11u}) {
                std::vector<double> p1(n), p2(n);
                ref.power(x.data(), p1.data(), n, e);
                t->power(x.data(), p2.data(), n, e);
                CHECK(bitwise_equal(p1, p2));
                double abs_sum = 0.0;
                for (double v : p1) abs_sum += std::abs(v);
                CHECK(std::abs(t->sum_power(x.data(), n, e) - ref.sum_power(x.data(), n, e)) <=
                      1e-14 * (abs_sum + 1.0));
            }

            std::vector<double> o1(n), o2(n);
            ref.axpby(0.3, x.data(), -1.7, y.data(), o1.data(), n);
            t->axpby(0.3, x.data(), -1.7, y.data(), o2.data(), n);
            CHECK(bitwise_equal(o1, o2));
            ref.multiply(x.data(), y.data(), o1.data(), n);
            t->multiply(x.data(), y.data(), o2.data(), n);
            CHECK(bitwise_equal(o1, o2));
        }
    }
}

TEST_CASE("in-place elementwise kernels") {
    std::mt19937_64 rng(11);
    for (const KernelTable* t : available_kernels()) {
        CAPTURE(t->name);
        auto x = random_vector(37, rng);
        const auto y = random_vector(37, rng);
        auto expected = x;
        scalar_kernels().axpby(2.0, x.data(), 0.5, y.data(), expected.data(), x.size());
        t->axpby(2.0, x.data(), 0.5, y.data(), x.data(), x.size());
        CHECK(bitwise_equal(x, expected));
    }
}

TEST_CASE("active table is one of the available tables") {
    const KernelTable& active = active_kernels();
    bool found = false;
    for (const KernelTable* t : available_kernels()) found = found || t == &active;
    CHECK(found);
    const std::vector<double> a{1.0, 2.0}, b{3.0, 4.0};
    CHECK(dot(a, b) == 11.0);
    CHECK(weighted_sum_squares(a, b) == 9.0 + 32.0);
}

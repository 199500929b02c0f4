#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shgal/oracle.hpp"
#include "shgal/random.hpp"
#include "shgal/spectral.hpp"

using namespace shgal;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

// ∫₀^π f by composite Gauss-Legendre, independent of the sine grid
template <class F>
double fine_integral(F f, double length = kPi, int panels = 200) {
    const GaussLegendre g = gauss_legendre(16);
    double sum = 0.0;
    const double h = length / panels;
    for (int p = 0; p < panels; ++p)
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            sum += 0.5 * h * g.weights[i] * f(h * (p + 0.5 * (g.nodes[i] + 1.0)));
    return sum;
}

double e(int j, double x, double length = kPi) {
    return std::sqrt(2.0 / length) * std::sin(j * kPi * x / length);
}

}  // namespace

TEST_CASE("eigenvalues") {
    const EigenData d1 = build_eigendata(DomainSpec::interval(kPi), 3);
    CHECK(d1.mu[0] == Approx(1.0).epsilon(1e-15));
    CHECK(d1.alpha[0] == Approx(3.0).epsilon(1e-15));
    CHECK(d1.mu[1] == Approx(4.0).epsilon(1e-15));
    CHECK(d1.alpha[1] == Approx(24.0).epsilon(1e-15));
    const EigenData d2 = build_eigendata(DomainSpec::rectangle(kPi, kPi), 3);
    CHECK(d2.mu[flat_index(ModeIndex::of(1, 1), 3)] == Approx(2.0).epsilon(1e-15));
    CHECK(d2.alpha[flat_index(ModeIndex::of(1, 1), 3)] == Approx(8.0).epsilon(1e-15));

    const EigenData d = build_eigendata(DomainSpec::rectangle(1.0, 2.5), 6);
    for (std::size_t f = 0; f < d.mu.size(); ++f) {
        CHECK(d.mu[f] > 0.0);
        CHECK(d.alpha[f] == Approx(d.mu[f] * d.mu[f] + 2.0 * d.mu[f]));
        const ModeIndex m = mode_at(f, 2, 6);
        if (m.j[0] < 6) CHECK(d.alpha[flat_index(ModeIndex::of(m.j[0] + 1, m.j[1]), 6)] > d.alpha[f]);
        if (m.j[1] < 6) CHECK(d.alpha[flat_index(ModeIndex::of(m.j[0], m.j[1] + 1), 6)] > d.alpha[f]);
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS(DomainSpec::interval(-1.0).validate());
    CHECK_THROWS(DomainSpec::interval(0.0).validate());
    DomainSpec bad = DomainSpec::interval(1.0);
    bad.dimension = 3;
    CHECK_THROWS(bad.validate());
    CHECK_NOTHROW(DomainSpec::rectangle(1.0, 2.0).validate());
}

TEST_CASE("mode indexing round trip") {
    for (int k : {1, 3, 7}) {
        CHECK(mode_count(1, k) == static_cast<std::size_t>(k));
        CHECK(mode_count(2, k) == static_cast<std::size_t>(k * k));
        for (std::size_t f = 0; f < mode_count(2, k); ++f) CHECK(flat_index(mode_at(f, 2, k), k) == f);
    }
    CHECK(flat_index(ModeIndex::of(2, 3), 4) == 1 * 4 + 2);
}

TEST_CASE("to_grid evaluates the orthonormal sine basis") {
    const DomainSpec dom = DomainSpec::interval(kPi);
    // odd M puts a node at π/2
    const Collocation grid(dom, 1, 3, 2);
    const GridField f = to_grid(SpectralState::unit_mode(1, 1, ModeIndex::of(1)), grid);
    CHECK(grid.node(0, 1) == Approx(kPi / 2));
    CHECK(f.values[1] == Approx(std::sqrt(2.0 / kPi)).epsilon(1e-15));

    const Collocation g4(dom, 4, 8, 2);
    const GridField z = to_grid(SpectralState::zero(1, 4), g4);
    for (double v : z.values) CHECK(v == 0.0);

    // 2D product basis
    const DomainSpec rect = DomainSpec::rectangle(1.0, 2.0);
    const Collocation g2(rect, 3, 6, 2);
    const GridField f2 = to_grid(SpectralState::unit_mode(2, 3, ModeIndex::of(2, 3)), g2);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(f2.values[i * 6 + j] ==
                  Approx(e(2, g2.node(0, i), 1.0) * e(3, g2.node(1, j), 2.0)).epsilon(1e-13));
}

TEST_CASE("grid too coarse is a dealiasing error") {
    const DomainSpec dom = DomainSpec::interval(kPi);
    CHECK_THROWS_AS(Collocation(dom, 8, 15, 2), DealiasingError);
    CHECK_NOTHROW(Collocation(dom, 8, 16, 2));
    const Collocation grid = Collocation::for_level(dom, 4, 2);
    CHECK(grid.points() == 8);
    // ∫u^4 needs degree 4k = 16 <= 2M+1 = 17
    CHECK_NOTHROW(power_integral(SpectralState::unit_mode(1, 4, ModeIndex::of(1)), 4, grid));
    CHECK_THROWS_AS(power_integral(SpectralState::unit_mode(1, 4, ModeIndex::of(1)), 6, grid),
                    DealiasingError);
}

TEST_CASE("from_grid recovers sampled basis functions and e1 cubed") {
    const DomainSpec dom = DomainSpec::interval(kPi);
    const Collocation grid(dom, 6, 24, 4);
    GridField f{1, grid.points(), std::vector<double>(grid.points())};
    for (int m = 0; m < grid.points(); ++m) f.values[m] = e(2, grid.node(0, m));
    const SpectralState c = from_grid(f, grid);
    for (std::size_t j = 0; j < c.size(); ++j) CHECK(c[j] == Approx(j == 1 ? 1.0 : 0.0).epsilon(1e-14));

    for (int m = 0; m < grid.points(); ++m) f.values[m] = std::pow(e(1, grid.node(0, m)), 3);
    const SpectralState cube = from_grid(f, grid);
    // oracle: fine quadrature of <e1^3, e_j>
    for (int j = 1; j <= 6; ++j) {
        const double oracle = fine_integral([&](double x) { return std::pow(e(1, x), 3) * e(j, x); });
        CHECK(cube[j - 1] == Approx(oracle).epsilon(1e-13));
    }
    CHECK(cube[0] == Approx(3.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(cube[2] == Approx(-1.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(std::abs(cube[1]) < 1e-15);

    GridField zero{1, grid.points(), std::vector<double>(grid.points(), 0.0)};
    const SpectralState z = from_grid(zero, grid);
    for (std::size_t j = 0; j < z.size(); ++j) CHECK(z[j] == 0.0);
}

TEST_CASE("transform round trip up to k = 64") {
    Rng rng(3);
    for (int dim : {1, 2}) {
        const DomainSpec dom = dim == 1 ? DomainSpec::interval(kPi) : DomainSpec::rectangle(1.0, 3.0);
        for (int k : {1, 2, 5, 16, 33, 64}) {
            if (dim == 2 && k > 33) continue;
            for (int factor : {2, 4, 6}) {
                const Collocation grid = Collocation::for_level(dom, k, factor);
                const SpectralState u = random_state(dim, k, rng);
                const SpectralState back = from_grid(to_grid(u, grid), grid);
                double err = 0.0;
                for (std::size_t j = 0; j < u.size(); ++j) err = std::max(err, std::abs(back[j] - u[j]));
                CAPTURE(dim);
                CAPTURE(k);
                CHECK(err <= 1e-12);
            }
        }
    }
}

TEST_CASE("norms") {
    const EigenData eig = build_eigendata(DomainSpec::interval(kPi), 4);
    const Norms n1 = norms(SpectralState::unit_mode(1, 4, ModeIndex::of(1)), eig);
    CHECK(n1.l2 == Approx(1.0));
    CHECK(n1.h10 * n1.h10 == Approx(1.0));
    CHECK(n1.h20 * n1.h20 == Approx(1.0));
    CHECK(n1.v * n1.v == Approx(4.0));

    const Norms z = norms(SpectralState::zero(1, 4), eig);
    CHECK(z.l2 == 0.0);
    CHECK(z.h10 == 0.0);
    CHECK(z.h20 == 0.0);
    CHECK(z.v == 0.0);

    SpectralState mix(1, 4);
    mix.at(ModeIndex::of(1)) = 1.0 / std::sqrt(2.0);
    mix.at(ModeIndex::of(2)) = 1.0 / std::sqrt(2.0);
    const Norms m = norms(mix, eig);
    CHECK(m.l2 == Approx(1.0));
    CHECK(m.h10 * m.h10 == Approx(2.5));
    CHECK(m.h20 * m.h20 == Approx(8.5));
    CHECK(m.v * m.v == Approx(14.5));
}

TEST_CASE("V-norm identity and Parseval on random states") {
    Rng rng(5);
    for (int dim : {1, 2}) {
        const DomainSpec dom = dim == 1 ? DomainSpec::interval(2.0) : DomainSpec::rectangle(kPi, 1.5);
        for (int k : {1, 4, 12}) {
            const EigenData eig = build_eigendata(dom, k);
            const Collocation grid = Collocation::for_level(dom, k, 2);
            for (int s = 0; s < 20; ++s) {
                const SpectralState u = random_state(dim, k, rng);
                const Norms n = norms(u, eig);
                CHECK(n.v * n.v == Approx(n.l2 * n.l2 + 2 * n.h10 * n.h10 + n.h20 * n.h20).epsilon(1e-15));
                CHECK(std::abs(lp_norm(u, 2, grid) - n.l2) <= 1e-12 * std::max(1.0, n.l2));
            }
        }
    }
}

TEST_CASE("lp norms of e1") {
    const DomainSpec dom = DomainSpec::interval(kPi);
    const Collocation grid = Collocation::for_level(dom, 3, 4);
    const SpectralState e1 = SpectralState::unit_mode(1, 3, ModeIndex::of(1));
    CHECK(lp_norm(e1, 2, grid) == Approx(1.0).epsilon(1e-14));
    const double oracle4 = fine_integral([](double x) { return std::pow(e(1, x), 4); });
    CHECK(oracle4 == Approx(3.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK(lp_norm(e1, 4, grid) == Approx(std::pow(3.0 / (2.0 * kPi), 0.25)).epsilon(1e-14));
    CHECK(lp_norm(SpectralState::zero(1, 3), 4, grid) == 0.0);
}

TEST_CASE("power integral agrees with fine quadrature") {
    Rng rng(9);
    const DomainSpec dom = DomainSpec::interval(kPi);
    for (int k : {2, 5}) {
        const Collocation grid = Collocation::for_level(dom, k, 6);
        const SpectralState u = random_state(1, k, rng);
        auto field = [&](double x) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += u[j - 1] * e(j, x);
            return s;
        };
        for (int p : {2, 4, 6}) {
            const double oracle = fine_integral([&](double x) { return std::pow(field(x), p); });
            CHECK(power_integral(u, p, grid) == Approx(oracle).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral Laplacian against second-order finite differences") {
    // |∇u|² from centered differences converges at O(h²) to h10²
    const DomainSpec dom = DomainSpec::interval(kPi);
    const SpectralState u = exponential_profile(1, 5, 0.7);
    const EigenData eig = build_eigendata(dom, 5);
    const double exact = norms(u, eig).h10 * norms(u, eig).h10;
    auto field = [&](double x) {
        double s = 0.0;
        for (int j = 1; j <= 5; ++j) s += u[j - 1] * e(j, x);
        return s;
    };
    double prev_err = 0.0;
    for (int points : {200, 400, 800}) {
        const double h = kPi / points;
        double sum = 0.0;
        for (int i = 0; i < points; ++i) {
            const double d = (field((i + 1) * h) - field(i * h)) / h;
            sum += d * d * h;
        }
        const double err = std::abs(sum - exact);
        if (prev_err > 0.0) CHECK(prev_err / err == Approx(4.0).epsilon(0.05));
        prev_err = err;
    }
}

TEST_CASE("state helpers") {
    SpectralState u(1, 3, {1.0, 2.0, 3.0});
    CHECK(inner(u, u) == 14.0);
    CHECK(l2_norm(scaled(u, 2.0)) == Approx(2.0 * std::sqrt(14.0)));
    const SpectralState up = change_level(u, 5);
    CHECK(up.size() == 5);
    CHECK(up[2] == 3.0);
    CHECK(up[4] == 0.0);
    const SpectralState down = change_level(u, 2);
    CHECK(down.size() == 2);
    CHECK(down[1] == 2.0);
    SpectralState u2(2, 2, {1.0, 2.0, 3.0, 4.0});
    const SpectralState u2up = change_level(u2, 4);
    CHECK(u2up.at(ModeIndex::of(2, 1)) == 3.0);
    CHECK(u2up.at(ModeIndex::of(2, 2)) == 4.0);
    CHECK(u2up.at(ModeIndex::of(3, 1)) == 0.0);
    SpectralState bad(1, 2, {1.0, std::nan("")});
    CHECK(!bad.all_finite());
}

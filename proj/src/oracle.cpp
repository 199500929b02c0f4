#include "shgal/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shgal {

GaussLegendre gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("Gauss-Legendre needs at least one point");
    GaussLegendre rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const int q = points;
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int m = 2; m <= q; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            if (q == 1) p0 = 1.0;
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int m = 2; m <= q; ++m) {
            const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
            p0 = p1;
            p1 = p2;
        }
        if (q == 1) p0 = 1.0;
        dp = q * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[q - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    return rule;
}

DenseOracle::DenseOracle(const DomainSpec& domain, int level, int n, int quad_points)
    : domain_(domain), level_(level), n_(n), quad_points_(quad_points),
      eigen_(build_eigendata(domain, level)) {
    if (n < 1) throw std::invalid_argument("oracle exponent n must be >= 1");
    if (quad_points < 4 * n * level)
        throw std::invalid_argument("oracle quadrature needs >= 4 * n * k points per axis");
    const GaussLegendre rule = gauss_legendre(quad_points);
    const auto k = static_cast<std::size_t>(level);
    const auto q = static_cast<std::size_t>(quad_points);
    for (int axis = 0; axis < domain.dimension; ++axis) {
        const double length = domain.lengths[axis];
        const double amp = std::sqrt(2.0 / length);
        x_[axis].resize(q);
        w_[axis].resize(q);
        sin_[axis].resize(q * k);
        dcos_[axis].resize(q * k);
        mu_axis_[axis].resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            const double wave = static_cast<double>(j + 1) * std::numbers::pi / length;
            mu_axis_[axis][j] = wave * wave;
        }
        for (std::size_t i = 0; i < q; ++i) {
            const double x = 0.5 * length * (rule.nodes[i] + 1.0);
            x_[axis][i] = x;
            w_[axis][i] = 0.5 * length * rule.weights[i];
            for (std::size_t j = 0; j < k; ++j) {
                const double wave = static_cast<double>(j + 1) * std::numbers::pi / length;
                sin_[axis][i * k + j] = amp * std::sin(wave * x);
                dcos_[axis][i * k + j] = amp * wave * std::cos(wave * x);
            }
        }
    }
}

DenseOracle::NodalFields DenseOracle::evaluate(const SpectralState& u) const {
    const auto k = static_cast<std::size_t>(level_);
    const auto q = static_cast<std::size_t>(quad_points_);
    NodalFields f;
    if (domain_.dimension == 1) {
        f.u.assign(q, 0.0);
        f.ux.assign(q, 0.0);
        f.lap.assign(q, 0.0);
        f.bilap.assign(q, 0.0);
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                const double mu = mu_axis_[0][j];
                const double s = sin_[0][i * k + j];
                f.u[i] += u[j] * s;
                f.ux[i] += u[j] * dcos_[0][i * k + j];
                f.lap[i] -= mu * u[j] * s;
                f.bilap[i] += mu * mu * u[j] * s;
            }
        }
        return f;
    }
    const std::size_t nodes = q * q;
    f.u.assign(nodes, 0.0);
    f.ux.assign(nodes, 0.0);
    f.uy.assign(nodes, 0.0);
    f.lap.assign(nodes, 0.0);
    f.bilap.assign(nodes, 0.0);
    for (std::size_t i1 = 0; i1 < q; ++i1) {
        for (std::size_t i2 = 0; i2 < q; ++i2) {
            const std::size_t node = i1 * q + i2;
            for (std::size_t j1 = 0; j1 < k; ++j1) {
                const double s1 = sin_[0][i1 * k + j1];
                const double d1 = dcos_[0][i1 * k + j1];
                for (std::size_t j2 = 0; j2 < k; ++j2) {
                    const double c = u[j1 * k + j2];
                    const double s2 = sin_[1][i2 * k + j2];
                    const double d2 = dcos_[1][i2 * k + j2];
                    const double mu = mu_axis_[0][j1] + mu_axis_[1][j2];
                    f.u[node] += c * s1 * s2;
                    f.ux[node] += c * d1 * s2;
                    f.uy[node] += c * s1 * d2;
                    f.lap[node] -= mu * c * s1 * s2;
                    f.bilap[node] += mu * mu * c * s1 * s2;
                }
            }
        }
    }
    return f;
}

SpectralState DenseOracle::project(const std::vector<double>& values) const {
    const auto k = static_cast<std::size_t>(level_);
    const auto q = static_cast<std::size_t>(quad_points_);
    SpectralState out(domain_.dimension, level_);
    if (domain_.dimension == 1) {
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < q; ++i) s += w_[0][i] * values[i] * sin_[0][i * k + j];
            out[j] = s;
        }
        return out;
    }
    for (std::size_t j1 = 0; j1 < k; ++j1) {
        for (std::size_t j2 = 0; j2 < k; ++j2) {
            double s = 0.0;
            for (std::size_t i1 = 0; i1 < q; ++i1)
                for (std::size_t i2 = 0; i2 < q; ++i2)
                    s += w_[0][i1] * w_[1][i2] * values[i1 * q + i2] * sin_[0][i1 * k + j1] *
                         sin_[1][i2 * k + j2];
            out[j1 * k + j2] = s;
        }
    }
    return out;
}

DenseOracle::Integrals DenseOracle::integrals(const SpectralState& u) const {
    const NodalFields f = evaluate(u);
    const auto q = static_cast<std::size_t>(quad_points_);
    Integrals out{0.0, 0.0, 0.0, 0.0};
    for (std::size_t node = 0; node < f.u.size(); ++node) {
        const double w = domain_.dimension == 1 ? w_[0][node] : w_[0][node / q] * w_[1][node % q];
        const double grad_sq =
            f.ux[node] * f.ux[node] + (domain_.dimension == 2 ? f.uy[node] * f.uy[node] : 0.0);
        out.l2_sq += w * f.u[node] * f.u[node];
        out.grad_sq += w * grad_sq;
        out.lap_sq += w * f.lap[node] * f.lap[node];
        out.power_2n += w * std::pow(f.u[node], 2 * n_);
    }
    return out;
}

SpectralState DenseOracle::rhs(const SpectralState& u, const ModelParams& params) const {
    if (u.level() != level_ || u.dimension() != domain_.dimension)
        throw std::invalid_argument("oracle state does not match its level/dimension");
    if (params.n != n_) throw std::invalid_argument("oracle built for a different exponent n");
    const NodalFields f = evaluate(u);
    double coefficient = -params.a;
    if (params.mode == Mode::constrained) {
        const Integrals in = integrals(u);
        coefficient = in.lap_sq + 2.0 * in.grad_sq + in.power_2n;
    }
    std::vector<double> g(f.u.size());
    for (std::size_t node = 0; node < g.size(); ++node)
        g[node] = -f.bilap[node] + 2.0 * f.lap[node] + coefficient * f.u[node] -
                  std::pow(f.u[node], 2 * n_ - 1);
    return project(g);
}

SpectralState dense_rhs_oracle(const SpectralState& u, const ModelParams& params,
                               const DomainSpec& domain, int quad_points) {
    return DenseOracle(domain, u.level(), params.n, quad_points).rhs(u, params);
}

Trajectory reference_trajectory(const SpectralState& u0, const SolverConfig& config,
                                const ModelParams& params, const GalerkinSpace& space) {
    if (space.level > 8)
        throw std::invalid_argument("reference trajectories are limited to level <= 8");
    config.validate(params);
    const DenseOracle oracle(space.domain, space.level, params.n,
                             DenseOracle::default_points(space.level, params.n));
    const FieldFunction field = [&](const SpectralState& x) { return oracle.rhs(x, params); };

    auto diagnose = [&](const SpectralState& state, double t) {
        const DenseOracle::Integrals in = oracle.integrals(state);
        Diagnostics d;
        d.time = t;
        d.l2 = std::sqrt(in.l2_sq);
        d.h10 = std::sqrt(in.grad_sq);
        d.h20 = std::sqrt(in.lap_sq);
        d.v = std::sqrt(in.l2_sq + 2.0 * in.grad_sq + in.lap_sq);
        d.l2n = in.power_2n <= 0.0 ? 0.0 : std::pow(in.power_2n, 1.0 / (2.0 * params.n));
        d.psi = 0.5 * d.v * d.v + in.power_2n / (2.0 * params.n);
        d.manifold_residual = std::abs(in.l2_sq - 1.0);
        d.dudt_l2 = l2_norm(field(state));
        return d;
    };

    Trajectory traj;
    SpectralState u = init_galerkin(u0, space.level);
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.diagnostics.push_back(diagnose(u, t));
    };
    record(0.0);

    AdaptiveOptions options;
    options.rtol = options.atol = config.reference_tolerance;
    const double ratio = config.t_end / config.dt;
    long n_steps = std::lround(ratio);
    if (std::abs(static_cast<double>(n_steps) - ratio) > 1e-9 * std::max(1.0, ratio))
        n_steps = static_cast<long>(std::ceil(ratio));
    double h = 0.0;
    double t = 0.0;
    for (long i = 1; i <= n_steps; ++i) {
        const double t_next = i == n_steps ? config.t_end : static_cast<double>(i) * config.dt;
        adaptive_advance(field, u, t, t_next, h, options);
        if (!u.all_finite())
            throw DivergenceError("reference trajectory became non-finite", t, std::move(traj));
        t = t_next;
        traj.steps_taken = static_cast<int>(i);
        if (i % config.record_stride == 0 || i == n_steps) record(t);
    }
    return traj;
}

}  // namespace shgal

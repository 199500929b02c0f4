#include "shgal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shgal/simd/kernels.hpp"

namespace shgal {

DomainSpec DomainSpec::interval(double length) {
    DomainSpec d;
    d.dimension = 1;
    d.lengths = {length, 1.0};
    d.validate();
    return d;
}

DomainSpec DomainSpec::rectangle(double length_x, double length_y) {
    DomainSpec d;
    d.dimension = 2;
    d.lengths = {length_x, length_y};
    d.validate();
    return d;
}

void DomainSpec::validate() const {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("domain dimension must be 1 or 2, got " +
                                    std::to_string(dimension));
    for (int i = 0; i < dimension; ++i)
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw std::invalid_argument("domain lengths must be positive and finite");
}

double DomainSpec::measure() const {
    return dimension == 1 ? lengths[0] : lengths[0] * lengths[1];
}

std::size_t mode_count(int dimension, int level) {
    const auto k = static_cast<std::size_t>(level);
    return dimension == 1 ? k : k * k;
}

std::size_t flat_index(const ModeIndex& mode, int level) {
    if (mode.j[0] < 1 || mode.j[0] > level || (mode.dimension == 2 && (mode.j[1] < 1 || mode.j[1] > level)))
        throw std::out_of_range("mode index outside level " + std::to_string(level));
    if (mode.dimension == 1) return static_cast<std::size_t>(mode.j[0] - 1);
    return static_cast<std::size_t>(mode.j[0] - 1) * static_cast<std::size_t>(level) +
           static_cast<std::size_t>(mode.j[1] - 1);
}

ModeIndex mode_at(std::size_t flat, int dimension, int level) {
    if (dimension == 1) return ModeIndex::of(static_cast<int>(flat) + 1);
    const auto k = static_cast<std::size_t>(level);
    return ModeIndex::of(static_cast<int>(flat / k) + 1, static_cast<int>(flat % k) + 1);
}

// ---------------------------------------------------------------------------
// SpectralState

SpectralState::SpectralState(int dimension, int level)
    : dimension_(dimension), level_(level), coeffs_(mode_count(dimension, level), 0.0) {
    if (level < 1) throw std::invalid_argument("Galerkin level must be >= 1");
    if (dimension != 1 && dimension != 2) throw std::invalid_argument("dimension must be 1 or 2");
}

SpectralState::SpectralState(int dimension, int level, std::vector<double> coeffs)
    : SpectralState(dimension, level) {
    if (coeffs.size() != coeffs_.size())
        throw std::invalid_argument("coefficient count does not match level");
    coeffs_ = std::move(coeffs);
}

SpectralState SpectralState::unit_mode(int dimension, int level, const ModeIndex& mode) {
    SpectralState s(dimension, level);
    s.at(mode) = 1.0;
    return s;
}

bool SpectralState::all_finite() const {
    for (double c : coeffs_)
        if (!std::isfinite(c)) return false;
    return true;
}

namespace {
void require_compatible(const SpectralState& a, const SpectralState& b) {
    if (a.dimension() != b.dimension() || a.level() != b.level())
        throw std::invalid_argument("spectral states live in different Galerkin spaces");
}
}  // namespace

double inner(const SpectralState& a, const SpectralState& b) {
    require_compatible(a, b);
    return simd::dot(a.coeffs(), b.coeffs());
}

double l2_norm(const SpectralState& u) { return std::sqrt(inner(u, u)); }

SpectralState scaled(const SpectralState& u, double factor) {
    SpectralState out = u;
    for (double& c : out.coeffs()) c *= factor;
    return out;
}

SpectralState combine(double alpha, const SpectralState& x, double beta, const SpectralState& y) {
    require_compatible(x, y);
    SpectralState out(x.dimension(), x.level());
    simd::active_kernels().axpby(alpha, x.coeffs().data(), beta, y.coeffs().data(),
                                 out.coeffs().data(), x.size());
    return out;
}

SpectralState change_level(const SpectralState& u, int level) {
    SpectralState out(u.dimension(), level);
    const int common = std::min(level, u.level());
    if (u.dimension() == 1) {
        for (int j = 1; j <= common; ++j) out.at(ModeIndex::of(j)) = u.at(ModeIndex::of(j));
    } else {
        for (int j1 = 1; j1 <= common; ++j1)
            for (int j2 = 1; j2 <= common; ++j2)
                out.at(ModeIndex::of(j1, j2)) = u.at(ModeIndex::of(j1, j2));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Eigendata

EigenData build_eigendata(const DomainSpec& domain, int level) {
    domain.validate();
    if (level < 1) throw std::invalid_argument("Galerkin level must be >= 1");
    EigenData e;
    e.dimension = domain.dimension;
    e.level = level;
    const std::size_t count = mode_count(domain.dimension, level);
    e.mu.resize(count);
    e.alpha.resize(count);
    for (std::size_t f = 0; f < count; ++f) {
        const ModeIndex mode = mode_at(f, domain.dimension, level);
        double mu = 0.0;
        for (int i = 0; i < domain.dimension; ++i) {
            const double w = mode.j[i] * std::numbers::pi / domain.lengths[i];
            mu += w * w;
        }
        e.mu[f] = mu;
        e.alpha[f] = mu * mu + 2.0 * mu;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Collocation

Collocation::Collocation(const DomainSpec& domain, int level, int points, int dealias_factor)
    : domain_(domain), level_(level), points_(points), dealias_factor_(dealias_factor) {
    domain_.validate();
    if (level < 1) throw std::invalid_argument("Galerkin level must be >= 1");
    if (dealias_factor < 1) throw std::invalid_argument("dealias factor must be >= 1");
    if (points < dealias_factor * level)
        throw DealiasingError("collocation grid of " + std::to_string(points) +
                              " points is below dealias_factor*k = " +
                              std::to_string(dealias_factor * level));
    const auto k = static_cast<std::size_t>(level);
    const auto m_count = static_cast<std::size_t>(points);
    for (int axis = 0; axis < domain_.dimension; ++axis) {
        const double length = domain_.lengths[axis];
        const double norm = std::sqrt(2.0 / length);
        table_[axis].resize(m_count * k);
        table_t_[axis].resize(m_count * k);
        for (std::size_t m = 0; m < m_count; ++m) {
            for (std::size_t j = 0; j < k; ++j) {
                // sin(jπ x_m/L) with x_m/L = (m+1)/(M+1),
                // reduced mod 2(M+1) so the argument stays in [0, 2π)
                const std::size_t phase = ((j + 1) * (m + 1)) % (2 * (m_count + 1));
                const double arg = std::numbers::pi * static_cast<double>(phase) /
                                   static_cast<double>(points + 1);
                const double value = norm * std::sin(arg);
                table_[axis][m * k + j] = value;
                table_t_[axis][j * m_count + m] = value;
            }
        }
        weight_[axis] = length / static_cast<double>(points + 1);
    }
}

Collocation Collocation::for_level(const DomainSpec& domain, int level, int dealias_factor) {
    return Collocation(domain, level, dealias_factor * level, dealias_factor);
}

std::size_t Collocation::grid_size() const noexcept {
    const auto m = static_cast<std::size_t>(points_);
    return domain_.dimension == 1 ? m : m * m;
}

void Collocation::require_exact(int degree, const char* what) const {
    if (degree > exact_degree())
        throw DealiasingError(std::string(what) + ": degree " + std::to_string(degree) +
                              " exceeds exact quadrature degree " +
                              std::to_string(exact_degree()) + " of an " +
                              std::to_string(points_) + "-point grid");
}

double Collocation::node(int axis, int m) const {
    return domain_.lengths[axis] * static_cast<double>(m + 1) / static_cast<double>(points_ + 1);
}

GridField to_grid(const SpectralState& state, const Collocation& grid) {
    if (state.level() != grid.level() || state.dimension() != grid.domain().dimension)
        throw std::invalid_argument("state level/dimension does not match collocation grid");
    const auto& kern = simd::active_kernels();
    const auto k = static_cast<std::size_t>(grid.level());
    const auto m_count = static_cast<std::size_t>(grid.points());
    GridField field{state.dimension(), grid.points(), std::vector<double>(grid.grid_size())};
    const double* c = state.coeffs().data();
    if (state.dimension() == 1) {
        const double* t = grid.table(0).data();
        for (std::size_t m = 0; m < m_count; ++m) field.values[m] = kern.dot(t + m * k, c, k);
        return field;
    }
    // W[m2][j1] = Σ_{j2} C[j1][j2] T2[m2][j2], then V[m1][m2] = Σ_{j1} T1[m1][j1] W[m2][j1].
    const double* t1 = grid.table(0).data();
    const double* t2 = grid.table(1).data();
    std::vector<double> w(m_count * k);
    for (std::size_t j1 = 0; j1 < k; ++j1)
        for (std::size_t m2 = 0; m2 < m_count; ++m2)
            w[m2 * k + j1] = kern.dot(c + j1 * k, t2 + m2 * k, k);
    for (std::size_t m1 = 0; m1 < m_count; ++m1)
        for (std::size_t m2 = 0; m2 < m_count; ++m2)
            field.values[m1 * m_count + m2] = kern.dot(t1 + m1 * k, w.data() + m2 * k, k);
    return field;
}

SpectralState from_grid(const GridField& field, const Collocation& grid) {
    if (field.points != grid.points() || field.dimension != grid.domain().dimension)
        throw DealiasingError("grid field does not match collocation grid");
    const auto& kern = simd::active_kernels();
    const auto k = static_cast<std::size_t>(grid.level());
    const auto m_count = static_cast<std::size_t>(grid.points());
    SpectralState out(field.dimension, grid.level());
    const double* v = field.values.data();
    if (field.dimension == 1) {
        const double* tt = grid.table_t(0).data();
        const double h = grid.weight(0);
        for (std::size_t j = 0; j < k; ++j) out[j] = h * kern.dot(tt + j * m_count, v, m_count);
        return out;
    }
    // P[j2][m1] = Σ_{m2} V[m1][m2] T2t[j2][m2], then C[j1][j2] = Σ_{m1} T1t[j1][m1] P[j2][m1].
    const double* t1t = grid.table_t(0).data();
    const double* t2t = grid.table_t(1).data();
    const double h = grid.weight(0) * grid.weight(1);
    std::vector<double> p(k * m_count);
    for (std::size_t m1 = 0; m1 < m_count; ++m1)
        for (std::size_t j2 = 0; j2 < k; ++j2)
            p[j2 * m_count + m1] = kern.dot(v + m1 * m_count, t2t + j2 * m_count, m_count);
    for (std::size_t j1 = 0; j1 < k; ++j1)
        for (std::size_t j2 = 0; j2 < k; ++j2)
            out[j1 * k + j2] = h * kern.dot(t1t + j1 * m_count, p.data() + j2 * m_count, m_count);
    return out;
}

double grid_integral(const GridField& field, const Collocation& grid) {
    double s = 0.0;
    for (double v : field.values) s += v;
    const double h = field.dimension == 1 ? grid.weight(0) : grid.weight(0) * grid.weight(1);
    return h * s;
}

Norms norms(const SpectralState& state, const EigenData& eigen) {
    if (state.level() != eigen.level || state.dimension() != eigen.dimension)
        throw std::invalid_argument("state level/dimension does not match eigendata");
    const auto& kern = simd::active_kernels();
    const double* c = state.coeffs().data();
    const std::size_t n = state.size();
    std::vector<double> mu_sq(n);
    kern.multiply(eigen.mu.data(), eigen.mu.data(), mu_sq.data(), n);
    Norms out;
    const double l2_sq = kern.dot(c, c, n);
    const double h10_sq = kern.weighted_sum_squares(eigen.mu.data(), c, n);
    const double h20_sq = kern.weighted_sum_squares(mu_sq.data(), c, n);
    out.l2 = std::sqrt(l2_sq);
    out.h10 = std::sqrt(h10_sq);
    out.h20 = std::sqrt(h20_sq);
    out.v = std::sqrt(l2_sq + 2.0 * h10_sq + h20_sq);
    return out;
}

double power_integral(const SpectralState& state, int p, const Collocation& grid) {
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("power_integral needs an even p >= 2");
    grid.require_exact(p * grid.level(), "L^p integral");
    const GridField field = to_grid(state, grid);
    const double h = field.dimension == 1 ? grid.weight(0) : grid.weight(0) * grid.weight(1);
    return h * simd::active_kernels().sum_power(field.values.data(), field.values.size(),
                                                static_cast<unsigned>(p));
}

double lp_norm(const SpectralState& state, int p, const Collocation& grid) {
    const double integral = power_integral(state, p, grid);
    return integral <= 0.0 ? 0.0 : std::pow(integral, 1.0 / p);
}

GalerkinSpace::GalerkinSpace(const DomainSpec& domain_in, int level_in, int dealias_factor)
    : domain(domain_in),
      level(level_in),
      eigen(build_eigendata(domain_in, level_in)),
      grid(Collocation::for_level(domain_in, level_in, dealias_factor)) {}

}  // namespace shgal

#pragma once

// Sine eigenbasis of the Laplacian on a rectangle with Navier conditions
// (u = Δu = 0 on the boundary), Parseval norms, and the pseudo-spectral
// transforms between coefficients and a uniform interior collocation grid.
//
// Basis: e_j(x) = prod_i sqrt(2/L_i) sin(j_i π x_i / L_i), j_i = 1..k.
// It is L²-orthonormal and diagonalizes -Δ (eigenvalue μ_j = Σ (j_i π/L_i)²)
// and A = Δ² - 2Δ (eigenvalue α_j = μ_j² + 2μ_j).
//
// Grid: M interior points per axis, x_m = m L/(M+1), m = 1..M, quadrature
// weight L/(M+1). The rule is exact for every product of sine polynomials
// whose combined degree q satisfies q < 2(M+1).

#include <array>
#include <cstddef>
#include <vector>

#include "shgal/errors.hpp"

namespace shgal {

enum class BoundaryCondition { navier };

struct DomainSpec {
    int dimension = 1;
    std::array<double, 2> lengths{1.0, 1.0};
    BoundaryCondition bc = BoundaryCondition::navier;

    static DomainSpec interval(double length);
    static DomainSpec rectangle(double length_x, double length_y);

    // Throws std::invalid_argument on dimension outside {1,2} or a
    // non-positive length.
    void validate() const;

    double measure() const;
};

struct ModeIndex {
    std::array<int, 2> j{1, 1};
    int dimension = 1;

    static ModeIndex of(int j1) { return {{j1, 1}, 1}; }
    static ModeIndex of(int j1, int j2) { return {{j1, j2}, 2}; }
};

// Number of coefficients at level k: k in 1D, k² in 2D.
std::size_t mode_count(int dimension, int level);

// Flat coefficient index of a mode; row-major over (j1, j2).
std::size_t flat_index(const ModeIndex& mode, int level);
ModeIndex mode_at(std::size_t flat, int dimension, int level);

class SpectralState {
public:
    SpectralState() = default;
    SpectralState(int dimension, int level);
    SpectralState(int dimension, int level, std::vector<double> coeffs);

    static SpectralState zero(int dimension, int level) { return {dimension, level}; }
    static SpectralState unit_mode(int dimension, int level, const ModeIndex& mode);

    int dimension() const noexcept { return dimension_; }
    int level() const noexcept { return level_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    double& operator[](std::size_t i) { return coeffs_[i]; }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    double& at(const ModeIndex& mode) { return coeffs_[flat_index(mode, level_)]; }
    double at(const ModeIndex& mode) const { return coeffs_[flat_index(mode, level_)]; }

    std::vector<double>& coeffs() noexcept { return coeffs_; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    bool all_finite() const;

    friend bool operator==(const SpectralState&, const SpectralState&) = default;

private:
    int dimension_ = 1;
    int level_ = 1;
    std::vector<double> coeffs_;
};

// Coefficient-space helpers. Both operands must share dimension and level.
double inner(const SpectralState& a, const SpectralState& b);
double l2_norm(const SpectralState& u);
SpectralState scaled(const SpectralState& u, double factor);
// alpha*x + beta*y
SpectralState combine(double alpha, const SpectralState& x, double beta, const SpectralState& y);

// Zero-pad or truncate to another level (π_k when shrinking). Exact: no
// coefficient changes value.
SpectralState change_level(const SpectralState& u, int level);

struct EigenData {
    int dimension = 1;
    int level = 1;
    std::vector<double> mu;     // eigenvalues of -Δ
    std::vector<double> alpha;  // eigenvalues of A = Δ² - 2Δ
};

EigenData build_eigendata(const DomainSpec& domain, int level);

struct GridField {
    int dimension = 1;
    int points = 0;              // M per axis
    std::vector<double> values;  // row-major (m1, m2)
};

// Precomputed sine tables for one (domain, level, M) triple.
class Collocation {
public:
    // Throws DealiasingError when points < dealias_factor * level.
    Collocation(const DomainSpec& domain, int level, int points, int dealias_factor);

    // M = dealias_factor * level.
    static Collocation for_level(const DomainSpec& domain, int level, int dealias_factor);

    const DomainSpec& domain() const noexcept { return domain_; }
    int level() const noexcept { return level_; }
    int points() const noexcept { return points_; }
    int dealias_factor() const noexcept { return dealias_factor_; }
    std::size_t grid_size() const noexcept;

    // Highest combined sine degree the grid integrates exactly: 2M + 1.
    int exact_degree() const noexcept { return 2 * points_ + 1; }
    void require_exact(int degree, const char* what) const;

    // e_j(x_m) for axis d, laid out M x k (row m) and k x M (row j).
    const std::vector<double>& table(int axis) const { return table_[axis]; }
    const std::vector<double>& table_t(int axis) const { return table_t_[axis]; }
    double weight(int axis) const { return weight_[axis]; }
    double node(int axis, int m) const;

private:
    DomainSpec domain_;
    int level_;
    int points_;
    int dealias_factor_;
    std::array<std::vector<double>, 2> table_;
    std::array<std::vector<double>, 2> table_t_;
    std::array<double, 2> weight_{0.0, 0.0};
};

GridField to_grid(const SpectralState& state, const Collocation& grid);

// c_j = <field, e_j> by the grid quadrature. For fields that are sine
// polynomials of degree below 2(M+1) - k this is the exact L² projection
// onto the level-k span.
SpectralState from_grid(const GridField& field, const Collocation& grid);

// ∫ f dx by the grid rule.
double grid_integral(const GridField& field, const Collocation& grid);

struct Norms {
    double l2 = 0.0;
    double h10 = 0.0;  // |∇u|
    double h20 = 0.0;  // |Δu|
    double v = 0.0;    // sqrt(l2² + 2 h10² + h20²)
};

Norms norms(const SpectralState& state, const EigenData& eigen);

// ∫ u^p dx for even p, evaluated exactly on the grid.
// Throws DealiasingError if p*k exceeds the exact degree of the grid.
double power_integral(const SpectralState& state, int p, const Collocation& grid);

// (∫ u^p dx)^{1/p} for even p.
double lp_norm(const SpectralState& state, int p, const Collocation& grid);

// Bundle of everything a level-k computation needs.
struct GalerkinSpace {
    DomainSpec domain;
    int level;
    EigenData eigen;
    Collocation grid;

    GalerkinSpace(const DomainSpec& domain, int level, int dealias_factor);
    int dimension() const noexcept { return domain.dimension; }
};

}  // namespace shgal

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "momrep/errors.hpp"

namespace momrep {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

/// Particle statistics selecting the sign rule of the exchange sum.
enum class Statistics { bose, fermi };

/// Sign carried by a permutation of the given parity: +1 for bosons always,
/// (-1)^parity for fermions. parity must be 0 or 1.
int statistics_sign(Statistics statistics, int parity);

/// Thermodynamic state and constants shared by every module. tau is the
/// system-specific energy parameter of the equilibrium weight exp(-z/tau) and
/// is supplied directly; temperature is informational only and never enters a
/// formula.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
    double tau = 1.0;
    double temperature = 0.0;
    double density = 0.0;       // N / V
    double volume = 0.0;
    std::int64_t n_particles = 0;
    Statistics statistics = Statistics::bose;

    /// Throws ValidationError unless hbar, mass, volume > 0, n_particles >= 1
    /// and density * volume == n_particles within 1e-12 relative.
    void validate() const;

    /// Throws CondensateRegime unless tau > 0 (continuous-statistics paths).
    void require_continuous_tau(const char* context) const;
};

/// Convenience constructor: density is derived from N and V so the consistency
/// invariant holds by construction.
PhysicalParams make_params(double tau, std::int64_t n_particles, double volume,
                           Statistics statistics = Statistics::bose,
                           double hbar = 1.0, double mass = 1.0);

/// Whether a grid samples position or momentum space.
enum class GridSpace { position, momentum };

/// Integration-domain semantics of a grid:
///  - decaying: field must vanish at the boundary (infinite-domain surrogate),
///  - box:      finite volume, integrate over the full extent,
///  - periodic: one period, both endpoints stored and equal.
enum class GridDomain { decaying, box, periodic };

/// One uniform symmetric axis: 2*half_points + 1 nodes at
/// (i - half_points) * spacing, i = 0 .. 2*half_points.
struct GridAxis {
    double spacing = 0.0;
    int half_points = 0;
};

constexpr int kMaxAxes = 6; // up to s = 2 particles in 3D

/// Uniform Cartesian product grid, symmetric about the origin with an odd
/// point count per axis (the origin is always a node).
class UniformGrid {
public:
    UniformGrid(GridSpace space, GridDomain domain, std::vector<GridAxis> axes);

    GridSpace space() const { return space_; }
    GridDomain domain() const { return domain_; }
    int dim() const { return static_cast<int>(axes_.size()); }
    const GridAxis& axis(int a) const { return axes_[static_cast<std::size_t>(a)]; }
    int points(int a) const { return 2 * axes_[static_cast<std::size_t>(a)].half_points + 1; }
    std::size_t size() const { return size_; }

    double coordinate(int a, int i) const {
        const GridAxis& ax = axes_[static_cast<std::size_t>(a)];
        return (i - ax.half_points) * ax.spacing;
    }
    double half_extent(int a) const {
        const GridAxis& ax = axes_[static_cast<std::size_t>(a)];
        return ax.half_points * ax.spacing;
    }
    /// Full length of axis a (2 * half_extent).
    double extent(int a) const { return 2.0 * half_extent(a); }

    void unflatten(std::size_t flat, int* idx) const;
    std::size_t flatten(const int* idx) const;

    /// Trapezoid weight of the node (product over axes; endpoint nodes get
    /// spacing/2).
    double weight(const int* idx) const;

    /// True if any index sits on an axis boundary.
    bool on_boundary(const int* idx) const;

    /// Embeds the first three axis coordinates of a node into a Vec3 (missing
    /// axes read 0).
    Vec3 point3(const int* idx) const;

    /// Short human-readable descriptor, e.g. "momentum 1d n=321 h=0.02".
    std::string describe() const;

    bool same_layout(const UniformGrid& other) const;

private:
    GridSpace space_;
    GridDomain domain_;
    std::vector<GridAxis> axes_;
    std::size_t size_;
};

struct MomentumGrid : UniformGrid {
    explicit MomentumGrid(std::vector<GridAxis> axes,
                          GridDomain domain = GridDomain::decaying)
        : UniformGrid(GridSpace::momentum, domain, std::move(axes)) {}
    /// Isotropic grid: dim identical axes.
    static MomentumGrid cubic(int dim, double spacing, int half_points);
};

struct PositionGrid : UniformGrid {
    explicit PositionGrid(std::vector<GridAxis> axes,
                          GridDomain domain = GridDomain::box)
        : UniformGrid(GridSpace::position, domain, std::move(axes)) {}
    static PositionGrid cubic(int dim, double spacing, int half_points,
                              GridDomain domain = GridDomain::box);
};

/// Values sampled on a UniformGrid, flat row-major storage.
template <class T>
class GridField {
public:
    GridField(UniformGrid grid, std::vector<T> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw ValidationError("GridField: value count " + std::to_string(values_.size()) +
                                  " does not match grid size " + std::to_string(grid_.size()));
    }
    explicit GridField(UniformGrid grid)
        : grid_(std::move(grid)), values_(grid_.size(), T{}) {}

    const UniformGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    T& operator[](std::size_t i) { return values_[i]; }
    const T& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<T>& values() const { return values_; }
    std::vector<T>& values() { return values_; }

private:
    UniformGrid grid_;
    std::vector<T> values_;
};

/// Real-valued sampled distribution (diagonal densities and similar fields).
using GriddedDistribution = GridField<double>;
using ComplexField = GridField<Complex>;

/// Trapezoid integral over the grid. For decaying domains the boundary values
/// must be below 1e-10 x max|values| (TailNotDecayed otherwise); box and
/// periodic domains integrate over their finite extent with no tail
/// requirement. Periodic domains additionally require the duplicate endpoint
/// samples to agree.
double quadrature(const GriddedDistribution& dist);
Complex quadrature(const ComplexField& field);

/// One weighted Dirac peak at a fixed momentum.
struct DeltaPeak {
    double weight = 0.0;
    Vec3 location = Vec3::Zero();
};

/// Exact atomic measure: list of non-negative weighted peaks at pairwise
/// distinct locations. Peaks are stored exactly and never rasterized.
class DeltaPeakMeasure {
public:
    DeltaPeakMeasure() = default;
    explicit DeltaPeakMeasure(std::vector<DeltaPeak> peaks);

    const std::vector<DeltaPeak>& peaks() const { return peaks_; }
    std::size_t size() const { return peaks_.size(); }
    bool empty() const { return peaks_.empty(); }
    double total_weight() const;

    /// Throws ValidationError unless total weight equals expected within
    /// 1e-12 relative.
    void require_total(double expected) const;

private:
    std::vector<DeltaPeak> peaks_;
};

namespace quadrules {

/// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Rule gauss_legendre(int n);

/// Gauss-Hermite nodes/weights for integrals of exp(-t^2) f(t) over the real
/// line; used as an oracle for Gaussian-weighted integrands.
Rule gauss_hermite(int n);

} // namespace quadrules

} // namespace momrep

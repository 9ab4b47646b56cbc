#include "momrep/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "momrep/errors.hpp"

namespace momrep::wigner {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_order(int s, const char* where) {
    if (s != 1 && s != 2) {
        throw UnsupportedOrder(std::string(where) + ": order must be 1 or 2, got " +
                               std::to_string(s));
    }
}

void require_arity(int s, std::span<const Vec3> x, std::span<const Vec3> p, const char* where) {
    if (static_cast<int>(x.size()) != s || static_cast<int>(p.size()) != s) {
        throw ValidationError(std::string(where) + ": expected " + std::to_string(s) +
                              " position and momentum vectors, got " + std::to_string(x.size()) +
                              " and " + std::to_string(p.size()));
    }
}

double total_kinetic(std::span<const Vec3> p, const PhysicalParams& params) {
    double sum = 0.0;
    for (const Vec3& pk : p) {
        sum += pk.squaredNorm();
    }
    return sum / (2.0 * params.mass);
}

} // namespace

Complex IdealGasVs::eval(std::span<const Vec3> /*x*/, std::span<const Vec3> p, Complex z) const {
    const double energy = total_kinetic(p, params_);
    const Complex denom = z - energy;
    if (std::abs(denom) < 1e-14 * (1.0 + std::abs(energy))) {
        throw PoleHit("IdealGasVs: z coincides with the kinetic energy " +
                      std::to_string(energy));
    }
    return 1.0 / denom;
}

std::optional<contour::PoleSet> IdealGasVs::poles(std::span<const Vec3> /*x*/,
                                                  std::span<const Vec3> p) const {
    contour::PoleSet set;
    set.poles.push_back({total_kinetic(p, params_), Complex(1.0, 0.0)});
    return set;
}

struct CrystalVs::Cache {
    Vec3 p = Vec3::Zero();
    bool valid = false;
    std::vector<Vec3> avecs; // reciprocal vectors in enumeration order
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd vectors;  // column n = eigenvector of band n
    Eigen::Index zero_row = 0; // row of the A = 0 plane wave
};

CrystalVs::CrystalVs(crystal::ReciprocalLattice lattice, crystal::FourierPotential potential,
                     PhysicalParams params)
    : lattice_(std::move(lattice)), potential_(std::move(potential)), params_(params),
      cache_(std::make_unique<Cache>()) {
    lattice_.validate();
    params_.validate();
}

CrystalVs::~CrystalVs() = default;

const CrystalVs::Cache& CrystalVs::cached(const Vec3& p) const {
    Cache& c = *cache_;
    if (c.valid && (c.p - p).norm() <= 1e-15 * (1.0 + p.norm())) {
        return c;
    }
    const auto triples = lattice_.triples();
    const Eigen::MatrixXcd h =
        crystal::bloch_matrix(p, lattice_, lattice_.cutoff, potential_, params_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NearSingular("CrystalVs: eigendecomposition failed at p = (" +
                           std::to_string(p.x()) + ", " + std::to_string(p.y()) + ", " +
                           std::to_string(p.z()) + ")");
    }
    c.p = p;
    c.eigenvalues = solver.eigenvalues();
    c.vectors = solver.eigenvectors();
    c.avecs.clear();
    c.avecs.reserve(triples.size());
    c.zero_row = 0;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        c.avecs.push_back(lattice_.vector(triples[i]));
        if (triples[i] == crystal::Triple{0, 0, 0}) {
            c.zero_row = static_cast<Eigen::Index>(i);
        }
    }
    c.valid = true;
    return c;
}

Complex CrystalVs::eval(std::span<const Vec3> x, std::span<const Vec3> p, Complex z) const {
    require_arity(1, x, p, "CrystalVs::eval");
    const Cache& c = cached(p[0]);
    Eigen::VectorXcd phases(c.vectors.rows());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::polar(1.0, c.avecs[static_cast<std::size_t>(i)].dot(x[0]));
    }
    const Eigen::VectorXcd u = c.vectors.transpose() * phases; // u_n(r)
    const double scale = 1.0 + c.eigenvalues.cwiseAbs().maxCoeff();
    Complex value = 0.0;
    for (Eigen::Index n = 0; n < c.eigenvalues.size(); ++n) {
        const Complex denom = z - c.eigenvalues(n);
        if (std::abs(denom) < 1e-14 * scale) {
            throw PoleHit("CrystalVs: z coincides with band energy " +
                          std::to_string(c.eigenvalues(n)));
        }
        value += std::conj(c.vectors(c.zero_row, n)) * u(n) / denom;
    }
    return value;
}

std::optional<contour::PoleSet> CrystalVs::poles(std::span<const Vec3> x,
                                                 std::span<const Vec3> p) const {
    require_arity(1, x, p, "CrystalVs::poles");
    const Cache& c = cached(p[0]);
    Eigen::VectorXcd phases(c.vectors.rows());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::polar(1.0, c.avecs[static_cast<std::size_t>(i)].dot(x[0]));
    }
    const Eigen::VectorXcd u = c.vectors.transpose() * phases;
    // Merge bands sharing an eigenvalue so every reported pole is simple.
    const double scale = 1.0 + c.eigenvalues.cwiseAbs().maxCoeff();
    contour::PoleSet set;
    for (Eigen::Index n = 0; n < c.eigenvalues.size(); ++n) {
        const Complex residue = std::conj(c.vectors(c.zero_row, n)) * u(n);
        if (!set.poles.empty() &&
            std::abs(c.eigenvalues(n) - set.poles.back().location) <= 1e-9 * scale) {
            set.poles.back().residue += residue;
        } else {
            set.poles.push_back({c.eigenvalues(n), residue});
        }
    }
    return set;
}

Complex exchange_sum(int s, Statistics statistics, std::span<const Vec3> x,
                     std::span<const Vec3> p, const PhysicalParams& params) {
    require_order(s, "exchange_sum");
    require_arity(s, x, p, "exchange_sum");
    if (s == 1) {
        return Complex(1.0, 0.0);
    }
    // Identity permutation plus the transposition swapping the two momenta.
    const double phase = (x[0] - x[1]).dot(p[0] - p[1]) / params.hbar;
    const double sign = statistics_sign(statistics, 1);
    return Complex(1.0, 0.0) + sign * std::polar(1.0, phase);
}

Complex wigner_kernel(int s, std::span<const Vec3> x, std::span<const Vec3> p, int dim,
                      const VsProvider& provider, const contour::WeightConstants& weights,
                      const contour::ContourSpec& spec, const PhysicalParams& params) {
    require_order(s, "wigner_kernel");
    require_arity(s, x, p, "wigner_kernel");
    if (dim < 1 || dim > 3) {
        throw ValidationError("wigner_kernel: dimension must be 1, 2, or 3, got " +
                              std::to_string(dim));
    }
    params.require_continuous_tau("wigner_kernel");
    const double a_s = weights.order_constant(s);
    Complex zint;
    if (auto pole_set = provider.poles(x, p)) {
        zint = contour::residue_sum(*pole_set, params.tau);
    } else {
        const auto integrand = [&](Complex z) {
            return std::exp(-z / params.tau) * provider.eval(x, p, z);
        };
        zint = contour::contour_integral(integrand, spec);
    }
    const Complex exchange = exchange_sum(s, params.statistics, x, p, params);
    const double factorial = (s == 1) ? 1.0 : 2.0;
    const double norm = std::pow(kTwoPi * params.hbar, dim * s) * factorial;
    return a_s * zint * exchange / norm;
}

double wigner_function(int s, std::span<const Vec3> x, std::span<const Vec3> p, int dim,
                       const VsProvider& provider, const contour::WeightConstants& weights,
                       const contour::ContourSpec& spec, const PhysicalParams& params) {
    return wigner_kernel(s, x, p, dim, provider, weights, spec, params).real();
}

namespace {

/// Splits the flat grid node into s per-particle Vec3 blocks (dim axes each,
/// zero padding beyond dim).
std::vector<Vec3> particle_vectors(const UniformGrid& grid, std::size_t flat, int s, int dim) {
    int idx[kMaxAxes] = {};
    grid.unflatten(flat, idx);
    std::vector<Vec3> out(static_cast<std::size_t>(s), Vec3::Zero());
    for (int k = 0; k < s; ++k) {
        for (int a = 0; a < dim; ++a) {
            out[static_cast<std::size_t>(k)](a) = grid.coordinate(k * dim + a, idx[k * dim + a]);
        }
    }
    return out;
}

int infer_dim(int s, const UniformGrid& xgrid, const UniformGrid& mgrid, const char* where) {
    const int axes = xgrid.dim();
    if (mgrid.dim() != axes) {
        throw ValidationError(std::string(where) +
                              ": position and momentum grids must have the same axis count");
    }
    if (axes % s != 0) {
        throw ValidationError(std::string(where) + ": axis count " + std::to_string(axes) +
                              " is not a multiple of the order " + std::to_string(s));
    }
    const int dim = axes / s;
    if (dim < 1 || dim > 3) {
        throw ValidationError(std::string(where) + ": per-particle dimension must be 1, 2, or 3");
    }
    return dim;
}

} // namespace

WignerField wigner_field(int s, const PositionGrid& xgrid, const MomentumGrid& mgrid,
                         const VsProvider& provider, const contour::WeightConstants& weights,
                         const contour::ContourSpec& spec, const PhysicalParams& params) {
    require_order(s, "wigner_field");
    const int dim = infer_dim(s, xgrid, mgrid, "wigner_field");
    WignerField field{s, xgrid, mgrid,
                      std::vector<double>(xgrid.size() * mgrid.size(), 0.0), 0.0};
    // Momentum-major sweep: providers that cache per momentum see each p once.
    for (std::size_t m = 0; m < mgrid.size(); ++m) {
        const auto pvecs = particle_vectors(mgrid, m, s, dim);
        for (std::size_t ix = 0; ix < xgrid.size(); ++ix) {
            const auto xvecs = particle_vectors(xgrid, ix, s, dim);
            const Complex w =
                wigner_kernel(s, xvecs, pvecs, dim, provider, weights, spec, params);
            field.values[ix * mgrid.size() + m] = w.real();
            field.max_abs_imag = std::max(field.max_abs_imag, std::abs(w.imag()));
        }
    }
    return field;
}

GriddedDistribution marginal_position(const WignerField& field, const PhysicalParams& params) {
    (void)params;
    GriddedDistribution out(field.xgrid);
    const std::size_t msize = field.mgrid.size();
    for (std::size_t ix = 0; ix < field.xgrid.size(); ++ix) {
        std::vector<double> slice(field.values.begin() + static_cast<std::ptrdiff_t>(ix * msize),
                                  field.values.begin() +
                                      static_cast<std::ptrdiff_t>((ix + 1) * msize));
        out[ix] = quadrature(GriddedDistribution(field.mgrid, std::move(slice)));
    }
    return out;
}

namespace {

/// Product of axis extents of one particle's block of a grid.
double block_extent(const UniformGrid& grid, int particle, int dim) {
    double extent = 1.0;
    for (int a = 0; a < dim; ++a) {
        extent *= grid.extent(particle * dim + a);
    }
    return extent;
}

} // namespace

GriddedDistribution marginal_momentum(const WignerField& field, const PhysicalParams& params) {
    const int dim = field.xgrid.dim() / field.s;
    double scale = 1.0;
    if (field.xgrid.domain() == GridDomain::periodic) {
        // One period is integrated per particle; rescale to the system volume.
        for (int k = 0; k < field.s; ++k) {
            const double period = block_extent(field.xgrid, k, dim);
            scale *= params.volume / period;
        }
    } else if (field.xgrid.domain() == GridDomain::box) {
        for (int k = 0; k < field.s; ++k) {
            const double extent = block_extent(field.xgrid, k, dim);
            if (std::abs(extent - params.volume) > 1e-8 * params.volume) {
                throw ValidationError(
                    "marginal_momentum: box grid extent " + std::to_string(extent) +
                    " does not span the system volume " + std::to_string(params.volume));
            }
        }
    }
    const std::size_t msize = field.mgrid.size();
    GriddedDistribution out(field.mgrid);
    for (std::size_t m = 0; m < msize; ++m) {
        std::vector<double> slice(field.xgrid.size());
        for (std::size_t ix = 0; ix < field.xgrid.size(); ++ix) {
            slice[ix] = field.values[ix * msize + m];
        }
        out[m] = scale * quadrature(GriddedDistribution(field.xgrid, std::move(slice)));
    }
    return out;
}

} // namespace momrep::wigner

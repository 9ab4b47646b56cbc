#include "momrep/crystal.hpp"

#include <algorithm>
#include <cmath>

namespace momrep::crystal {

namespace {

std::string triple_str(const Triple& t) {
    return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
           std::to_string(t[2]) + ")";
}

int find_index(const std::vector<Triple>& triples, const Triple& t) {
    const auto it = std::lower_bound(triples.begin(), triples.end(), t);
    if (it == triples.end() || *it != t) return -1;
    return static_cast<int>(it - triples.begin());
}

} // namespace

void ReciprocalLattice::validate() const {
    if (dim < 1 || dim > 3)
        throw ValidationError("ReciprocalLattice: dim must be 1, 2 or 3");
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (cutoff[static_cast<std::size_t>(a)] < 1)
                throw ValidationError("ReciprocalLattice: cutoff must be >= 1 on used axes");
        } else if (cutoff[static_cast<std::size_t>(a)] != 0) {
            throw ValidationError("ReciprocalLattice: cutoff must be 0 beyond dim");
        }
    }
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    for (int a = 0; a < dim; ++a) B.col(a) = basis[static_cast<std::size_t>(a)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B.leftCols(dim));
    const double smin = svd.singularValues()(dim - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 1e-12 * std::max(1.0, smax)))
        throw ValidationError("ReciprocalLattice: basis vectors must be linearly "
                              "independent");
}

double ReciprocalLattice::cell_volume() const {
    validate();
    Eigen::MatrixXd B(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int r = 0; r < dim; ++r) B(r, a) = basis[static_cast<std::size_t>(a)][r];
    return std::pow(2.0 * M_PI, dim) / std::abs(B.determinant());
}

std::vector<Triple> ReciprocalLattice::triples() const { return triples(cutoff); }

std::vector<Triple> ReciprocalLattice::triples(const std::array<int, 3>& cut) const {
    std::vector<Triple> out;
    out.reserve(static_cast<std::size_t>((2 * cut[0] + 1) * (2 * cut[1] + 1) *
                                         (2 * cut[2] + 1)));
    for (int l = -cut[0]; l <= cut[0]; ++l)
        for (int m = -cut[1]; m <= cut[1]; ++m)
            for (int n = -cut[2]; n <= cut[2]; ++n) out.push_back(Triple{l, m, n});
    return out;
}

Vec3 ReciprocalLattice::vector(const Triple& t) const {
    return t[0] * basis[0] + t[1] * basis[1] + t[2] * basis[2];
}

ReciprocalLattice ReciprocalLattice::line(double a, int cutoff) {
    if (!(a > 0.0)) throw ValidationError("ReciprocalLattice::line: basis length must be > 0");
    ReciprocalLattice lat;
    lat.dim = 1;
    lat.basis = {Vec3(a, 0.0, 0.0), Vec3::UnitY(), Vec3::UnitZ()};
    lat.cutoff = {cutoff, 0, 0};
    lat.validate();
    return lat;
}

FourierPotential::FourierPotential(std::vector<std::pair<Triple, Complex>> coefficients)
    : coeffs_(std::move(coefficients)) {
    std::sort(coeffs_.begin(), coeffs_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i)
        if (coeffs_[i].first == coeffs_[i + 1].first)
            throw ValidationError("FourierPotential: duplicate coefficient at " +
                                  triple_str(coeffs_[i].first));
    // a real potential needs U_{-B} = conj(U_B)
    for (const auto& [t, u] : coeffs_) {
        const Triple neg{-t[0], -t[1], -t[2]};
        const auto it = std::lower_bound(
            coeffs_.begin(), coeffs_.end(), neg,
            [](const auto& entry, const Triple& key) { return entry.first < key; });
        if (it == coeffs_.end() || it->first != neg)
            throw ValidationError("FourierPotential: missing mirror coefficient at " +
                                  triple_str(neg));
        if (std::abs(it->second - std::conj(u)) > 1e-12 * (1.0 + std::abs(u)))
            throw ValidationError("FourierPotential: coefficients at " + triple_str(t) +
                                  " and " + triple_str(neg) + " are not conjugate");
    }
}

Complex FourierPotential::coefficient(const Triple& t) const {
    const auto it = std::lower_bound(
        coeffs_.begin(), coeffs_.end(), t,
        [](const auto& entry, const Triple& key) { return entry.first < key; });
    if (it == coeffs_.end() || it->first != t) return 0.0;
    return it->second;
}

double FourierPotential::max_abs() const {
    double m = 0.0;
    for (const auto& [t, u] : coeffs_) m = std::max(m, std::abs(u));
    return m;
}

FourierPotential FourierPotential::cosine_1d(double u) {
    return FourierPotential({{Triple{1, 0, 0}, Complex(u)}, {Triple{-1, 0, 0}, Complex(u)}});
}

Eigen::MatrixXcd bloch_matrix(const Vec3& p, const ReciprocalLattice& lattice,
                              const std::array<int, 3>& cut, const FourierPotential& potential,
                              const PhysicalParams& params) {
    params.validate();
    lattice.validate();
    const std::vector<Triple> ts = lattice.triples(cut);
    const int n = static_cast<int>(ts.size());
    Eigen::MatrixXcd H(n, n);
    for (int i = 0; i < n; ++i) {
        const Vec3 kin = p + params.hbar * lattice.vector(ts[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j) {
            const Triple diff{ts[static_cast<std::size_t>(i)][0] - ts[static_cast<std::size_t>(j)][0],
                              ts[static_cast<std::size_t>(i)][1] - ts[static_cast<std::size_t>(j)][1],
                              ts[static_cast<std::size_t>(i)][2] - ts[static_cast<std::size_t>(j)][2]};
            H(i, j) = potential.coefficient(diff);
        }
        H(i, i) += kin.squaredNorm() / (2.0 * params.mass);
    }
    return H;
}

namespace {

constexpr int kExactEigenCheckLimit = 1024;

struct CutoffSolve {
    std::vector<Triple> triples;
    Eigen::VectorXcd b;
    Complex b0;
};

/// Direct solve of (z I - H) b = e_0 at one cutoff, with the NearSingular and
/// residual guards.
CutoffSolve solve_at_cutoff(const Vec3& p, Complex z, const ReciprocalLattice& lattice,
                            const std::array<int, 3>& cut, const FourierPotential& potential,
                            const PhysicalParams& params) {
    CutoffSolve out;
    out.triples = lattice.triples(cut);
    const int n = static_cast<int>(out.triples.size());
    const Eigen::MatrixXcd H = bloch_matrix(p, lattice, cut, potential, params);

    if (n <= kExactEigenCheckLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
        double dist = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) dist = std::min(dist, std::abs(z - es.eigenvalues()(k)));
        if (dist < 1e-10)
            throw NearSingular("bloch_coefficients: z is within " + std::to_string(dist) +
                               " of an eigenvalue");
    }

    Eigen::MatrixXcd M = -H;
    M.diagonal().array() += z;
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(n);
    const int zero_idx = find_index(out.triples, Triple{0, 0, 0});
    e0(zero_idx) = 1.0;
    out.b = M.partialPivLu().solve(e0);

    if (n > kExactEigenCheckLimit && out.b.norm() > 1e10)
        throw NearSingular("bloch_coefficients: resolvent norm exceeds 1e10; z is too "
                           "close to the spectrum");
    const double residual = (M * out.b - e0).norm();
    if (residual > 1e-10 * std::max(1.0, out.b.norm()))
        throw NearSingular("bloch_coefficients: linear-solve residual " +
                           std::to_string(residual) + " exceeds 1e-10");
    out.b0 = out.b(zero_idx);
    return out;
}

std::array<int, 3> doubled(const std::array<int, 3>& cut) {
    std::array<int, 3> out{};
    for (int a = 0; a < 3; ++a)
        out[static_cast<std::size_t>(a)] = cut[static_cast<std::size_t>(a)] == 0
                                               ? 0
                                               : 2 * cut[static_cast<std::size_t>(a)];
    return out;
}

int max_entry(const std::array<int, 3>& cut) { return std::max({cut[0], cut[1], cut[2]}); }

struct BandEigen {
    Eigen::VectorXd eigenvalues;
    Eigen::VectorXd weights;
    double eps0 = 0.0;
    double psi0 = 0.0;
};

BandEigen eigen_at_cutoff(const Vec3& p, const ReciprocalLattice& lattice,
                          const std::array<int, 3>& cut, const FourierPotential& potential,
                          const PhysicalParams& params) {
    const std::vector<Triple> ts = lattice.triples(cut);
    const Eigen::MatrixXcd H = bloch_matrix(p, lattice, cut, potential, params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const int n = static_cast<int>(ts.size());
    const int zero_idx = find_index(ts, Triple{0, 0, 0});
    BandEigen out;
    out.eigenvalues = es.eigenvalues();
    out.weights.resize(n);
    for (int k = 0; k < n; ++k) out.weights(k) = std::norm(es.eigenvectors()(zero_idx, k));
    out.eps0 = out.eigenvalues(0);
    out.psi0 = std::sqrt(out.weights(0));
    return out;
}

} // namespace

Complex BlochCoefficients::coefficient(const Triple& t) const {
    const int idx = find_index(triples, t);
    if (idx < 0)
        throw ValidationError("BlochCoefficients: triple " + triple_str(t) +
                              " outside the solved cutoff box");
    return values(idx);
}

BlochCoefficients bloch_coefficients(const Vec3& p, Complex z, const ReciprocalLattice& lattice,
                                     const FourierPotential& potential,
                                     const PhysicalParams& params, const SolveOptions& options) {
    lattice.validate();
    std::array<int, 3> cut = lattice.cutoff;
    CutoffSolve solve = solve_at_cutoff(p, z, lattice, cut, potential, params);
    if (options.auto_refine) {
        bool converged = false;
        while (max_entry(cut) <= options.max_cutoff) {
            const std::array<int, 3> next = doubled(cut);
            CutoffSolve refined = solve_at_cutoff(p, z, lattice, next, potential, params);
            const double change = std::abs(refined.b0 - solve.b0);
            solve = std::move(refined);
            cut = next;
            if (change <= options.tolerance * std::max(1.0, std::abs(solve.b0))) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NotConverged("bloch_coefficients: b_0 did not stabilize to " +
                               std::to_string(options.tolerance) +
                               " before the cutoff ceiling " +
                               std::to_string(options.max_cutoff));
    }
    BlochCoefficients out;
    out.triples = std::move(solve.triples);
    out.values = std::move(solve.b);
    out.b0 = solve.b0;
    out.cutoff_used = cut;
    return out;
}

contour::PoleSet BandSolution::pole_set() const {
    contour::PoleSet poles;
    poles.poles.reserve(static_cast<std::size_t>(eigenvalues.size()));
    for (int k = 0; k < eigenvalues.size(); ++k)
        poles.poles.push_back(contour::Pole{eigenvalues(k), Complex(band_weights(k))});
    return poles;
}

BandSolution ground_band(const Vec3& p, const ReciprocalLattice& lattice,
                         const FourierPotential& potential, const PhysicalParams& params,
                         const SolveOptions& options) {
    lattice.validate();
    std::array<int, 3> cut = lattice.cutoff;
    BandEigen eig = eigen_at_cutoff(p, lattice, cut, potential, params);
    if (options.auto_refine) {
        bool converged = false;
        while (max_entry(cut) <= options.max_cutoff) {
            const std::array<int, 3> next = doubled(cut);
            BandEigen refined = eigen_at_cutoff(p, lattice, next, potential, params);
            const double change = std::abs(refined.eps0 - eig.eps0) /
                                      std::max(1.0, std::abs(refined.eps0)) +
                                  std::abs(refined.psi0 - eig.psi0);
            eig = std::move(refined);
            cut = next;
            if (change <= options.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NotConverged("ground_band: (eps_0, psi_0) did not stabilize to " +
                               std::to_string(options.tolerance) +
                               " before the cutoff ceiling " +
                               std::to_string(options.max_cutoff));
    }
    BandSolution out;
    out.eps0 = eig.eps0;
    out.psi0 = eig.psi0;
    out.eigenvalues = std::move(eig.eigenvalues);
    out.band_weights = std::move(eig.weights);
    out.cutoff_used = cut;
    return out;
}

double rho1_momentum_crystal(const Vec3& p, const ReciprocalLattice& lattice,
                             const FourierPotential& potential, const PhysicalParams& params,
                             double A_norm, BandMode mode, const SolveOptions& options) {
    params.validate();
    params.require_continuous_tau("rho1_momentum_crystal");
    const BandSolution band = ground_band(p, lattice, potential, params, options);
    double thermal_sum = 0.0;
    if (mode == BandMode::ground) {
        thermal_sum = band.psi0 * band.psi0 * std::exp(-band.eps0 / params.tau);
    } else {
        for (int k = 0; k < band.eigenvalues.size(); ++k)
            thermal_sum += band.band_weights(k) * std::exp(-band.eigenvalues(k) / params.tau);
    }
    const double prefactor = params.volume * A_norm /
                             std::pow(2.0 * M_PI * params.hbar, lattice.dim) *
                             lattice.cell_volume();
    return prefactor * thermal_sum;
}

double normalization_constant_crystal(const ReciprocalLattice& lattice,
                                      const FourierPotential& potential,
                                      const PhysicalParams& params, const MomentumGrid& grid,
                                      BandMode mode, const SolveOptions& options) {
    if (grid.dim() != lattice.dim)
        throw ValidationError("normalization_constant_crystal: grid dimension must match "
                              "the lattice dimension");
    std::vector<double> values(grid.size());
    int idx[kMaxAxes];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.unflatten(i, idx);
        values[i] = rho1_momentum_crystal(grid.point3(idx), lattice, potential, params, 1.0,
                                          mode, options);
    }
    const double unnormalized = quadrature(GriddedDistribution(grid, std::move(values)));
    if (!(unnormalized > 0.0))
        throw ValidationError("normalization_constant_crystal: distribution integrates "
                              "to a non-positive value");
    return static_cast<double>(params.n_particles) / unnormalized;
}

Complex volume_term_extraction(const BlochCoefficients& coefficients) {
    return coefficients.coefficient(Triple{0, 0, 0});
}

} // namespace momrep::crystal

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "momrep/contour.hpp"
#include "momrep/core.hpp"

namespace momrep::crystal {

using Triple = std::array<int, 3>;

/// Truncated reciprocal lattice: vectors A = l a1 + m a2 + n a3 with integer
/// coefficients bounded per axis by the cutoff. Unused axes (beyond dim) are
/// fixed to coefficient 0.
struct ReciprocalLattice {
    int dim = 1;
    std::array<Vec3, 3> basis{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    std::array<int, 3> cutoff{8, 0, 0};

    void validate() const;

    /// Elementary cell volume of the direct lattice: (2 pi)^dim / |det| of the
    /// dim-dimensional reciprocal basis block.
    double cell_volume() const;

    /// Deterministic enumeration of the integer coefficient triples inside the
    /// cutoff box (lexicographic, each axis from -cutoff to +cutoff).
    std::vector<Triple> triples() const;
    std::vector<Triple> triples(const std::array<int, 3>& cut) const;

    Vec3 vector(const Triple& t) const;

    /// 1D lattice with reciprocal basis length a along x and the given cutoff.
    static ReciprocalLattice line(double a, int cutoff = 8);
};

/// Hermitian table of Fourier coefficients U_B of a real periodic potential;
/// requires U_{-B} = conj(U_B) for every stored B.
class FourierPotential {
public:
    FourierPotential() = default;
    explicit FourierPotential(std::vector<std::pair<Triple, Complex>> coefficients);

    Complex coefficient(const Triple& t) const;
    const std::vector<std::pair<Triple, Complex>>& coefficients() const { return coeffs_; }
    double max_abs() const;
    bool empty() const { return coeffs_.empty(); }

    /// U(r) = 2 u cos(a1 . r): coefficients u at +-(1,0,0).
    static FourierPotential cosine_1d(double u);

private:
    std::vector<std::pair<Triple, Complex>> coeffs_; // sorted by triple
};

/// Plane-wave (Bloch) operator at quasi-momentum p over the truncated lattice:
/// H_{A,A'} = (p + hbar A)^2 / 2m delta_{A,A'} + U_{A-A'}. Hermitian by
/// construction of FourierPotential.
Eigen::MatrixXcd bloch_matrix(const Vec3& p, const ReciprocalLattice& lattice,
                              const std::array<int, 3>& cut, const FourierPotential& potential,
                              const PhysicalParams& params);

struct SolveOptions {
    bool auto_refine = true;   // double the cutoff until the answer stabilizes
    double tolerance = 1e-8;   // stabilization threshold on b_0 / (eps_0, psi_0)
    int max_cutoff = 128;      // per-axis ceiling for the doubling loop
};

/// Plane-wave coefficients b_A of the kernel at (p, z): the solution of
/// (z I - H(p)) b = e_{A=0}.
struct BlochCoefficients {
    std::vector<Triple> triples;
    Eigen::VectorXcd values;
    Complex b0 = 0.0;                 // coefficient of the A = 0 plane wave
    std::array<int, 3> cutoff_used{};

    Complex coefficient(const Triple& t) const;
};

/// Solves the truncated plane-wave system at (p, z). Throws NearSingular when
/// z sits within 1e-10 of an eigenvalue, NotConverged when cutoff doubling
/// fails to stabilize b_0 to the requested tolerance.
BlochCoefficients bloch_coefficients(const Vec3& p, Complex z,
                                     const ReciprocalLattice& lattice,
                                     const FourierPotential& potential,
                                     const PhysicalParams& params,
                                     const SolveOptions& options = {});

/// Lowest band at quasi-momentum p plus the A = 0 weights of the full
/// truncated spectrum (the residues of b_0 in z).
struct BandSolution {
    double eps0 = 0.0;                 // lowest eigenvalue
    double psi0 = 0.0;                 // |<A=0|ground>|, phase-fixed positive
    Eigen::VectorXd eigenvalues;       // all eigenvalues, ascending
    Eigen::VectorXd band_weights;      // |<A=0|n>|^2 per band (sums to 1)
    std::array<int, 3> cutoff_used{};

    /// Poles of b_0(p, z): locations = eigenvalues, residues = band weights.
    contour::PoleSet pole_set() const;
};

BandSolution ground_band(const Vec3& p, const ReciprocalLattice& lattice,
                         const FourierPotential& potential, const PhysicalParams& params,
                         const SolveOptions& options = {});

enum class BandMode {
    ground, // exp(-eps_0/tau) psi_0^2 only
    full    // sum_n |psi_{n,0}|^2 exp(-eps_n/tau)
};

/// Crystal momentum distribution (V A_norm / (2 pi hbar)^d) v_0 psi_0^2(p)
/// exp(-eps_0(p)/tau) (ground mode), with d the lattice dimension and v_0 the
/// elementary cell volume. The full mode keeps every band.
double rho1_momentum_crystal(const Vec3& p, const ReciprocalLattice& lattice,
                             const FourierPotential& potential, const PhysicalParams& params,
                             double A_norm, BandMode mode = BandMode::ground,
                             const SolveOptions& options = {});

/// A_norm fixed by requiring the distribution to integrate to N on the grid.
double normalization_constant_crystal(const ReciprocalLattice& lattice,
                                      const FourierPotential& potential,
                                      const PhysicalParams& params, const MomentumGrid& grid,
                                      BandMode mode = BandMode::ground,
                                      const SolveOptions& options = {});

/// Selects the volume term of a coefficient set: the b_{000} component, which
/// is the only one surviving a whole-period position integral.
Complex volume_term_extraction(const BlochCoefficients& coefficients);

} // namespace momrep::crystal

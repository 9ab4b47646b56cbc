#pragma once

#include <memory>
#include <optional>
#include <span>

#include "momrep/contour.hpp"
#include "momrep/core.hpp"
#include "momrep/crystal.hpp"

namespace momrep::wigner {

/// Supplier of the s-particle kernel v_s(x_s, m_s, z). When the z-poles of the
/// kernel are known (self-adjoint problems), poles() returns them and the
/// z-integration is done exactly by residues; otherwise the contour quadrature
/// path is used.
class VsProvider {
public:
    virtual ~VsProvider() = default;
    virtual Complex eval(std::span<const Vec3> x, std::span<const Vec3> p, Complex z) const = 0;
    virtual std::optional<contour::PoleSet> poles(std::span<const Vec3> x,
                                                  std::span<const Vec3> p) const {
        return std::nullopt;
    }
};

/// Ideal-gas kernel v_s = 1 / (z - sum_j p_j^2 / 2m) for s in {1, 2}; single
/// pole at the total kinetic energy with residue 1.
class IdealGasVs final : public VsProvider {
public:
    explicit IdealGasVs(const PhysicalParams& params) : params_(params) {}
    Complex eval(std::span<const Vec3> x, std::span<const Vec3> p, Complex z) const override;
    std::optional<contour::PoleSet> poles(std::span<const Vec3> x,
                                          std::span<const Vec3> p) const override;

private:
    PhysicalParams params_;
};

/// Single-particle kernel of a periodic potential: v_1(r, p, z) =
/// sum_A b_A(p, z) exp(i A . r). Poles sit at the Bloch eigenvalues with
/// residues psi_{n,0} u_n(r); the last quasi-momentum is cached so scans that
/// keep p fixed while sweeping r stay cheap.
class CrystalVs final : public VsProvider {
public:
    CrystalVs(crystal::ReciprocalLattice lattice, crystal::FourierPotential potential,
              PhysicalParams params);
    ~CrystalVs() override; // out of line: the cache type is private to the implementation
    Complex eval(std::span<const Vec3> x, std::span<const Vec3> p, Complex z) const override;
    std::optional<contour::PoleSet> poles(std::span<const Vec3> x,
                                          std::span<const Vec3> p) const override;

private:
    struct Cache;
    const Cache& cached(const Vec3& p) const;

    crystal::ReciprocalLattice lattice_;
    crystal::FourierPotential potential_;
    PhysicalParams params_;
    mutable std::unique_ptr<Cache> cache_;
};

/// Permutation phase sum over the s-particle exchange group:
/// sum_P (+-1)^P exp[(i/hbar) sum_k r_k . (p_k - (P p)_k)]; +1 for bosons,
/// (-1)^parity for fermions. s in {1, 2} (UnsupportedOrder otherwise).
Complex exchange_sum(int s, Statistics statistics, std::span<const Vec3> x,
                     std::span<const Vec3> p, const PhysicalParams& params);

/// Full complex phase-space kernel
/// (1 / (2 pi i (2 pi hbar)^(d s) s!)) * contour integral of n_s v_s dz times
/// the exchange sum, with d the per-particle dimension. Evaluated by residues
/// when the provider knows its poles, by contour quadrature otherwise.
Complex wigner_kernel(int s, std::span<const Vec3> x, std::span<const Vec3> p, int dim,
                      const VsProvider& provider, const contour::WeightConstants& weights,
                      const contour::ContourSpec& spec, const PhysicalParams& params);

/// Real part of the kernel (the part every marginal sees; the imaginary
/// content integrates to zero over symmetric momentum grids and whole
/// position periods).
double wigner_function(int s, std::span<const Vec3> x, std::span<const Vec3> p, int dim,
                       const VsProvider& provider, const contour::WeightConstants& weights,
                       const contour::ContourSpec& spec, const PhysicalParams& params);

/// Phase-space field over a position grid x_s (s blocks of d axes) and a
/// momentum grid of the same layout. Values are the real kernel part;
/// max_abs_imag records the largest imaginary magnitude encountered.
struct WignerField {
    int s = 1;
    UniformGrid xgrid;
    UniformGrid mgrid;
    std::vector<double> values; // indexed x-major: [x_flat * mgrid.size() + m_flat]
    double max_abs_imag = 0.0;

    double at(std::size_t x_flat, std::size_t m_flat) const {
        return values[x_flat * mgrid.size() + m_flat];
    }
};

WignerField wigner_field(int s, const PositionGrid& xgrid, const MomentumGrid& mgrid,
                         const VsProvider& provider, const contour::WeightConstants& weights,
                         const contour::ContourSpec& spec, const PhysicalParams& params);

/// Momentum marginal out: rho_s(x_s) = integral of W over m_s (trapezoid, with
/// the decaying-tail requirement on the momentum grid).
GriddedDistribution marginal_position(const WignerField& field, const PhysicalParams& params);

/// Position marginal out: rho~_s(m_s) = integral of W over x_s. Box grids must
/// span V per particle; periodic grids integrate one period and are rescaled
/// by V / period.
GriddedDistribution marginal_momentum(const WignerField& field, const PhysicalParams& params);

} // namespace momrep::wigner

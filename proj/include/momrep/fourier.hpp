#pragma once

#include <vector>

#include "momrep/core.hpp"

namespace momrep::fourier {

/// Two-sided reduced density matrix sampled on the tensor square of a single
/// "side" grid of D axes (D = order x per-particle dimension). Values are
/// stored row-major over [left indices..., right indices...]; entry (L, R) is
/// reachable as values[L * side.size() + R].
class DensityMatrixGrid {
public:
    DensityMatrixGrid(int order, UniformGrid side, std::vector<Complex> values);

    int order() const { return order_; }
    const UniformGrid& side() const { return side_; }
    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }
    Complex entry(std::size_t left, std::size_t right) const {
        return values_[left * side_.size() + right];
    }

    /// Throws ValidationError if the matrix deviates from Hermitian by more
    /// than tol x max|entry|.
    void require_hermitian(double tol = 1e-10) const;

    /// Diagonal as a real distribution on the side grid. Imaginary parts above
    /// 1e-10 x max or negative excursions below -1e-12 x max are rejected;
    /// smaller negatives are clamped to zero.
    GriddedDistribution diagonal() const;

    /// Quadrature of the diagonal over the side grid.
    double trace() const;

    /// Reduced density matrix of the given order from an N-particle
    /// wavefunction sampled on an N*d-axis position grid (d = 1 desk scale):
    /// the first `order` axes survive, the rest are integrated out, and the
    /// result carries the N!/(N-order)! normalization. The wavefunction must
    /// be normalized to 1 within 1e-8.
    static DensityMatrixGrid from_wavefunction(const ComplexField& psi, int order,
                                               const PhysicalParams& params);

private:
    int order_;
    UniformGrid side_;
    std::vector<Complex> values_;
};

/// Momentum representation of a wavefunction: per conjugate axis pair a factor
/// (2 pi hbar)^(-1/2) and kernel exp(-i p x / hbar), evaluated by direct
/// trapezoid quadrature on the position grid. Requires |psi| normalized to 1
/// within 1e-8 (NotNormalized) and position spacing below pi hbar / p_max for
/// every axis (AliasingRisk).
ComplexField wavefunction_to_momentum(const ComplexField& psi, const MomentumGrid& target,
                                      const PhysicalParams& params);

/// Inverse transform with kernel exp(+i p x / hbar); same conventions.
ComplexField momentum_to_wavefunction(const ComplexField& psi_tilde, const PositionGrid& target,
                                      const PhysicalParams& params);

/// Momentum representation of a density matrix: kernel
/// exp(-i (p.x - p'.x') / hbar) with prefactor (2 pi hbar)^(-D) over the D
/// side axes. Hermiticity of the input is validated and preserved exactly.
DensityMatrixGrid dm_position_to_momentum(const DensityMatrixGrid& dm, const MomentumGrid& target,
                                          const PhysicalParams& params);

/// Inverse density-matrix transform, kernel exp(+i (p.x - p'.x') / hbar).
DensityMatrixGrid dm_momentum_to_position(const DensityMatrixGrid& dm, const PositionGrid& target,
                                          const PhysicalParams& params);

/// Regularized delta at zero momentum: V / (2 pi hbar)^3.
double delta_zero_regularized(const PhysicalParams& params);

} // namespace momrep::fourier

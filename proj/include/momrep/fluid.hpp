#pragma once

#include "momrep/contour.hpp"
#include "momrep/core.hpp"

namespace momrep::fluid {

/// Uniform-system kernel v_1(p, z) = 1 / (z - p^2 / 2m). Throws PoleHit when
/// |z - p^2/2m| < 1e-14.
Complex v1_uniform(const Vec3& p, Complex z, const PhysicalParams& params);

/// Closed-form single-particle momentum distribution of the uniform fluid:
/// N / (2 pi m tau)^(3/2) * exp(-p^2 / (2 m tau)). Requires tau > 0
/// (CondensateRegime otherwise).
double rho1_momentum_fluid(const Vec3& p, const PhysicalParams& params);

/// Dimension-adjusted closed form for d-dimensional desk-scale checks:
/// N / (2 pi m tau)^(d/2) * exp(-p^2 / (2 m tau)).
double rho1_momentum_fluid_dim(const Vec3& p, const PhysicalParams& params, int dim);

/// Same distribution evaluated through the complex-energy representation:
/// A_norm V / (2 pi hbar)^3 times the (1/2 pi i) contour integral of
/// exp(-z/tau) v_1(p, z). A contour that does not enclose p^2/2m yields ~0.
double fluid_distribution_via_contour(const Vec3& p, const PhysicalParams& params,
                                      const contour::ContourSpec& spec, double A_norm);

/// Normalization constant A fixed numerically by requiring the momentum
/// distribution to integrate to N on the given grid (the z-integration is
/// carried out exactly over the single pole). The closed-form counterpart is
/// rho (2 pi hbar^2 / (m tau))^(3/2).
double normalization_constant_fluid(const PhysicalParams& params, const MomentumGrid& grid);

/// Overload on an automatically sized grid (spacing 0.35 sqrt(m tau), half
/// extent 7.7 sqrt(m tau), 3D).
double normalization_constant_fluid(const PhysicalParams& params);

/// Closed-form value of A implied by the Maxwellian shape, for cross-checks.
double normalization_constant_fluid_closed_form(const PhysicalParams& params);

/// Fermi energy of an ideal gas of spinless fermions at density rho:
/// (hbar^2 / 2m) (6 pi^2 rho)^(2/3).
double fermi_energy_spinless(const PhysicalParams& params);

/// Zero-temperature energy parameter of the ideal spinless Fermi gas:
/// tau = (2/5) eps_F. Throws WrongStatistics for bosons.
double tau_ideal_fermi_zero_temp(const PhysicalParams& params);

} // namespace momrep::fluid

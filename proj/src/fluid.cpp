#include "momrep/fluid.hpp"

#include <cmath>

namespace momrep::fluid {

Complex v1_uniform(const Vec3& p, Complex z, const PhysicalParams& params) {
    params.validate();
    const Complex denom = z - p.squaredNorm() / (2.0 * params.mass);
    if (std::abs(denom) < 1e-14)
        throw PoleHit("v1_uniform: z lies on the kinetic-energy pole p^2/2m = " +
                      std::to_string(p.squaredNorm() / (2.0 * params.mass)));
    return 1.0 / denom;
}

double rho1_momentum_fluid_dim(const Vec3& p, const PhysicalParams& params, int dim) {
    params.validate();
    params.require_continuous_tau("rho1_momentum_fluid");
    const double mt = params.mass * params.tau;
    return static_cast<double>(params.n_particles) /
           std::pow(2.0 * M_PI * mt, 0.5 * dim) *
           std::exp(-p.squaredNorm() / (2.0 * mt));
}

double rho1_momentum_fluid(const Vec3& p, const PhysicalParams& params) {
    return rho1_momentum_fluid_dim(p, params, 3);
}

double fluid_distribution_via_contour(const Vec3& p, const PhysicalParams& params,
                                      const contour::ContourSpec& spec, double A_norm) {
    params.validate();
    params.require_continuous_tau("fluid_distribution_via_contour");
    const Complex loop = contour::contour_integral(
        [&](Complex z) { return std::exp(-z / params.tau) * v1_uniform(p, z, params); }, spec);
    const double prefactor =
        A_norm * params.volume / std::pow(2.0 * M_PI * params.hbar, 3);
    return prefactor * loop.real();
}

double normalization_constant_fluid(const PhysicalParams& params, const MomentumGrid& grid) {
    params.validate();
    params.require_continuous_tau("normalization_constant_fluid");
    // z-integration of exp(-z/tau) v_1 collapses onto the single simple pole
    // at p^2/2m; the remaining momentum integral fixes A via the N-sum rule.
    const double mt = params.mass * params.tau;
    std::vector<double> values(grid.size());
    int idx[kMaxAxes];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.unflatten(i, idx);
        const Vec3 p = grid.point3(idx);
        values[i] = std::exp(-p.squaredNorm() / (2.0 * mt));
    }
    const double unnormalized =
        params.volume / std::pow(2.0 * M_PI * params.hbar, 3) *
        quadrature(GriddedDistribution(grid, std::move(values)));
    return static_cast<double>(params.n_particles) / unnormalized;
}

double normalization_constant_fluid(const PhysicalParams& params) {
    params.require_continuous_tau("normalization_constant_fluid");
    const double sigma = std::sqrt(params.mass * params.tau);
    const double spacing = 0.35 * sigma;
    const int half_points = static_cast<int>(std::ceil(7.7 * sigma / spacing));
    return normalization_constant_fluid(params, MomentumGrid::cubic(3, spacing, half_points));
}

double normalization_constant_fluid_closed_form(const PhysicalParams& params) {
    params.validate();
    params.require_continuous_tau("normalization_constant_fluid_closed_form");
    const double thermal = 2.0 * M_PI * params.hbar * params.hbar / (params.mass * params.tau);
    return params.density * std::pow(thermal, 1.5);
}

double fermi_energy_spinless(const PhysicalParams& params) {
    params.validate();
    return params.hbar * params.hbar / (2.0 * params.mass) *
           std::pow(6.0 * M_PI * M_PI * params.density, 2.0 / 3.0);
}

double tau_ideal_fermi_zero_temp(const PhysicalParams& params) {
    params.validate();
    if (params.statistics != Statistics::fermi)
        throw WrongStatistics("tau_ideal_fermi_zero_temp: defined for Fermi statistics only");
    return 0.4 * fermi_energy_spinless(params);
}

} // namespace momrep::fluid

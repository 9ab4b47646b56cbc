#pragma once

#include <functional>
#include <string>
#include <vector>

#include "momrep/core.hpp"

namespace momrep::hierarchy {

/// Reduction of a residual field: largest and root-mean-square magnitudes,
/// both divided by the equation's natural scale (|z| + max|U| + 1 for the
/// kernel equation, max|U| + 1 for the effective-potential balance), plus a
/// descriptor of the grid the check ran on.
struct ResidualReport {
    double max_abs_residual = 0.0;
    double rms_residual = 0.0;
    std::string grid;
};

/// Pair potential supplied as callables: K(r) and its gradient with respect
/// to the separation vector r.
struct PairPotential {
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
};

/// Unnormalized residual field of the single-particle kernel equation
/// (hbar^2/2m) lap v + (i hbar / m) p . grad v + [z - p^2/2m - U_1] v - 1
/// with 4th-order central differences. Periodic grids wrap; box and decaying
/// grids are evaluated on the two-node interior margin (boundary entries 0).
ComplexField v1_equation_residual_field(const ComplexField& v, const Vec3& p, Complex z,
                                        const GriddedDistribution& u1,
                                        const PhysicalParams& params);

/// Reduced residual of the kernel equation, normalized by |z| + max|U_1| + 1.
ResidualReport v1_equation_residual(const ComplexField& v, const Vec3& p, Complex z,
                                    const GriddedDistribution& u1, const PhysicalParams& params);

/// Same check with a built-in stencil convergence control: v and U_1 are
/// resampled on the given grid and on its spacing-halved refinement. Throws
/// GridTooCoarse when the refined max residual grows by more than 4x (a
/// smooth field must not get worse under refinement); returns the refined
/// report otherwise.
ResidualReport v1_equation_residual_checked(const std::function<Complex(const Vec3&)>& v,
                                            const std::function<double(const Vec3&)>& u1,
                                            const Vec3& p, Complex z, const PositionGrid& grid,
                                            const PhysicalParams& params);

/// Inputs of the effective-potential balance at order s: the s- and
/// (s+1)-particle densities, the pair potential, and the candidate effective
/// potential U_s on the s-particle grid. The leading s*d axes of the
/// (s+1)-particle grid must match the s-particle grid axis for axis.
struct ClosureInput {
    int s = 1;
    // Placeholder 3-point grids so the struct is default-constructible; every
    // field must be assigned before use (validate() rejects the placeholders).
    GriddedDistribution rho_s{PositionGrid::cubic(1, 1.0, 1)};
    GriddedDistribution rho_s_plus_1{PositionGrid::cubic(1, 1.0, 1)};
    PairPotential pair_potential;
    GriddedDistribution u_s{PositionGrid::cubic(1, 1.0, 1)};

    void validate() const;
};

/// Unnormalized componentwise residual of
/// rho_s grad_1 U_s - rho_s grad_1 sum_{j>=2} K(r_1 - r_j)
///   - integral rho_{s+1} grad_1 K(r_1 - r_{s+1}) dr_{s+1},
/// one field per gradient component. Separations use the minimum image on
/// periodic grids. Throws RangeNotCovered when |K| at the integration-domain
/// boundary exceeds 1e-8 x its maximum (the potential range is truncated).
std::vector<GriddedDistribution> effective_potential_residual_field(const ClosureInput& input);

/// Reduced componentwise residual, normalized by max|U_s| + 1.
ResidualReport effective_potential_residual(const ClosureInput& input);

} // namespace momrep::hierarchy

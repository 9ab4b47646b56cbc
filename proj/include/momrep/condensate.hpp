#pragma once

#include <optional>
#include <vector>

#include "momrep/core.hpp"
#include "momrep/crystal.hpp"

namespace momrep::condensate {

/// Macroscopically occupied single-particle state: N_c particles in the
/// current-carrying orbital u_1(r) exp(i p0 . r / hbar), with u_1 = 1 for the
/// uniform superfluid or a normalized plane-wave expansion over a reciprocal
/// lattice for the crystal case (sum |c|^2 = 1).
struct CondensateSpec {
    double n_condensate = 0.0;
    Vec3 p0 = Vec3::Zero();
    std::vector<std::pair<crystal::Triple, Complex>> coefficients; // empty => u_1 = 1
    std::optional<crystal::ReciprocalLattice> lattice;

    /// Throws ValidationError / NotNormalized on inconsistent input.
    void validate() const;

    bool has_structure() const;
    double coefficient_norm() const;
};

/// Uniform condensate: a single exact peak of weight N_c at p0. Requires the
/// spec to carry no lattice (SpecHasLattice) and a trivial orbital.
DeltaPeakMeasure condensate_fluid_distribution(const CondensateSpec& spec);

/// Crystal condensate: one exact peak per expansion coefficient, weight
/// N_c |c_lmn|^2 at p0 + hbar A_lmn; zero-weight entries are dropped.
/// Throws NotNormalized unless sum |c|^2 = 1 within 1e-12.
DeltaPeakMeasure condensate_crystal_distribution(const CondensateSpec& spec,
                                                 const PhysicalParams& params);

/// First moment of an exact measure: sum_i weight_i location_i.
Vec3 total_momentum(const DeltaPeakMeasure& measure);

/// Condensate contribution to the one-particle position density matrix:
/// rho_c exp(i p0 (r - r') / hbar) u_1(r) conj(u_1(r')), rho_c = N_c / V.
Complex condensate_position_matrix(const CondensateSpec& spec, const Vec3& r, const Vec3& rp,
                                   const PhysicalParams& params);

} // namespace momrep::condensate

#include "momrep/condensate.hpp"

#include <cmath>

namespace momrep::condensate {

namespace {

bool is_zero_triple(const crystal::Triple& t) { return t[0] == 0 && t[1] == 0 && t[2] == 0; }

} // namespace

bool CondensateSpec::has_structure() const {
    for (const auto& [t, c] : coefficients)
        if (!is_zero_triple(t) && std::abs(c) > 0.0) return true;
    return false;
}

double CondensateSpec::coefficient_norm() const {
    double total = 0.0;
    for (const auto& [t, c] : coefficients) total += std::norm(c);
    return total;
}

void CondensateSpec::validate() const {
    if (!(n_condensate >= 0.0))
        throw ValidationError("CondensateSpec: n_condensate must be >= 0");
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        for (std::size_t j = i + 1; j < coefficients.size(); ++j)
            if (coefficients[i].first == coefficients[j].first)
                throw ValidationError("CondensateSpec: duplicate coefficient triple");
    if (!coefficients.empty() && std::abs(coefficient_norm() - 1.0) > 1e-12)
        throw NotNormalized("CondensateSpec: sum |c|^2 = " +
                            std::to_string(coefficient_norm()) +
                            ", expected 1 within 1e-12");
    if (has_structure() && !lattice.has_value())
        throw ValidationError("CondensateSpec: expansion coefficients beyond (0,0,0) "
                              "require a lattice");
    if (lattice) lattice->validate();
}

DeltaPeakMeasure condensate_fluid_distribution(const CondensateSpec& spec) {
    spec.validate();
    if (spec.lattice)
        throw SpecHasLattice("condensate_fluid_distribution: spec carries a lattice; use "
                             "condensate_crystal_distribution");
    if (spec.has_structure())
        throw SpecHasLattice("condensate_fluid_distribution: orbital is not uniform");
    if (spec.n_condensate == 0.0) return DeltaPeakMeasure{};
    DeltaPeakMeasure measure({DeltaPeak{spec.n_condensate, spec.p0}});
    measure.require_total(spec.n_condensate);
    return measure;
}

DeltaPeakMeasure condensate_crystal_distribution(const CondensateSpec& spec,
                                                 const PhysicalParams& params) {
    spec.validate();
    params.validate();
    if (!spec.lattice)
        throw ValidationError("condensate_crystal_distribution: spec carries no lattice");
    if (spec.coefficients.empty())
        throw NotNormalized("condensate_crystal_distribution: coefficient list is empty");
    if (spec.n_condensate == 0.0) return DeltaPeakMeasure{};

    std::vector<DeltaPeak> peaks;
    peaks.reserve(spec.coefficients.size());
    for (const auto& [t, c] : spec.coefficients) {
        const double weight = spec.n_condensate * std::norm(c);
        if (weight == 0.0) continue; // zero-weight entries never become peaks
        peaks.push_back(DeltaPeak{weight, spec.p0 + params.hbar * spec.lattice->vector(t)});
    }
    DeltaPeakMeasure measure(std::move(peaks));
    measure.require_total(spec.n_condensate);
    return measure;
}

Vec3 total_momentum(const DeltaPeakMeasure& measure) {
    Vec3 total = Vec3::Zero();
    for (const DeltaPeak& pk : measure.peaks()) total += pk.weight * pk.location;
    return total;
}

Complex condensate_position_matrix(const CondensateSpec& spec, const Vec3& r, const Vec3& rp,
                                   const PhysicalParams& params) {
    spec.validate();
    params.validate();
    const double rho_c = spec.n_condensate / params.volume;
    const Complex phase = std::polar(1.0, spec.p0.dot(r - rp) / params.hbar);

    Complex u_r = 1.0, u_rp = 1.0;
    if (!spec.coefficients.empty()) {
        u_r = 0.0;
        u_rp = 0.0;
        for (const auto& [t, c] : spec.coefficients) {
            const Vec3 A = spec.lattice ? spec.lattice->vector(t) : Vec3::Zero();
            u_r += c * std::polar(1.0, A.dot(r));
            u_rp += c * std::polar(1.0, A.dot(rp));
        }
    }
    return rho_c * phase * u_r * std::conj(u_rp);
}

} // namespace momrep::condensate

#include "momrep/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>

#include "momrep/condensate.hpp"
#include "momrep/contour.hpp"
#include "momrep/core.hpp"
#include "momrep/crystal.hpp"
#include "momrep/errors.hpp"
#include "momrep/fluid.hpp"
#include "momrep/fourier.hpp"
#include "momrep/hierarchy.hpp"
#include "momrep/runner.hpp"
#include "momrep/wigner.hpp"

namespace momrep::validate {

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult check_le(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, measured <= threshold};
}

CheckResult check_ge(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, measured >= threshold};
}

SuiteResult finish(std::string name, std::vector<CheckResult> checks) {
    SuiteResult suite;
    suite.name = std::move(name);
    suite.checks = std::move(checks);
    suite.pass = std::all_of(suite.checks.begin(), suite.checks.end(),
                             [](const CheckResult& c) { return c.pass; });
    return suite;
}

SuiteResult timed(const std::function<SuiteResult()>& body) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult suite = body();
    suite.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return suite;
}

double max_abs_field(const GriddedDistribution& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

} // namespace

SuiteResult suite_fluid_closed_form() {
    return timed([] {
        const PhysicalParams params = make_params(1.0, 100, 1000.0);
        const double a_closed = fluid::normalization_constant_fluid_closed_form(params);
        const double a_num = fluid::normalization_constant_fluid(params);
        const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 8.0);
        double sweep_dev = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Vec3 p = (4.0 * i / 19.0) * Vec3::UnitX();
            const double via = fluid::fluid_distribution_via_contour(p, params, spec, a_closed);
            const double ref = fluid::rho1_momentum_fluid(p, params);
            sweep_dev = std::max(sweep_dev, std::abs(via - ref) / ref);
        }
        return finish("fluid_closed_form",
                      {check_le("contour_vs_closed_form_rel", sweep_dev, 1e-7),
                       check_le("normalization_constant_rel",
                                std::abs(a_num - a_closed) / a_closed, 1e-6)});
    });
}

SuiteResult suite_residue_contour_duality() {
    return timed([] {
        const PhysicalParams params = make_params(1.0, 1, 1.0);
        std::mt19937 rng(20240817u);
        std::uniform_real_distribution<double> loc(0.2, 4.8);
        std::uniform_real_distribution<double> res(-2.0, 2.0);
        std::uniform_int_distribution<int> count(1, 4);
        const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 5.0);
        double worst = 0.0;
        double worst_imag = 0.0;
        for (int k = 0; k < 50; ++k) {
            contour::PoleSet set;
            const int n = count(rng);
            while (static_cast<int>(set.poles.size()) < n) {
                const double candidate = loc(rng);
                bool far = true;
                for (const auto& pole : set.poles) {
                    if (std::abs(pole.location - candidate) < 5e-2) far = false;
                }
                if (far) set.poles.push_back({candidate, Complex(res(rng), 0.0)});
            }
            double total_residue = 0.0;
            for (double w : contour::residue_weights(set, params)) total_residue += w;
            const auto f = [&](Complex z) {
                Complex sum = 0.0;
                for (const auto& pole : set.poles) sum += pole.residue / (z - pole.location);
                return std::exp(-z / params.tau) * sum;
            };
            const Complex total_contour = contour::contour_integral(f, spec);
            worst = std::max(worst, std::abs(total_residue - total_contour.real()) /
                                        std::max(1.0, std::abs(total_residue)));
            worst_imag = std::max(worst_imag, std::abs(total_contour.imag()));
        }
        return finish("residue_contour_duality", {check_le("total_agreement", worst, 1e-8),
                                                  check_le("imaginary_leak", worst_imag, 1e-9)});
    });
}

SuiteResult suite_fourier_consistency() {
    return timed([] {
        const PhysicalParams params = make_params(1.0, 5, 50.0);
        const PositionGrid xg = PositionGrid::cubic(1, 0.08, 128, GridDomain::decaying);
        const MomentumGrid mg = MomentumGrid::cubic(1, 0.08, 128);
        struct Packet {
            double sigma, x0, k;
        };
        const Packet packets[10] = {{1.0, 0.0, 0.0},  {0.7, 0.0, 0.0},  {1.3, 0.0, 0.0},
                                    {1.0, 1.0, 0.0},  {1.0, -1.5, 0.0}, {1.0, 0.0, 2.0},
                                    {1.0, 0.0, -3.0}, {0.8, 1.0, 2.0},  {1.2, -1.0, -2.0},
                                    {0.9, 0.5, 1.5}};
        auto make_packet = [&](const Packet& w) {
            ComplexField psi(xg);
            for (std::size_t i = 0; i < xg.size(); ++i) {
                const double x = xg.coordinate(0, static_cast<int>(i));
                psi[i] = std::pow(kPi * w.sigma * w.sigma, -0.25) *
                         std::exp(-(x - w.x0) * (x - w.x0) / (2.0 * w.sigma * w.sigma)) *
                         std::polar(1.0, w.k * x);
            }
            return psi;
        };
        double parseval_dev = 0.0;
        double roundtrip_dev = 0.0;
        for (const Packet& w : packets) {
            const ComplexField psi = make_packet(w);
            const ComplexField tilde = fourier::wavefunction_to_momentum(psi, mg, params);
            GriddedDistribution density(mg);
            for (std::size_t i = 0; i < mg.size(); ++i) density[i] = std::norm(tilde[i]);
            parseval_dev = std::max(parseval_dev, std::abs(quadrature(density) - 1.0));
            const ComplexField back = fourier::momentum_to_wavefunction(tilde, xg, params);
            for (std::size_t i = 0; i < xg.size(); ++i) {
                roundtrip_dev = std::max(roundtrip_dev, std::abs(back[i] - psi[i]));
            }
        }
        double trace_dev = 0.0;
        for (int c : {0, 3, 5}) {
            const ComplexField psi = make_packet(packets[c]);
            const fourier::DensityMatrixGrid dm =
                fourier::DensityMatrixGrid::from_wavefunction(psi, 1, params);
            const double trace_x = dm.trace();
            const fourier::DensityMatrixGrid dm_m =
                fourier::dm_position_to_momentum(dm, mg, params);
            trace_dev = std::max(trace_dev,
                                 std::abs(dm_m.trace() - trace_x) / std::abs(trace_x));
        }
        return finish("fourier_consistency", {check_le("parseval", parseval_dev, 1e-8),
                                              check_le("round_trip", roundtrip_dev, 1e-8),
                                              check_le("dm_trace_rel", trace_dev, 1e-6)});
    });
}

SuiteResult suite_wigner_marginals() {
    return timed([] {
        std::vector<CheckResult> checks;
        // Uniform one-particle case: both marginals have closed forms.
        {
            const PhysicalParams params = make_params(1.0, 50, 20.0);
            const double a_norm =
                params.density *
                std::sqrt(2.0 * kPi * params.hbar * params.hbar / (params.mass * params.tau));
            const contour::WeightConstants weights(a_norm, params, 1);
            const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 32.0);
            const PositionGrid xg = PositionGrid::cubic(1, 1.25, 8, GridDomain::box);
            const MomentumGrid mg = MomentumGrid::cubic(1, 0.1, 80);
            const wigner::IdealGasVs provider(params);
            const wigner::WignerField field =
                wigner::wigner_field(1, xg, mg, provider, weights, spec, params);
            const GriddedDistribution marg_m = wigner::marginal_momentum(field, params);
            double dev_m = 0.0;
            double ref_peak = 0.0;
            for (std::size_t i = 0; i < mg.size(); ++i) {
                const Vec3 p = mg.coordinate(0, static_cast<int>(i)) * Vec3::UnitX();
                ref_peak = std::max(ref_peak, fluid::rho1_momentum_fluid_dim(p, params, 1));
            }
            for (std::size_t i = 0; i < mg.size(); ++i) {
                const Vec3 p = mg.coordinate(0, static_cast<int>(i)) * Vec3::UnitX();
                dev_m = std::max(dev_m,
                                 std::abs(marg_m[i] - fluid::rho1_momentum_fluid_dim(p, params, 1)) /
                                     ref_peak);
            }
            const GriddedDistribution marg_x = wigner::marginal_position(field, params);
            double dev_x = 0.0;
            for (std::size_t i = 0; i < xg.size(); ++i) {
                dev_x = std::max(dev_x, std::abs(marg_x[i] - params.density) / params.density);
            }
            checks.push_back(check_le("uniform_marginal_momentum", dev_m, 1e-6));
            checks.push_back(check_le("uniform_marginal_position", dev_x, 1e-6));
            checks.push_back(check_le("uniform_imaginary_part", field.max_abs_imag, 1e-12));
        }
        // Periodic one-particle case against the direct band-sum distribution.
        {
            const PhysicalParams params = make_params(1.0, 60, 60.0);
            const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(1.0, 16);
            const crystal::FourierPotential potential = crystal::FourierPotential::cosine_1d(0.2);
            const double period = 2.0 * kPi;
            const double a_norm = 0.7;
            const contour::WeightConstants weights(a_norm, params, 1);
            const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 40.0);
            const PositionGrid xg =
                PositionGrid::cubic(1, period / 128.0, 64, GridDomain::periodic);
            const MomentumGrid mg = MomentumGrid::cubic(1, 0.1, 80);
            const wigner::CrystalVs provider(lattice, potential, params);
            const wigner::WignerField field =
                wigner::wigner_field(1, xg, mg, provider, weights, spec, params);
            const GriddedDistribution marg_m = wigner::marginal_momentum(field, params);
            double ref_peak = 0.0;
            std::vector<double> ref(mg.size());
            for (std::size_t i = 0; i < mg.size(); ++i) {
                const Vec3 p = mg.coordinate(0, static_cast<int>(i)) * Vec3::UnitX();
                ref[i] = crystal::rho1_momentum_crystal(p, lattice, potential, params,
                                                        a_norm / period,
                                                        crystal::BandMode::full);
                ref_peak = std::max(ref_peak, std::abs(ref[i]));
            }
            double dev = 0.0;
            for (std::size_t i = 0; i < mg.size(); ++i) {
                dev = std::max(dev, std::abs(marg_m[i] - ref[i]) / ref_peak);
            }
            const GriddedDistribution marg_x = wigner::marginal_position(field, params);
            const double total_m = quadrature(marg_m);
            const double total_x =
                quadrature(marg_x) * params.volume / period;
            checks.push_back(check_le("periodic_marginal_momentum", dev, 1e-6));
            checks.push_back(check_le("marginal_totals_agree",
                                      std::abs(total_m - total_x) / std::abs(total_m), 1e-8));
        }
        // Two-particle Fermi exchange vanishes identically at coincidence.
        {
            const PhysicalParams params = make_params(1.0, 2, 1.0, Statistics::fermi);
            const Vec3 x1(0.3, 0.0, 0.0), x2(-1.1, 0.0, 0.0), p(0.7, 0.0, 0.0);
            const std::vector<Vec3> xs{x1, x2};
            const std::vector<Vec3> same_p{p, p};
            const Complex ex_p = wigner::exchange_sum(2, Statistics::fermi, xs, same_p, params);
            const std::vector<Vec3> same_x{x1, x1};
            const std::vector<Vec3> ps{p, 2.0 * p};
            const Complex ex_x = wigner::exchange_sum(2, Statistics::fermi, same_x, ps, params);
            checks.push_back(
                check_le("fermi_coincidence_zero", std::max(std::abs(ex_p), std::abs(ex_x)), 0.0));
        }
        return finish("wigner_marginals", std::move(checks));
    });
}

SuiteResult suite_crystal_limits() {
    return timed([] {
        std::vector<CheckResult> checks;
        const PhysicalParams params = make_params(1.0, 100, 100.0);
        const double a = 2.0 * kPi;
        // Empty lattice inside the first zone.
        {
            const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(a, 8);
            const crystal::FourierPotential empty;
            double dev_eps = 0.0;
            double dev_psi = 0.0;
            for (int i = 0; i <= 20; ++i) {
                const double p = (-0.45 + 0.9 * i / 20.0) * params.hbar * a;
                const crystal::BandSolution band =
                    crystal::ground_band(p * Vec3::UnitX(), lattice, empty, params);
                const double free_energy = p * p / (2.0 * params.mass);
                dev_eps = std::max(dev_eps,
                                   std::abs(band.eps0 - free_energy) / (1.0 + free_energy));
                dev_psi = std::max(dev_psi, std::abs(band.psi0 - 1.0));
            }
            checks.push_back(check_le("empty_lattice_eps0", dev_eps, 1e-10));
            checks.push_back(check_le("empty_lattice_psi0", dev_psi, 1e-10));
        }
        // Zone-boundary gap vs the 2|u| perturbative oracle.
        {
            const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(a, 8);
            double worst = 0.0;
            for (double u : {0.05, 0.02}) {
                const crystal::FourierPotential potential = crystal::FourierPotential::cosine_1d(u);
                const Vec3 edge = 0.5 * params.hbar * a * Vec3::UnitX();
                const crystal::BandSolution band =
                    crystal::ground_band(edge, lattice, potential, params);
                const double gap = band.eigenvalues(1) - band.eigenvalues(0);
                worst = std::max(worst, std::abs(gap - 2.0 * u) / (2.0 * u));
            }
            checks.push_back(check_le("zone_boundary_gap_rel", worst, 0.05));
        }
        // Normalization constant is grid-independent once converged.
        {
            const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(a, 8);
            const crystal::FourierPotential potential = crystal::FourierPotential::cosine_1d(0.25);
            const MomentumGrid coarse = MomentumGrid::cubic(1, 0.04, 471);
            const MomentumGrid fine = MomentumGrid::cubic(1, 0.02, 942);
            const double a_coarse =
                crystal::normalization_constant_crystal(lattice, potential, params, coarse);
            const double a_fine =
                crystal::normalization_constant_crystal(lattice, potential, params, fine);
            checks.push_back(
                check_le("normalization_grid_independence",
                         std::abs(a_coarse / a_fine - 1.0), 1e-5));
        }
        return finish("crystal_limits", std::move(checks));
    });
}

SuiteResult suite_condensate_exactness() {
    return timed([] {
        const PhysicalParams params = make_params(1.0, 200, 100.0);
        const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(2.0 * kPi, 4);
        std::mt19937 rng(7u);
        std::uniform_int_distribution<int> draw_l(-2, 2);
        std::uniform_real_distribution<double> draw_c(-1.0, 1.0);
        std::uniform_real_distribution<double> draw_nc(1.0, 100.0);
        std::uniform_real_distribution<double> draw_p(-3.0, 3.0);
        std::uniform_int_distribution<int> draw_n(1, 5);
        double weight_dev = 0.0;
        double moment_dev = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            condensate::CondensateSpec spec;
            spec.n_condensate = draw_nc(rng);
            spec.p0 = Vec3(draw_p(rng), 0.0, 0.0);
            spec.lattice = lattice;
            const int n = draw_n(rng);
            while (static_cast<int>(spec.coefficients.size()) < n) {
                const crystal::Triple t{draw_l(rng), 0, 0};
                bool fresh = true;
                for (const auto& [existing, c] : spec.coefficients) {
                    if (existing == t) fresh = false;
                }
                if (fresh) {
                    spec.coefficients.emplace_back(t, Complex(draw_c(rng), draw_c(rng)));
                }
            }
            double norm = 0.0;
            for (const auto& [t, c] : spec.coefficients) norm += std::norm(c);
            for (auto& [t, c] : spec.coefficients) c /= std::sqrt(norm);
            const DeltaPeakMeasure measure =
                condensate::condensate_crystal_distribution(spec, params);
            weight_dev = std::max(weight_dev,
                                  std::abs(measure.total_weight() - spec.n_condensate) /
                                      spec.n_condensate);
            Vec3 expected = spec.p0;
            Vec3 shift = Vec3::Zero();
            for (const auto& [t, c] : spec.coefficients) {
                shift += params.hbar * lattice.vector(t) * std::norm(c);
            }
            expected = spec.n_condensate * (spec.p0 + shift);
            const Vec3 moment = condensate::total_momentum(measure);
            moment_dev = std::max(moment_dev,
                                  (moment - expected).norm() / (1.0 + expected.norm()));
        }
        // Zero offset keeps every peak exactly on the reciprocal lattice.
        condensate::CondensateSpec aligned;
        aligned.n_condensate = 30.0;
        aligned.p0 = Vec3::Zero();
        aligned.lattice = lattice;
        aligned.coefficients = {{{-2, 0, 0}, Complex(0.6, 0.0)},
                                {{0, 0, 0}, Complex(0.0, 0.6)},
                                {{1, 0, 0}, Complex(std::sqrt(0.28), 0.0)}};
        const DeltaPeakMeasure measure =
            condensate::condensate_crystal_distribution(aligned, params);
        double location_dev = 0.0;
        for (std::size_t i = 0; i < measure.size(); ++i) {
            const Vec3 expected =
                params.hbar * lattice.vector(aligned.coefficients[i].first);
            location_dev = std::max(
                location_dev, (measure.peaks()[i].location - expected).cwiseAbs().maxCoeff());
        }
        return finish("condensate_exactness",
                      {check_le("weights_sum_to_Nc_rel", weight_dev, 1e-12),
                       check_le("total_momentum_rel", moment_dev, 1e-12),
                       check_le("zero_offset_locations_exact", location_dev, 0.0)});
    });
}

SuiteResult suite_hierarchy_residuals() {
    return timed([] {
        std::vector<CheckResult> checks;
        const PhysicalParams params = make_params(1.0, 10, 10.0);
        // Exact uniform kernel: residual is pure roundoff.
        {
            const PositionGrid grid = PositionGrid::cubic(1, 2.0 * kPi / 64.0, 32,
                                                          GridDomain::periodic);
            const Complex z(2.0, 0.7);
            const Vec3 p = 0.6 * Vec3::UnitX();
            const Complex v_exact = 1.0 / (z - p.squaredNorm() / (2.0 * params.mass));
            ComplexField v(grid);
            for (std::size_t i = 0; i < grid.size(); ++i) v[i] = v_exact;
            const GriddedDistribution u1(grid);
            const hierarchy::ResidualReport report =
                hierarchy::v1_equation_residual(v, p, z, u1, params);
            checks.push_back(check_le("uniform_kernel_residual", report.max_abs_residual, 1e-6));

            // Sensitivity: shifting v by 0.1 must raise the residual by
            // 0.1 |z - p^2/2m| (U_1 = 0 here).
            ComplexField shifted(grid);
            for (std::size_t i = 0; i < grid.size(); ++i) shifted[i] = v_exact + 0.1;
            const hierarchy::ResidualReport bumped =
                hierarchy::v1_equation_residual(shifted, p, z, u1, params);
            const double expected = 0.1 * std::abs(z - p.squaredNorm() / (2.0 * params.mass)) /
                                    (std::abs(z) + 1.0);
            checks.push_back(check_le("perturbation_sensitivity",
                                      std::abs(bumped.max_abs_residual - expected) / expected,
                                      1e-6));
        }
        // Plane-wave solution of a periodic potential: residual is the
        // 4th-order stencil error and shrinks accordingly.
        {
            const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(1.0, 8);
            const double u = 0.3;
            const crystal::FourierPotential potential = crystal::FourierPotential::cosine_1d(u);
            const Complex z(0.3, 0.8);
            const Vec3 p = 0.4 * Vec3::UnitX();
            const crystal::BlochCoefficients bc =
                crystal::bloch_coefficients(p, z, lattice, potential, params);
            auto residual_at = [&](int half) {
                const PositionGrid grid = PositionGrid::cubic(1, kPi / half, half,
                                                              GridDomain::periodic);
                ComplexField v(grid);
                GriddedDistribution u1(grid);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double x = grid.coordinate(0, static_cast<int>(i));
                    Complex sum = 0.0;
                    for (std::size_t k = 0; k < bc.triples.size(); ++k) {
                        sum += bc.values(static_cast<Eigen::Index>(k)) *
                               std::polar(1.0, lattice.vector(bc.triples[k]).x() * x);
                    }
                    v[i] = sum;
                    u1[i] = 2.0 * u * std::cos(x);
                }
                return hierarchy::v1_equation_residual(v, p, z, u1, params).max_abs_residual;
            };
            const double coarse = residual_at(32);
            const double fine = residual_at(64);
            checks.push_back(check_le("plane_wave_residual", fine, 1e-5));
            checks.push_back(check_ge("kernel_halving_ratio", coarse / fine, 8.0));
        }
        // Uniform isotropic closure: the odd integrand cancels exactly.
        {
            const double rho = 1.3;
            const double w = 0.35;
            const PositionGrid sgrid = PositionGrid::cubic(1, 2.0 * kPi / 64.0, 32,
                                                           GridDomain::periodic);
            const PositionGrid bgrid = PositionGrid::cubic(2, 2.0 * kPi / 64.0, 32,
                                                           GridDomain::periodic);
            hierarchy::ClosureInput input;
            input.s = 1;
            input.rho_s = GriddedDistribution(sgrid, std::vector<double>(sgrid.size(), rho));
            input.rho_s_plus_1 =
                GriddedDistribution(bgrid, std::vector<double>(bgrid.size(), rho * rho));
            input.u_s = GriddedDistribution(sgrid);
            input.pair_potential = {
                [w](const Vec3& r) { return std::exp(-r.squaredNorm() / (2.0 * w * w)); },
                [w](const Vec3& r) {
                    return Vec3(-r / (w * w) * std::exp(-r.squaredNorm() / (2.0 * w * w)));
                }};
            const hierarchy::ResidualReport report = hierarchy::effective_potential_residual(input);
            checks.push_back(check_le("isotropic_closure_residual", report.max_abs_residual,
                                      1e-8));
        }
        // Manufactured solution: cosine-modulated pair density against the
        // Gaussian-convolution closed form of U_1.
        {
            const double rho0 = 1.0;
            const double eps = 0.3;
            const double w = 2.0 * kPi / 16.0;
            const double amplitude = rho0 * eps * std::sqrt(2.0 * kPi) * w *
                                     std::exp(-w * w / 2.0);
            auto closure_at = [&](int half) {
                const double spacing = kPi / half;
                const PositionGrid sgrid = PositionGrid::cubic(1, spacing, half,
                                                               GridDomain::periodic);
                const PositionGrid bgrid = PositionGrid::cubic(2, spacing, half,
                                                               GridDomain::periodic);
                hierarchy::ClosureInput input;
                input.s = 1;
                GriddedDistribution rho1(sgrid);
                GriddedDistribution u1(sgrid);
                for (std::size_t i = 0; i < sgrid.size(); ++i) {
                    const double x = sgrid.coordinate(0, static_cast<int>(i));
                    rho1[i] = rho0 * (1.0 + eps * std::cos(x));
                    u1[i] = amplitude * std::cos(x);
                }
                GriddedDistribution rho2(bgrid);
                int idx[kMaxAxes] = {};
                for (std::size_t i = 0; i < bgrid.size(); ++i) {
                    bgrid.unflatten(i, idx);
                    const double x1 = bgrid.coordinate(0, idx[0]);
                    const double x2 = bgrid.coordinate(1, idx[1]);
                    rho2[i] = rho0 * (1.0 + eps * std::cos(x1)) * rho0 *
                              (1.0 + eps * std::cos(x2));
                }
                input.rho_s = std::move(rho1);
                input.rho_s_plus_1 = std::move(rho2);
                input.u_s = std::move(u1);
                input.pair_potential = {
                    [w](const Vec3& r) { return std::exp(-r.squaredNorm() / (2.0 * w * w)); },
                    [w](const Vec3& r) {
                        return Vec3(-r / (w * w) * std::exp(-r.squaredNorm() / (2.0 * w * w)));
                    }};
                return hierarchy::effective_potential_residual(input).max_abs_residual;
            };
            const double coarse = closure_at(64);
            const double fine = closure_at(128);
            checks.push_back(check_le("manufactured_closure_residual", fine, 1e-7));
            checks.push_back(check_ge("closure_halving_ratio", coarse / fine, 8.0));
        }
        return finish("hierarchy_residuals", std::move(checks));
    });
}

SuiteResult suite_fermi_special_value() {
    return timed([] {
        const PhysicalParams params = make_params(1.0, 1000000, 1.0e7, Statistics::fermi);
        const double fermi = fluid::fermi_energy_spinless(params);
        const double tau = fluid::tau_ideal_fermi_zero_temp(params);
        const double ratio_dev = std::abs(tau - 0.4 * fermi);

        // Mode counting: energy of the N-th lowest box mode p = (2 pi hbar/L) n.
        const double side = std::cbrt(params.volume);
        const double unit = 2.0 * kPi * params.hbar / side;
        const int reach = 66;
        std::vector<int> norms;
        norms.reserve(static_cast<std::size_t>(2 * reach + 1) * (2 * reach + 1) *
                      (2 * reach + 1));
        for (int l = -reach; l <= reach; ++l) {
            for (int m = -reach; m <= reach; ++m) {
                for (int n = -reach; n <= reach; ++n) {
                    norms.push_back(l * l + m * m + n * n);
                }
            }
        }
        auto nth = norms.begin() + static_cast<std::ptrdiff_t>(params.n_particles - 1);
        std::nth_element(norms.begin(), nth, norms.end());
        const double counted = unit * unit * static_cast<double>(*nth) / (2.0 * params.mass);
        return finish("fermi_special_value",
                      {check_le("tau_ratio_exact", ratio_dev, 0.0),
                       check_le("mode_counting_rel", std::abs(counted - fermi) / fermi, 0.01)});
    });
}

SuiteResult suite_export_roundtrip() {
    return timed([] {
        const double samples[] = {0.1,
                                  1.0 / 3.0,
                                  kPi,
                                  std::exp(1.0),
                                  6.02214076e23,
                                  1e-300,
                                  -2.5e-7,
                                  0.0,
                                  -0.0,
                                  123456789.123456789,
                                  7e-45,
                                  -1.7976931348623157e308};
        int mismatches = 0;
        for (double v : samples) {
            const std::string text = cli::format_double(v, 17);
            const double parsed = std::strtod(text.c_str(), nullptr);
            if (std::memcmp(&parsed, &v, sizeof(double)) != 0) ++mismatches;
        }
        return finish("export_roundtrip",
                      {check_le("bit_roundtrip_failures", static_cast<double>(mismatches), 0.0)});
    });
}

std::vector<SuiteResult> run_all_suites() {
    return {suite_fluid_closed_form(),    suite_residue_contour_duality(),
            suite_fourier_consistency(),  suite_wigner_marginals(),
            suite_crystal_limits(),       suite_condensate_exactness(),
            suite_hierarchy_residuals(),  suite_fermi_special_value(),
            suite_export_roundtrip()};
}

bool all_pass(const std::vector<SuiteResult>& suites) {
    return std::all_of(suites.begin(), suites.end(),
                       [](const SuiteResult& s) { return s.pass; });
}

nlohmann::ordered_json report_json(const std::vector<SuiteResult>& suites) {
    nlohmann::ordered_json out;
    out["report"] = "invariant-suites";
    out["pass"] = all_pass(suites);
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const SuiteResult& suite : suites) {
        nlohmann::ordered_json s;
        s["name"] = suite.name;
        s["pass"] = suite.pass;
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const CheckResult& check : suite.checks) {
            nlohmann::ordered_json c;
            c["name"] = check.name;
            c["measured"] = check.measured;
            c["threshold"] = check.threshold;
            c["pass"] = check.pass;
            checks.push_back(c);
        }
        s["checks"] = checks;
        list.push_back(s);
    }
    out["suites"] = list;
    return out;
}

} // namespace momrep::validate

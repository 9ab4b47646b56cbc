#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "momrep/errors.hpp"
#include "momrep/fluid.hpp"
#include "momrep/wigner.hpp"

using namespace momrep;

namespace {

constexpr double kPi = std::numbers::pi;

PhysicalParams uniform_params() { return make_params(1.0, 50, 20.0); }

contour::WeightConstants uniform_weights_1d(const PhysicalParams& params) {
    const double thermal = 2.0 * kPi * params.hbar * params.hbar / (params.mass * params.tau);
    return contour::WeightConstants(params.density * std::sqrt(thermal), params, 1);
}

} // namespace

TEST_CASE("single-particle exchange sum is one") {
    const PhysicalParams params = uniform_params();
    const std::array<Vec3, 1> x = {Vec3(0.3, 0.0, 0.0)};
    const std::array<Vec3, 1> p = {Vec3(1.1, 0.0, 0.0)};
    const Complex sum = wigner::exchange_sum(1, Statistics::bose, x, p, params);
    CHECK(sum == Complex(1.0, 0.0));
}

TEST_CASE("pair exchange sum interferes with the separation phase") {
    const PhysicalParams params = uniform_params();
    const std::array<Vec3, 2> x = {Vec3(0.5, 0.0, 0.0), Vec3(-0.5, 0.0, 0.0)};
    const std::array<Vec3, 2> p = {Vec3(2.0, 0.0, 0.0), Vec3(0.5, 0.0, 0.0)};
    // phase = (x1 - x2).(p1 - p2) / hbar = 1.0 * 1.5 = 1.5
    const Complex bose = wigner::exchange_sum(2, Statistics::bose, x, p, params);
    CHECK(bose.real() == doctest::Approx(1.0 + std::cos(1.5)).epsilon(1e-14));
    CHECK(bose.imag() == doctest::Approx(std::sin(1.5)).epsilon(1e-14));
    const Complex fermi = wigner::exchange_sum(2, Statistics::fermi, x, p, params);
    CHECK(fermi.real() == doctest::Approx(1.0 - std::cos(1.5)).epsilon(1e-14));
}

TEST_CASE("fermi pair exchange vanishes exactly at coincidence") {
    const PhysicalParams params = make_params(1.0, 50, 20.0, Statistics::fermi);
    const std::array<Vec3, 2> x = {Vec3(0.7, 0.0, 0.0), Vec3(-0.2, 0.0, 0.0)};
    const std::array<Vec3, 2> p_same = {Vec3(1.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0)};
    const Complex at_equal_momenta = wigner::exchange_sum(2, Statistics::fermi, x, p_same, params);
    CHECK(at_equal_momenta.real() == 0.0);
    CHECK(at_equal_momenta.imag() == 0.0);
    const std::array<Vec3, 2> x_same = {Vec3(0.7, 0.0, 0.0), Vec3(0.7, 0.0, 0.0)};
    const std::array<Vec3, 2> p = {Vec3(1.0, 0.0, 0.0), Vec3(-0.3, 0.0, 0.0)};
    const Complex at_equal_positions = wigner::exchange_sum(2, Statistics::fermi, x_same, p, params);
    CHECK(at_equal_positions.real() == 0.0);
    CHECK(at_equal_positions.imag() == 0.0);
}

TEST_CASE("orders above two are refused") {
    const PhysicalParams params = uniform_params();
    const std::array<Vec3, 3> x = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    const std::array<Vec3, 3> p = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    CHECK_THROWS_AS(wigner::exchange_sum(3, Statistics::bose, x, p, params), UnsupportedOrder);
}

TEST_CASE("ideal-gas kernel provider exposes its single kinetic pole") {
    const PhysicalParams params = uniform_params();
    const wigner::IdealGasVs provider(params);
    const std::array<Vec3, 2> x = {Vec3(0.1, 0.0, 0.0), Vec3(0.4, 0.0, 0.0)};
    const std::array<Vec3, 2> p = {Vec3(1.0, 0.0, 0.0), Vec3(2.0, 0.0, 0.0)};
    const Complex z(3.0, 1.0);
    const Complex expected = 1.0 / (z - Complex(2.5, 0.0)); // (1 + 4) / 2m
    CHECK(std::abs(provider.eval(x, p, z) - expected) < 1e-15);
    const auto poles = provider.poles(x, p);
    REQUIRE(poles.has_value());
    REQUIRE(poles->poles.size() == 1);
    CHECK(poles->poles[0].location == doctest::Approx(2.5));
    CHECK(poles->poles[0].residue == Complex(1.0, 0.0));
    CHECK_THROWS_AS(provider.eval(x, p, Complex(2.5, 0.0)), PoleHit);
}

TEST_CASE("uniform one-particle kernel matches the boltzmann closed form") {
    const PhysicalParams params = uniform_params();
    const contour::WeightConstants weights = uniform_weights_1d(params);
    const wigner::IdealGasVs provider(params);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 4.0);
    const std::array<Vec3, 1> x = {Vec3(0.7, 0.0, 0.0)};
    for (double px : {0.0, 0.5, 1.3}) {
        const std::array<Vec3, 1> p = {Vec3(px, 0.0, 0.0)};
        const double value = wigner::wigner_function(1, x, p, 1, provider, weights, spec, params);
        const double expected =
            weights.order_constant(1) * std::exp(-px * px / 2.0) / (2.0 * kPi);
        CHECK(value == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("kernel evaluation falls back to contour quadrature without pole knowledge") {
    // Same physics as IdealGasVs but with the poles() hook disabled.
    class OpaqueVs final : public wigner::VsProvider {
    public:
        explicit OpaqueVs(const PhysicalParams& params) : inner_(params) {}
        Complex eval(std::span<const Vec3> x, std::span<const Vec3> p,
                     Complex z) const override {
            return inner_.eval(x, p, z);
        }

    private:
        wigner::IdealGasVs inner_;
    };
    const PhysicalParams params = uniform_params();
    const contour::WeightConstants weights = uniform_weights_1d(params);
    const wigner::IdealGasVs exact(params);
    const OpaqueVs opaque(params);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 4.0);
    const std::array<Vec3, 1> x = {Vec3(-0.2, 0.0, 0.0)};
    const std::array<Vec3, 1> p = {Vec3(0.9, 0.0, 0.0)};
    const Complex by_residue = wigner::wigner_kernel(1, x, p, 1, exact, weights, spec, params);
    const Complex by_contour = wigner::wigner_kernel(1, x, p, 1, opaque, weights, spec, params);
    CHECK(std::abs(by_residue - by_contour) < 1e-8 * std::abs(by_residue));
}

TEST_CASE("pair kernel carries the exchange interference of the ideal gas") {
    const PhysicalParams params = uniform_params();
    const contour::WeightConstants weights = uniform_weights_1d(params);
    const wigner::IdealGasVs provider(params);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 8.0);
    const std::array<Vec3, 2> x = {Vec3(0.8, 0.0, 0.0), Vec3(-0.4, 0.0, 0.0)};
    const std::array<Vec3, 2> p = {Vec3(1.0, 0.0, 0.0), Vec3(-0.5, 0.0, 0.0)};
    const double value = wigner::wigner_function(2, x, p, 1, provider, weights, spec, params);
    const double kinetic = (1.0 + 0.25) / 2.0;
    const double phase = 1.2 * 1.5; // separation . momentum difference
    const double expected = weights.order_constant(2) * std::exp(-kinetic) *
                            (1.0 + std::cos(phase)) / (std::pow(2.0 * kPi, 2) * 2.0);
    CHECK(value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("crystal kernel provider matches the plane-wave solution and its poles") {
    const PhysicalParams params = make_params(1.0, 60, 60.0);
    const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(1.0, 16);
    const crystal::FourierPotential pot = crystal::FourierPotential::cosine_1d(0.2);
    const wigner::CrystalVs provider(lattice, pot, params);
    const Vec3 p(0.3, 0.0, 0.0);
    const Complex z(0.2, 0.7);
    const crystal::BlochCoefficients coeffs =
        crystal::bloch_coefficients(p, z, lattice, pot, params);
    for (double rx : {0.0, 1.3, -2.4}) {
        Complex expected = 0.0;
        for (std::size_t i = 0; i < coeffs.triples.size(); ++i) {
            const Vec3 a = lattice.vector(coeffs.triples[i]);
            expected += coeffs.values(static_cast<Eigen::Index>(i)) *
                        std::polar(1.0, a.x() * rx);
        }
        const std::array<Vec3, 1> x = {Vec3(rx, 0.0, 0.0)};
        const std::array<Vec3, 1> pp = {p};
        const Complex got = provider.eval(x, pp, z);
        CHECK(std::abs(got - expected) < 1e-8 * std::abs(expected));
    }
    // Pole locations are the Bloch eigenvalues; residues at r = 0 sum the
    // band amplitudes.
    const std::array<Vec3, 1> x0 = {Vec3(0.0, 0.0, 0.0)};
    const std::array<Vec3, 1> pp = {p};
    const auto poles = provider.poles(x0, pp);
    REQUIRE(poles.has_value());
    const crystal::BandSolution band = crystal::ground_band(p, lattice, pot, params);
    CHECK(poles->poles.front().location == doctest::Approx(band.eps0).epsilon(1e-12));
    Complex residue_total = 0.0;
    for (const contour::Pole& pole : poles->poles) residue_total += pole.residue;
    // sum_n psi_{n,0} u_n(0) = sum_n |<0|n>|^2-weighted completeness at r = 0.
    CHECK(residue_total.real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(residue_total.imag()) < 1e-12);
}

TEST_CASE("crystal kernel degeneracies at the zone center collapse to merged poles") {
    const PhysicalParams params = make_params(1.0, 60, 60.0);
    const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(1.0, 8);
    const crystal::FourierPotential empty;
    const wigner::CrystalVs provider(lattice, empty, params);
    const std::array<Vec3, 1> x = {Vec3(0.4, 0.0, 0.0)};
    const std::array<Vec3, 1> p = {Vec3(0.0, 0.0, 0.0)}; // +-A pairs are degenerate
    const auto poles = provider.poles(x, p);
    REQUIRE(poles.has_value());
    for (std::size_t i = 1; i < poles->poles.size(); ++i) {
        CHECK(poles->poles[i].location - poles->poles[i - 1].location > 1e-9);
    }
}

TEST_CASE("wigner field marginals recover both uniform distributions") {
    const PhysicalParams params = uniform_params(); // N = 50, V = 20, rho = 2.5
    const contour::WeightConstants weights = uniform_weights_1d(params);
    const wigner::IdealGasVs provider(params);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 40.0);
    const PositionGrid xgrid = PositionGrid::cubic(1, 1.25, 8, GridDomain::box); // extent 20 = V
    const MomentumGrid mgrid = MomentumGrid::cubic(1, 0.1, 80);
    const wigner::WignerField field =
        wigner::wigner_field(1, xgrid, mgrid, provider, weights, spec, params);
    CHECK(field.max_abs_imag < 1e-14);
    const GriddedDistribution in_x = wigner::marginal_position(field, params);
    for (std::size_t i = 0; i < in_x.size(); ++i) {
        CHECK(in_x[i] == doctest::Approx(params.density).epsilon(1e-8));
    }
    const GriddedDistribution in_m = wigner::marginal_momentum(field, params);
    for (std::size_t i = 0; i < in_m.size(); i += 20) {
        const Vec3 p(mgrid.coordinate(0, static_cast<int>(i)), 0.0, 0.0);
        CHECK(in_m[i] ==
              doctest::Approx(fluid::rho1_momentum_fluid_dim(p, params, 1)).epsilon(1e-8));
    }
    const double total = quadrature(in_m);
    CHECK(total == doctest::Approx(50.0).epsilon(1e-8));
}

TEST_CASE("box position grids must span the per-particle volume") {
    const PhysicalParams params = uniform_params();
    const contour::WeightConstants weights = uniform_weights_1d(params);
    const wigner::IdealGasVs provider(params);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 40.0);
    const PositionGrid xgrid = PositionGrid::cubic(1, 1.0, 8, GridDomain::box); // extent 16 != 20
    const MomentumGrid mgrid = MomentumGrid::cubic(1, 0.1, 80);
    const wigner::WignerField field =
        wigner::wigner_field(1, xgrid, mgrid, provider, weights, spec, params);
    CHECK_THROWS_AS(wigner::marginal_momentum(field, params), ValidationError);
}

TEST_CASE("field construction rejects grids whose axis counts disagree with the order") {
    const PhysicalParams params = uniform_params();
    const contour::WeightConstants weights = uniform_weights_1d(params);
    const wigner::IdealGasVs provider(params);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(0.0, 4.0);
    const PositionGrid xgrid = PositionGrid::cubic(1, 1.25, 8, GridDomain::box);
    const MomentumGrid mgrid = MomentumGrid::cubic(2, 0.1, 40);
    CHECK_THROWS_AS(wigner::wigner_field(1, xgrid, mgrid, provider, weights, spec, params),
                    ValidationError);
}

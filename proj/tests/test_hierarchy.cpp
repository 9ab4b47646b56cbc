#include <doctest.h>

#include <cmath>
#include <numbers>

#include "momrep/crystal.hpp"
#include "momrep/errors.hpp"
#include "momrep/hierarchy.hpp"

using namespace momrep;
using hierarchy::ClosureInput;
using hierarchy::PairPotential;
using hierarchy::ResidualReport;

namespace {

constexpr double kPi = std::numbers::pi;

GriddedDistribution constant_field(const UniformGrid& grid, double value) {
    GriddedDistribution f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = value;
    return f;
}

PairPotential gaussian_pair(double eps, double w) {
    PairPotential k;
    k.value = [eps, w](const Vec3& r) { return eps * std::exp(-r.squaredNorm() / (2.0 * w * w)); };
    k.gradient = [eps, w](const Vec3& r) {
        return Vec3(-eps * std::exp(-r.squaredNorm() / (2.0 * w * w)) / (w * w) * r);
    };
    return k;
}

} // namespace

TEST_CASE("constant kernel under constant potential satisfies the kernel equation exactly") {
    const PhysicalParams params = make_params(1.0, 10, 10.0);
    const PositionGrid grid = PositionGrid::cubic(1, 2.0 * kPi / 64, 32, GridDomain::periodic);
    const Vec3 p(0.6, 0.0, 0.0);
    const Complex z(2.0, 0.7);
    const double u0 = 0.3;
    const Complex v0 = 1.0 / (z - p.x() * p.x() / 2.0 - u0);
    ComplexField v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = v0;
    const ResidualReport report =
        hierarchy::v1_equation_residual(v, p, z, constant_field(grid, u0), params);
    CHECK(report.max_abs_residual < 1e-14);
    CHECK(report.rms_residual < 1e-14);
}

TEST_CASE("kernel-equation residual detects a wrong kernel by the expected amount") {
    const PhysicalParams params = make_params(1.0, 10, 10.0);
    const PositionGrid grid = PositionGrid::cubic(1, 2.0 * kPi / 64, 32, GridDomain::periodic);
    const Vec3 p(0.6, 0.0, 0.0);
    const Complex z(2.0, 0.7);
    const Complex v0 = 1.0 / (z - p.x() * p.x() / 2.0);
    ComplexField v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = v0 + 0.1;
    const ResidualReport report =
        hierarchy::v1_equation_residual(v, p, z, constant_field(grid, 0.0), params);
    // Off by delta v = 0.1: residual = (z - p^2/2m) * 0.1, normalized by |z| + 1.
    const double expected = 0.1 * std::abs(z - Complex(0.18, 0.0)) / (std::abs(z) + 1.0);
    CHECK(report.max_abs_residual == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("plane-wave kernel of a cosine potential passes on a fine grid") {
    const PhysicalParams params = make_params(1.0, 10, 10.0);
    const double u = 0.3;
    const crystal::ReciprocalLattice lattice = crystal::ReciprocalLattice::line(1.0, 8);
    const crystal::FourierPotential pot = crystal::FourierPotential::cosine_1d(u);
    const Vec3 p(0.4, 0.0, 0.0);
    const Complex z(0.3, 0.8);
    const crystal::BlochCoefficients coeffs =
        crystal::bloch_coefficients(p, z, lattice, pot, params);
    auto v_fn = [&](const Vec3& r) {
        Complex sum = 0.0;
        for (std::size_t i = 0; i < coeffs.triples.size(); ++i) {
            sum += coeffs.values(static_cast<Eigen::Index>(i)) *
                   std::polar(1.0, lattice.vector(coeffs.triples[i]).dot(r));
        }
        return sum;
    };
    auto u_fn = [u](const Vec3& r) { return 2.0 * u * std::cos(r.x()); };
    const PositionGrid grid =
        PositionGrid::cubic(1, 2.0 * kPi / 64, 32, GridDomain::periodic);
    const ResidualReport report =
        hierarchy::v1_equation_residual_checked(v_fn, u_fn, p, z, grid, params);
    CHECK(report.max_abs_residual < 1e-5);
}

TEST_CASE("stencil refinement control rejects fields that roughen under refinement") {
    const PhysicalParams params = make_params(1.0, 10, 10.0);
    const double h = 0.25;
    const PositionGrid grid = PositionGrid::cubic(1, h, 16, GridDomain::box);
    // Constant on the coarse nodes, alternating-sign on the halved grid: the
    // second-difference term explodes under refinement.
    auto v_fn = [h](const Vec3& r) { return Complex(std::cos(2.0 * kPi * r.x() / h), 0.0); };
    auto u_fn = [](const Vec3&) { return 0.0; };
    CHECK_THROWS_AS(hierarchy::v1_equation_residual_checked(v_fn, u_fn, Vec3(0.3, 0.0, 0.0),
                                                            Complex(1.0, 1.0), grid, params),
                    GridTooCoarse);
}

TEST_CASE("a five-point stencil needs five points per axis") {
    const PhysicalParams params = make_params(1.0, 10, 10.0);
    const PositionGrid grid = PositionGrid::cubic(1, 0.5, 1, GridDomain::box); // 3 nodes
    ComplexField v(grid);
    CHECK_THROWS_AS(
        hierarchy::v1_equation_residual(v, Vec3::Zero(), Complex(1.0, 0.0),
                                        constant_field(grid, 0.0), params),
        ValidationError);
}

TEST_CASE("uniform isotropic densities balance the closure identically") {
    const double rho = 1.3;
    const PositionGrid sgrid = PositionGrid::cubic(1, 2.0 * kPi / 64, 32, GridDomain::periodic);
    const PositionGrid bgrid = PositionGrid::cubic(2, 2.0 * kPi / 64, 32, GridDomain::periodic);
    ClosureInput input;
    input.s = 1;
    input.rho_s = constant_field(sgrid, rho);
    input.rho_s_plus_1 = constant_field(bgrid, rho * rho);
    input.pair_potential = gaussian_pair(1.0, 0.35);
    input.u_s = constant_field(sgrid, 0.0);
    const ResidualReport report = hierarchy::effective_potential_residual(input);
    CHECK(report.max_abs_residual < 1e-8);
}

TEST_CASE("closure residual flags an effective potential that does not balance") {
    const double rho = 1.3;
    const PositionGrid sgrid = PositionGrid::cubic(1, 2.0 * kPi / 64, 32, GridDomain::periodic);
    const PositionGrid bgrid = PositionGrid::cubic(2, 2.0 * kPi / 64, 32, GridDomain::periodic);
    ClosureInput input;
    input.s = 1;
    input.rho_s = constant_field(sgrid, rho);
    input.rho_s_plus_1 = constant_field(bgrid, rho * rho);
    input.pair_potential = gaussian_pair(1.0, 0.35);
    GriddedDistribution u(sgrid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = 0.2 * std::sin(sgrid.coordinate(0, static_cast<int>(i)));
    }
    input.u_s = u;
    const ResidualReport report = hierarchy::effective_potential_residual(input);
    // rho grad u has amplitude rho * 0.2; the norm divides by max|U| + 1.
    CHECK(report.max_abs_residual == doctest::Approx(rho * 0.2 / 1.2).epsilon(1e-6));
}

TEST_CASE("closure residual field is affine in the candidate potential") {
    const PositionGrid sgrid = PositionGrid::cubic(1, 2.0 * kPi / 32, 16, GridDomain::periodic);
    const PositionGrid bgrid = PositionGrid::cubic(2, 2.0 * kPi / 32, 16, GridDomain::periodic);
    ClosureInput input;
    input.s = 1;
    input.rho_s = constant_field(sgrid, 1.0);
    input.rho_s_plus_1 = constant_field(bgrid, 1.0);
    input.pair_potential = gaussian_pair(0.7, 0.3);
    GriddedDistribution ua(sgrid);
    GriddedDistribution ub(sgrid);
    GriddedDistribution uab(sgrid);
    GriddedDistribution uzero(sgrid);
    for (std::size_t i = 0; i < sgrid.size(); ++i) {
        const double x = sgrid.coordinate(0, static_cast<int>(i));
        ua[i] = 0.3 * std::sin(x);
        ub[i] = -0.1 * std::cos(2.0 * x);
        uab[i] = ua[i] + ub[i];
    }
    auto field_for = [&](const GriddedDistribution& u) {
        ClosureInput local = input;
        local.u_s = u;
        return hierarchy::effective_potential_residual_field(local);
    };
    const auto fa = field_for(ua);
    const auto fb = field_for(ub);
    const auto fab = field_for(uab);
    const auto f0 = field_for(uzero);
    REQUIRE(fa.size() == fab.size());
    double max_dev = 0.0;
    for (std::size_t c = 0; c < fab.size(); ++c) {
        for (std::size_t i = 0; i < fab[c].size(); ++i) {
            // Affine map in u: F(a + b) + F(0) = F(a) + F(b) pointwise.
            max_dev = std::max(max_dev,
                               std::abs(fab[c][i] + f0[c][i] - fa[c][i] - fb[c][i]));
        }
    }
    CHECK(max_dev < 1e-12);
}

TEST_CASE("pair potentials wider than the integration window are refused") {
    const PositionGrid sgrid = PositionGrid::cubic(1, 2.0 * kPi / 32, 16, GridDomain::periodic);
    const PositionGrid bgrid = PositionGrid::cubic(2, 2.0 * kPi / 32, 16, GridDomain::periodic);
    ClosureInput input;
    input.s = 1;
    input.rho_s = constant_field(sgrid, 1.0);
    input.rho_s_plus_1 = constant_field(bgrid, 1.0);
    input.pair_potential = gaussian_pair(1.0, 4.0); // range comparable to the period
    input.u_s = constant_field(sgrid, 0.0);
    CHECK_THROWS_AS(hierarchy::effective_potential_residual(input), RangeNotCovered);
}

TEST_CASE("closure input validation rejects mismatched grids") {
    const PositionGrid sgrid = PositionGrid::cubic(1, 2.0 * kPi / 32, 16, GridDomain::periodic);
    const PositionGrid other = PositionGrid::cubic(1, 2.0 * kPi / 64, 32, GridDomain::periodic);
    const PositionGrid bgrid = PositionGrid::cubic(2, 2.0 * kPi / 32, 16, GridDomain::periodic);
    ClosureInput input;
    input.s = 1;
    input.rho_s = constant_field(sgrid, 1.0);
    input.rho_s_plus_1 = constant_field(bgrid, 1.0);
    input.pair_potential = gaussian_pair(1.0, 0.3);
    input.u_s = constant_field(other, 0.0);
    CHECK_THROWS_AS(input.validate(), ValidationError);
}

TEST_CASE("manufactured gaussian-smoothed cosine closes the hierarchy at fourth order") {
    // rho_1(x) = rho0 (1 + eps cos a x) with the product ansatz for rho_2 and
    // a gaussian pair potential: U_1(x) = rho0 eps sqrt(2 pi) w exp(-a^2 w^2/2) cos(a x)
    // balances the equation up to quadrature and stencil error.
    const double rho0 = 1.0;
    const double eps = 0.3;
    const double w = 2.0 * kPi / 16.0;
    const double a = 1.0;
    const double amplitude = rho0 * eps * std::sqrt(2.0 * kPi) * w * std::exp(-w * w / 2.0);
    auto closure_at = [&](int n) {
        const PositionGrid sgrid =
            PositionGrid::cubic(1, 2.0 * kPi / n, n / 2, GridDomain::periodic);
        const PositionGrid bgrid =
            PositionGrid::cubic(2, 2.0 * kPi / n, n / 2, GridDomain::periodic);
        ClosureInput input;
        input.s = 1;
        GriddedDistribution rho1(sgrid);
        for (std::size_t i = 0; i < sgrid.size(); ++i) {
            rho1[i] = rho0 * (1.0 + eps * std::cos(a * sgrid.coordinate(0, static_cast<int>(i))));
        }
        GriddedDistribution rho2(bgrid);
        for (std::size_t i = 0; i < bgrid.size(); ++i) {
            int idx[kMaxAxes] = {};
            bgrid.unflatten(i, idx);
            const double x1 = bgrid.coordinate(0, idx[0]);
            const double x2 = bgrid.coordinate(1, idx[1]);
            rho2[i] = rho0 * (1.0 + eps * std::cos(a * x1)) * rho0 *
                      (1.0 + eps * std::cos(a * x2));
        }
        GriddedDistribution u1(sgrid);
        for (std::size_t i = 0; i < sgrid.size(); ++i) {
            u1[i] = amplitude * std::cos(a * sgrid.coordinate(0, static_cast<int>(i)));
        }
        input.rho_s = rho1;
        input.rho_s_plus_1 = rho2;
        input.pair_potential = gaussian_pair(1.0, w);
        input.u_s = u1;
        return hierarchy::effective_potential_residual(input);
    };
    const ResidualReport coarse = closure_at(64);
    const ResidualReport fine = closure_at(128);
    CHECK(fine.max_abs_residual < 1e-7);
    CHECK(coarse.max_abs_residual / fine.max_abs_residual > 8.0);
}

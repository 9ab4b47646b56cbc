#include <doctest.h>

#include <cmath>
#include <numbers>

#include "momrep/crystal.hpp"
#include "momrep/errors.hpp"

using namespace momrep;
using crystal::FourierPotential;
using crystal::ReciprocalLattice;
using crystal::Triple;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("line lattice enumerates symmetric triples with the right vectors") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(2.0, 3);
    CHECK(lattice.dim == 1);
    const std::vector<Triple> triples = lattice.triples();
    REQUIRE(triples.size() == 7);
    CHECK(triples.front() == Triple{-3, 0, 0});
    CHECK(triples.back() == Triple{3, 0, 0});
    const Vec3 v = lattice.vector({2, 0, 0});
    CHECK(v.x() == doctest::Approx(4.0));
    CHECK(v.y() == 0.0);
    CHECK(lattice.cell_volume() == doctest::Approx(2.0 * kPi / 2.0));
}

TEST_CASE("lattice validation rejects degenerate bases and bad cutoffs") {
    ReciprocalLattice lattice = ReciprocalLattice::line(1.0, 4);
    lattice.cutoff[0] = 0;
    CHECK_THROWS_AS(lattice.validate(), ValidationError);
    ReciprocalLattice planar;
    planar.dim = 2;
    planar.basis = {Vec3::UnitX(), Vec3::UnitX(), Vec3::UnitZ()}; // collinear
    planar.cutoff = {2, 2, 0};
    CHECK_THROWS_AS(planar.validate(), ValidationError);
}

TEST_CASE("fourier potentials enforce the real-potential conjugation symmetry") {
    CHECK_THROWS_AS(FourierPotential({{Triple{1, 0, 0}, Complex(0.3, 0.1)}}), ValidationError);
    const FourierPotential pot = FourierPotential::cosine_1d(0.25);
    CHECK(pot.coefficient({1, 0, 0}) == Complex(0.25, 0.0));
    CHECK(pot.coefficient({-1, 0, 0}) == Complex(0.25, 0.0));
    CHECK(pot.coefficient({2, 0, 0}) == Complex(0.0, 0.0));
    CHECK(pot.max_abs() == doctest::Approx(0.25));
}

TEST_CASE("plane-wave operator carries kinetic diagonal and coupling off-diagonal") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(2.0 * kPi, 2);
    const FourierPotential pot = FourierPotential::cosine_1d(0.3);
    const PhysicalParams params = make_params(1.0, 10, 10.0);
    const Vec3 p(0.5, 0.0, 0.0);
    const Eigen::MatrixXcd h = crystal::bloch_matrix(p, lattice, {2, 0, 0}, pot, params);
    REQUIRE(h.rows() == 5);
    // Row order follows triples(): l = -2..2. Diagonal (p + hbar l a)^2 / 2m.
    for (int l = -2; l <= 2; ++l) {
        const double kinetic = std::pow(0.5 + 2.0 * kPi * l, 2) / 2.0;
        CHECK(h(l + 2, l + 2).real() == doctest::Approx(kinetic).epsilon(1e-14));
    }
    CHECK(h(0, 1).real() == doctest::Approx(0.3));
    CHECK(h(0, 2).real() == doctest::Approx(0.0));
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("empty lattice reduces to the free particle inside the first zone") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(2.0 * kPi, 8);
    const FourierPotential empty;
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    for (double frac : {-0.45, -0.2, 0.0, 0.3, 0.45}) {
        const Vec3 p(frac * 2.0 * kPi, 0.0, 0.0);
        const crystal::BandSolution band = crystal::ground_band(p, lattice, empty, params);
        CHECK(std::abs(band.eps0 - p.x() * p.x() / 2.0) < 1e-10);
        CHECK(std::abs(band.psi0 - 1.0) < 1e-10);
    }
}

TEST_CASE("weak cosine potential opens the perturbative zone-boundary gap") {
    const double a = 2.0 * kPi;
    const ReciprocalLattice lattice = ReciprocalLattice::line(a, 8);
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    const Vec3 edge(0.5 * a, 0.0, 0.0);
    for (double u : {0.05, 0.02}) {
        const crystal::BandSolution band =
            crystal::ground_band(edge, lattice, FourierPotential::cosine_1d(u), params);
        const double gap = band.eigenvalues(1) - band.eigenvalues(0);
        CHECK(gap == doctest::Approx(2.0 * u).epsilon(0.05));
    }
}

TEST_CASE("kernel coefficients solve the truncated linear system") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(1.0, 8);
    const FourierPotential pot = FourierPotential::cosine_1d(0.3);
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    const Vec3 p(0.4, 0.0, 0.0);
    const Complex z(0.3, 0.8);
    const crystal::BlochCoefficients coeffs =
        crystal::bloch_coefficients(p, z, lattice, pot, params);
    CHECK(coeffs.b0 == coeffs.coefficient({0, 0, 0}));
    const Eigen::MatrixXcd h =
        crystal::bloch_matrix(p, lattice, coeffs.cutoff_used, pot, params);
    Eigen::VectorXcd rhs = (z * Eigen::MatrixXcd::Identity(h.rows(), h.cols()) - h) * coeffs.values;
    const std::size_t zero_index = static_cast<std::size_t>(coeffs.cutoff_used[0]);
    rhs(static_cast<Eigen::Index>(zero_index)) -= 1.0;
    CHECK(rhs.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kernel coefficients refuse a z value pinned on the spectrum") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(1.0, 8);
    const FourierPotential empty;
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    const Vec3 p(0.4, 0.0, 0.0);
    const Complex z(p.x() * p.x() / 2.0, 0.0); // exactly the free eigenvalue
    CHECK_THROWS_AS(crystal::bloch_coefficients(p, z, lattice, empty, params), NearSingular);
}

TEST_CASE("band weights resolve b0 into its pole expansion") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(1.0, 8);
    const FourierPotential pot = FourierPotential::cosine_1d(0.2);
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    const Vec3 p(0.3, 0.0, 0.0);
    const crystal::BandSolution band = crystal::ground_band(p, lattice, pot, params);
    CHECK(band.band_weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(band.band_weights(0) == doctest::Approx(band.psi0 * band.psi0).epsilon(1e-12));
    // b0(z) must equal sum_n w_n / (z - eps_n) at a z off the spectrum.
    const Complex z(0.1, 0.9);
    const crystal::BlochCoefficients coeffs =
        crystal::bloch_coefficients(p, z, lattice, pot, params);
    Complex expansion = 0.0;
    const contour::PoleSet poles = band.pole_set();
    for (const contour::Pole& pole : poles.poles) {
        expansion += pole.residue / (z - pole.location);
    }
    CHECK(std::abs(expansion - coeffs.b0) < 1e-8 * std::abs(coeffs.b0));
    CHECK(crystal::volume_term_extraction(coeffs) == coeffs.b0);
}

TEST_CASE("crystal momentum distribution normalizes to N with the fitted constant") {
    const double a = 2.0 * kPi;
    const ReciprocalLattice lattice = ReciprocalLattice::line(a, 8);
    const FourierPotential pot = FourierPotential::cosine_1d(0.25);
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    const MomentumGrid grid = MomentumGrid::cubic(1, 0.04, 471);
    const double a_norm = crystal::normalization_constant_crystal(lattice, pot, params, grid);
    CHECK(a_norm > 0.0);
    GriddedDistribution rho(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 p(grid.coordinate(0, static_cast<int>(i)), 0.0, 0.0);
        rho[i] = crystal::rho1_momentum_crystal(p, lattice, pot, params, a_norm);
    }
    CHECK(quadrature(rho) == doctest::Approx(100.0).epsilon(1e-10));
}

TEST_CASE("full-band distribution dominates the ground-band one pointwise") {
    const ReciprocalLattice lattice = ReciprocalLattice::line(2.0 * kPi, 8);
    const FourierPotential pot = FourierPotential::cosine_1d(0.25);
    const PhysicalParams params = make_params(1.0, 100, 100.0);
    const Vec3 p(0.8, 0.0, 0.0);
    const double ground = crystal::rho1_momentum_crystal(p, lattice, pot, params, 1.0,
                                                         crystal::BandMode::ground);
    const double full =
        crystal::rho1_momentum_crystal(p, lattice, pot, params, 1.0, crystal::BandMode::full);
    CHECK(full > ground);
    CHECK(full < ground * 1.5); // higher bands are boltzmann-suppressed at tau = 1
}

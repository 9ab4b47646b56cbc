#pragma once

#include <functional>
#include <vector>

#include "momrep/core.hpp"

namespace momrep::contour {

/// Closed rectangular contour in the complex energy plane: corners
/// (re_min -i im_height) .. (re_max + i im_height), traversed counterclockwise.
struct ContourSpec {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_height = 1.0;
    int nodes_per_edge = 128;

    void validate() const;

    /// Default rectangle for a spectrum living in [eps_min, eps_max]: real
    /// margin 1 on either side, imaginary half-height 1.
    static ContourSpec around_spectrum(double eps_min, double eps_max,
                                       int nodes_per_edge = 128);
};

/// Simple pole of a meromorphic integrand: real location on the energy axis,
/// complex residue.
struct Pole {
    double location = 0.0;
    Complex residue = 0.0;
};

struct PoleSet {
    std::vector<Pole> poles;
};

/// (1 / 2 pi i) times the closed contour integral of f, evaluated by
/// composite Gauss-Legendre panels on each edge (counterclockwise).
/// Throws PoleOnPath if |f| exceeds 1e100 on any node.
Complex contour_integral(const std::function<Complex(Complex)>& f, const ContourSpec& spec);

/// Equilibrium weights of the enclosed poles of exp(-z/tau) * sum_i r_i/(z-a_i):
/// weight_i = r_i * exp(-a_i / tau). Residues must be real (to 1e-9 relative);
/// the total integral equals the sum of the returned weights.
/// Throws DegeneratePoles if two locations sit within 1e-10 of each other.
std::vector<double> residue_weights(const PoleSet& poles, const PhysicalParams& params);

/// Complex-valued counterpart used internally when residues are not real:
/// sum_i residue_i * exp(-location_i / tau).
Complex residue_sum(const PoleSet& poles, double tau);

/// Prefactors of the equilibrium weight n_s(z) = A_s exp(-z/tau) with
/// A_s = s! rho^(s-1) (2 pi hbar^2 / (m tau))^(dim (s-1)/2) A. dim defaults to
/// 3; desk-scale 1D/2D paths pass the reduced dimension.
struct WeightConstants {
    double A = 0.0;
    int dim = 3;
    std::array<double, 2> A_s{}; // orders s = 1, 2

    WeightConstants(double A_in, const PhysicalParams& params, int dim_in = 3);
    double order_constant(int s) const;
};

/// Equilibrium weight n_s(z) = A_s exp(-z/tau). Requires tau > 0 and s in {1,2}.
Complex n_s(Complex z, int s, const WeightConstants& weights, const PhysicalParams& params);

} // namespace momrep::contour

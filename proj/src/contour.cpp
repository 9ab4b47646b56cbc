#include "momrep/contour.hpp"

#include <cmath>

namespace momrep::contour {

namespace {

constexpr double kOverflowGuard = 1e100;
constexpr int kPanelOrder = 16;

const quadrules::Rule& panel_rule() {
    static const quadrules::Rule rule = quadrules::gauss_legendre(kPanelOrder);
    return rule;
}

/// Straight-line integral of f from z0 to z1 with composite Gauss-Legendre
/// panels (at least nodes_per_edge nodes in total).
Complex edge_integral(const std::function<Complex(Complex)>& f, Complex z0, Complex z1,
                      int nodes_per_edge) {
    const int panels = std::max(1, (nodes_per_edge + kPanelOrder - 1) / kPanelOrder);
    const quadrules::Rule& rule = panel_rule();
    const Complex step = (z1 - z0) / static_cast<double>(panels);
    Complex total = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
        const Complex a = z0 + step * static_cast<double>(pnl);
        const Complex mid = a + 0.5 * step;
        for (int k = 0; k < kPanelOrder; ++k) {
            const Complex z = mid + 0.5 * step * rule.nodes[static_cast<std::size_t>(k)];
            const Complex fz = f(z);
            if (!(std::abs(fz) < kOverflowGuard))
                throw PoleOnPath("contour_integral: integrand magnitude exceeds overflow "
                                 "guard at node (" + std::to_string(z.real()) + ", " +
                                 std::to_string(z.imag()) + "i)");
            total += fz * (0.5 * step * rule.weights[static_cast<std::size_t>(k)]);
        }
    }
    return total;
}

} // namespace

void ContourSpec::validate() const {
    if (!(re_min < re_max))
        throw ValidationError("ContourSpec: re_min must be < re_max");
    if (!(im_height > 0.0))
        throw ValidationError("ContourSpec: im_height must be > 0");
    if (nodes_per_edge < 64)
        throw ValidationError("ContourSpec: nodes_per_edge must be >= 64");
}

ContourSpec ContourSpec::around_spectrum(double eps_min, double eps_max, int nodes_per_edge) {
    ContourSpec spec;
    spec.re_min = eps_min - 1.0;
    spec.re_max = eps_max + 1.0;
    spec.im_height = 1.0;
    spec.nodes_per_edge = nodes_per_edge;
    spec.validate();
    return spec;
}

Complex contour_integral(const std::function<Complex(Complex)>& f, const ContourSpec& spec) {
    spec.validate();
    const Complex bl(spec.re_min, -spec.im_height);
    const Complex br(spec.re_max, -spec.im_height);
    const Complex tr(spec.re_max, spec.im_height);
    const Complex tl(spec.re_min, spec.im_height);
    Complex loop = edge_integral(f, bl, br, spec.nodes_per_edge) +
                   edge_integral(f, br, tr, spec.nodes_per_edge) +
                   edge_integral(f, tr, tl, spec.nodes_per_edge) +
                   edge_integral(f, tl, bl, spec.nodes_per_edge);
    return loop / Complex(0.0, 2.0 * M_PI);
}

namespace {

void require_simple(const PoleSet& poles) {
    const std::vector<Pole>& p = poles.poles;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i].location) || !std::isfinite(p[i].residue.real()) ||
            !std::isfinite(p[i].residue.imag()))
            throw ValidationError("residue_weights: poles must have finite locations and "
                                  "residues");
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (std::abs(p[i].location - p[j].location) < 1e-10)
                throw DegeneratePoles("residue_weights: pole locations " +
                                      std::to_string(p[i].location) + " and " +
                                      std::to_string(p[j].location) +
                                      " coincide within 1e-10");
    }
}

} // namespace

std::vector<double> residue_weights(const PoleSet& poles, const PhysicalParams& params) {
    params.require_continuous_tau("residue_weights");
    require_simple(poles);
    std::vector<double> weights;
    weights.reserve(poles.poles.size());
    for (const Pole& pole : poles.poles) {
        const double imag_frac =
            std::abs(pole.residue.imag()) / (1.0 + std::abs(pole.residue));
        if (imag_frac > 1e-9)
            throw ValidationError("residue_weights: residue at " +
                                  std::to_string(pole.location) +
                                  " has a non-negligible imaginary part; use the complex "
                                  "residue sum instead");
        weights.push_back(pole.residue.real() * std::exp(-pole.location / params.tau));
    }
    return weights;
}

Complex residue_sum(const PoleSet& poles, double tau) {
    if (!(tau > 0.0))
        throw CondensateRegime("residue_sum: tau must be > 0");
    require_simple(poles);
    Complex total = 0.0;
    for (const Pole& pole : poles.poles)
        total += pole.residue * std::exp(-pole.location / tau);
    return total;
}

WeightConstants::WeightConstants(double A_in, const PhysicalParams& params, int dim_in)
    : A(A_in), dim(dim_in) {
    params.validate();
    params.require_continuous_tau("WeightConstants");
    if (!(A > 0.0)) throw ValidationError("WeightConstants: A must be > 0");
    if (dim < 1 || dim > 3) throw ValidationError("WeightConstants: dim must be 1, 2 or 3");
    const double thermal = 2.0 * M_PI * params.hbar * params.hbar / (params.mass * params.tau);
    double factorial = 1.0;
    for (int s = 1; s <= 2; ++s) {
        factorial *= s;
        A_s[static_cast<std::size_t>(s - 1)] =
            factorial * std::pow(params.density, s - 1) *
            std::pow(thermal, 0.5 * dim * (s - 1)) * A;
    }
}

double WeightConstants::order_constant(int s) const {
    if (s < 1 || s > 2)
        throw UnsupportedOrder("WeightConstants: order s must be 1 or 2, got " +
                               std::to_string(s));
    return A_s[static_cast<std::size_t>(s - 1)];
}

Complex n_s(Complex z, int s, const WeightConstants& weights, const PhysicalParams& params) {
    params.require_continuous_tau("n_s");
    return weights.order_constant(s) * std::exp(-z / params.tau);
}

} // namespace momrep::contour

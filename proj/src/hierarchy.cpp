#include "momrep/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "momrep/errors.hpp"

namespace momrep::hierarchy {

namespace {

void require_stencil_width(const UniformGrid& grid, const char* where) {
    for (int a = 0; a < grid.dim(); ++a) {
        if (grid.points(a) < 5) {
            throw ValidationError(std::string(where) + ": axis " + std::to_string(a) + " has " +
                                  std::to_string(grid.points(a)) +
                                  " points; the 5-point stencil needs at least 5");
        }
    }
}

/// Whether the 5-point stencil fits at this node: always on periodic grids
/// (indices wrap), two-node interior margin otherwise.
bool stencil_fits(const UniformGrid& grid, const int* idx) {
    if (grid.domain() == GridDomain::periodic) return true;
    for (int a = 0; a < grid.dim(); ++a) {
        if (idx[a] < 2 || idx[a] > grid.points(a) - 3) return false;
    }
    return true;
}

/// Value of the field at the node shifted by off along axis a, wrapping on
/// periodic grids (the duplicate endpoint makes the period points(a) - 1).
template <class T>
T shifted(const GridField<T>& field, const int* idx, int a, int off) {
    int shifted_idx[kMaxAxes];
    std::memcpy(shifted_idx, idx, sizeof(shifted_idx));
    const UniformGrid& grid = field.grid();
    int j = idx[a] + off;
    if (grid.domain() == GridDomain::periodic) {
        const int period = grid.points(a) - 1;
        j = ((j % period) + period) % period;
    }
    shifted_idx[a] = j;
    return field[field.grid().flatten(shifted_idx)];
}

/// 4th-order first derivative along axis a.
template <class T>
T d1(const GridField<T>& field, const int* idx, int a) {
    const double h = field.grid().axis(a).spacing;
    return (shifted(field, idx, a, -2) - 8.0 * shifted(field, idx, a, -1) +
            8.0 * shifted(field, idx, a, +1) - shifted(field, idx, a, +2)) /
           (12.0 * h);
}

/// 4th-order second derivative along axis a.
template <class T>
T d2(const GridField<T>& field, const int* idx, int a) {
    const double h = field.grid().axis(a).spacing;
    return (-shifted(field, idx, a, -2) + 16.0 * shifted(field, idx, a, -1) -
            30.0 * field[field.grid().flatten(idx)] + 16.0 * shifted(field, idx, a, +1) -
            shifted(field, idx, a, +2)) /
           (12.0 * h * h);
}

double max_abs(const GriddedDistribution& field) {
    double m = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) m = std::max(m, std::abs(field[i]));
    return m;
}

/// Reduces residual magnitudes over the nodes where the stencil fit.
ResidualReport reduce(const std::vector<double>& magnitudes, std::size_t counted, double denom,
                      const UniformGrid& grid) {
    ResidualReport report;
    report.grid = grid.describe();
    if (counted == 0) return report;
    double sum_sq = 0.0;
    for (double m : magnitudes) {
        report.max_abs_residual = std::max(report.max_abs_residual, m / denom);
        sum_sq += (m / denom) * (m / denom);
    }
    report.rms_residual = std::sqrt(sum_sq / static_cast<double>(counted));
    return report;
}

} // namespace

ComplexField v1_equation_residual_field(const ComplexField& v, const Vec3& p, Complex z,
                                        const GriddedDistribution& u1,
                                        const PhysicalParams& params) {
    params.validate();
    const UniformGrid& grid = v.grid();
    if (grid.space() != GridSpace::position) {
        throw ValidationError("v1_equation_residual: the kernel field lives on a position grid");
    }
    if (!grid.same_layout(u1.grid())) {
        throw ValidationError("v1_equation_residual: U_1 grid does not match the kernel grid");
    }
    require_stencil_width(grid, "v1_equation_residual");
    const double kin = params.hbar * params.hbar / (2.0 * params.mass);
    const Complex drift_unit = Complex(0.0, 1.0) * params.hbar / params.mass;
    const Complex local = z - p.squaredNorm() / (2.0 * params.mass);
    ComplexField residual(grid);
    int idx[kMaxAxes] = {};
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unflatten(flat, idx);
        if (!stencil_fits(grid, idx)) continue;
        Complex r = (local - u1[flat]) * v[flat] - 1.0;
        for (int a = 0; a < grid.dim(); ++a) {
            r += kin * d2(v, idx, a) + drift_unit * p(a) * d1(v, idx, a);
        }
        residual[flat] = r;
    }
    return residual;
}

ResidualReport v1_equation_residual(const ComplexField& v, const Vec3& p, Complex z,
                                    const GriddedDistribution& u1,
                                    const PhysicalParams& params) {
    const ComplexField residual = v1_equation_residual_field(v, p, z, u1, params);
    const UniformGrid& grid = residual.grid();
    const double denom = std::abs(z) + max_abs(u1) + 1.0;
    std::vector<double> magnitudes;
    magnitudes.reserve(grid.size());
    std::size_t counted = 0;
    int idx[kMaxAxes] = {};
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unflatten(flat, idx);
        if (!stencil_fits(grid, idx)) continue;
        magnitudes.push_back(std::abs(residual[flat]));
        ++counted;
    }
    return reduce(magnitudes, counted, denom, grid);
}

namespace {

template <class T>
GridField<T> sample(const UniformGrid& grid, const std::function<T(const Vec3&)>& fn) {
    GridField<T> field(grid);
    int idx[kMaxAxes] = {};
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unflatten(flat, idx);
        field[flat] = fn(grid.point3(idx));
    }
    return field;
}

UniformGrid halved(const UniformGrid& grid) {
    std::vector<GridAxis> axes;
    axes.reserve(static_cast<std::size_t>(grid.dim()));
    for (int a = 0; a < grid.dim(); ++a) {
        axes.push_back(GridAxis{grid.axis(a).spacing / 2.0, grid.axis(a).half_points * 2});
    }
    return UniformGrid(grid.space(), grid.domain(), std::move(axes));
}

} // namespace

ResidualReport v1_equation_residual_checked(const std::function<Complex(const Vec3&)>& v,
                                            const std::function<double(const Vec3&)>& u1,
                                            const Vec3& p, Complex z, const PositionGrid& grid,
                                            const PhysicalParams& params) {
    const UniformGrid fine = halved(grid);
    const ResidualReport coarse_report =
        v1_equation_residual(sample<Complex>(grid, v), p, z, sample<double>(grid, u1), params);
    const ResidualReport fine_report =
        v1_equation_residual(sample<Complex>(fine, v), p, z, sample<double>(fine, u1), params);
    if (fine_report.max_abs_residual > 4.0 * coarse_report.max_abs_residual + 1e-14) {
        throw GridTooCoarse("v1_equation_residual_checked: max residual grew from " +
                            std::to_string(coarse_report.max_abs_residual) + " to " +
                            std::to_string(fine_report.max_abs_residual) +
                            " under spacing halving; the field is not resolved on this grid");
    }
    return fine_report;
}

void ClosureInput::validate() const {
    if (s != 1 && s != 2) {
        throw ValidationError("ClosureInput: order must be 1 or 2, got " + std::to_string(s));
    }
    const UniformGrid& sgrid = rho_s.grid();
    const UniformGrid& bgrid = rho_s_plus_1.grid();
    if (sgrid.space() != GridSpace::position || bgrid.space() != GridSpace::position) {
        throw ValidationError("ClosureInput: densities live on position grids");
    }
    if (!sgrid.same_layout(u_s.grid())) {
        throw ValidationError("ClosureInput: U_s grid does not match the rho_s grid");
    }
    if (sgrid.dim() % s != 0) {
        throw ValidationError("ClosureInput: rho_s axis count is not a multiple of the order");
    }
    const int dim = sgrid.dim() / s;
    if (bgrid.dim() != sgrid.dim() + dim) {
        throw ValidationError("ClosureInput: rho_{s+1} must add exactly one particle block of " +
                              std::to_string(dim) + " axes");
    }
    for (int a = 0; a < sgrid.dim(); ++a) {
        if (bgrid.axis(a).spacing != sgrid.axis(a).spacing ||
            bgrid.axis(a).half_points != sgrid.axis(a).half_points) {
            throw ValidationError("ClosureInput: leading axes of rho_{s+1} must match rho_s");
        }
    }
    if (bgrid.domain() != sgrid.domain()) {
        throw ValidationError("ClosureInput: rho_s and rho_{s+1} grids must share the domain");
    }
    for (std::size_t i = 0; i < rho_s.size(); ++i) {
        if (rho_s[i] < 0.0) throw ValidationError("ClosureInput: rho_s must be non-negative");
    }
    for (std::size_t i = 0; i < rho_s_plus_1.size(); ++i) {
        if (rho_s_plus_1[i] < 0.0) {
            throw ValidationError("ClosureInput: rho_{s+1} must be non-negative");
        }
    }
    if (!pair_potential.value || !pair_potential.gradient) {
        throw ValidationError("ClosureInput: the pair potential needs value and gradient");
    }
}

namespace {

/// Minimum-image separation: each component wrapped into half a period on
/// periodic axes, untouched otherwise.
Vec3 separation(const Vec3& a, const Vec3& b, const UniformGrid& grid, int axis0, int dim) {
    Vec3 sep = a - b;
    if (grid.domain() == GridDomain::periodic) {
        for (int c = 0; c < dim; ++c) {
            const double period = grid.extent(axis0 + c);
            sep(c) -= period * std::nearbyint(sep(c) / period);
        }
    }
    return sep;
}

/// Position of particle k (block of dim axes starting at k*dim) at a node.
Vec3 block_point(const UniformGrid& grid, const int* idx, int k, int dim) {
    Vec3 r = Vec3::Zero();
    for (int c = 0; c < dim; ++c) {
        r(c) = grid.coordinate(k * dim + c, idx[k * dim + c]);
    }
    return r;
}

/// Trapezoid weight of the trailing particle block of a node.
double block_weight(const UniformGrid& grid, const int* idx, int axis0, int dim) {
    double w = 1.0;
    for (int c = 0; c < dim; ++c) {
        const int a = axis0 + c;
        const bool endpoint = idx[a] == 0 || idx[a] == grid.points(a) - 1;
        w *= grid.axis(a).spacing * (endpoint ? 0.5 : 1.0);
    }
    return w;
}

} // namespace

std::vector<GriddedDistribution> effective_potential_residual_field(const ClosureInput& input) {
    input.validate();
    const UniformGrid& sgrid = input.rho_s.grid();
    const UniformGrid& big = input.rho_s_plus_1.grid();
    const int dim = sgrid.dim() / input.s;
    require_stencil_width(sgrid, "effective_potential_residual");

    // The potential must have decayed at the edge of the integration block.
    std::vector<GridAxis> tail_axes;
    for (int c = 0; c < dim; ++c) tail_axes.push_back(big.axis(sgrid.dim() + c));
    const UniformGrid tail_grid(GridSpace::position, big.domain(), tail_axes);
    double k_max = 0.0;
    double k_boundary = 0.0;
    int tidx[kMaxAxes] = {};
    for (std::size_t flat = 0; flat < tail_grid.size(); ++flat) {
        tail_grid.unflatten(flat, tidx);
        const double k_here = std::abs(input.pair_potential.value(tail_grid.point3(tidx)));
        k_max = std::max(k_max, k_here);
        if (tail_grid.on_boundary(tidx)) k_boundary = std::max(k_boundary, k_here);
    }
    if (k_max > 0.0 && k_boundary > 1e-8 * k_max) {
        throw RangeNotCovered("effective_potential_residual: |K| at the integration boundary is " +
                              std::to_string(k_boundary) + " against a maximum of " +
                              std::to_string(k_max) +
                              "; enlarge the integration block past the potential range");
    }

    std::vector<GriddedDistribution> residual(static_cast<std::size_t>(dim),
                                              GriddedDistribution(sgrid));
    int idx[kMaxAxes] = {};
    int big_idx[kMaxAxes] = {};
    for (std::size_t flat = 0; flat < sgrid.size(); ++flat) {
        sgrid.unflatten(flat, idx);
        if (!stencil_fits(sgrid, idx)) continue;
        const Vec3 r1 = block_point(sgrid, idx, 0, dim);

        // rho_s grad_1 U_s.
        Vec3 lhs = Vec3::Zero();
        for (int c = 0; c < dim; ++c) lhs(c) = input.rho_s[flat] * d1(input.u_s, idx, c);

        // rho_s grad_1 K(r_1 - r_j) over the other particles of the s-block.
        Vec3 intra = Vec3::Zero();
        for (int j = 1; j < input.s; ++j) {
            const Vec3 rj = block_point(sgrid, idx, j, dim);
            intra += input.rho_s[flat] *
                     input.pair_potential.gradient(separation(r1, rj, sgrid, 0, dim));
        }

        // integral of rho_{s+1} grad_1 K over the added particle block.
        std::memcpy(big_idx, idx, sizeof(big_idx));
        Vec3 integral = Vec3::Zero();
        for (std::size_t tail_flat = 0; tail_flat < tail_grid.size(); ++tail_flat) {
            tail_grid.unflatten(tail_flat, tidx);
            for (int c = 0; c < dim; ++c) big_idx[sgrid.dim() + c] = tidx[c];
            const Vec3 r_last = block_point(big, big_idx, input.s, dim);
            const Vec3 sep = separation(r1, r_last, big, sgrid.dim(), dim);
            integral += input.rho_s_plus_1[big.flatten(big_idx)] *
                        input.pair_potential.gradient(sep) *
                        block_weight(big, big_idx, sgrid.dim(), dim);
        }

        for (int c = 0; c < dim; ++c) {
            residual[static_cast<std::size_t>(c)][flat] = lhs(c) - intra(c) - integral(c);
        }
    }
    return residual;
}

ResidualReport effective_potential_residual(const ClosureInput& input) {
    const std::vector<GriddedDistribution> fields = effective_potential_residual_field(input);
    const UniformGrid& sgrid = input.rho_s.grid();
    const double denom = max_abs(input.u_s) + 1.0;
    std::vector<double> magnitudes;
    std::size_t counted = 0;
    int idx[kMaxAxes] = {};
    for (std::size_t flat = 0; flat < sgrid.size(); ++flat) {
        sgrid.unflatten(flat, idx);
        if (!stencil_fits(sgrid, idx)) continue;
        ++counted;
        for (const auto& component : fields) {
            magnitudes.push_back(std::abs(component[flat]));
        }
    }
    return reduce(magnitudes, counted * fields.size(), denom, sgrid);
}

} // namespace momrep::hierarchy

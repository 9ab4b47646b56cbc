#include "momrep/fourier.hpp"

#include <cmath>

namespace momrep::fourier {

namespace {

/// Trapezoid weights of a single axis.
std::vector<double> axis_weights(const GridAxis& ax) {
    const int n = 2 * ax.half_points + 1;
    std::vector<double> w(static_cast<std::size_t>(n), ax.spacing);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

/// Contracts `in` (row-major tensor of the given shape) along one axis with M:
/// out[..., r, ...] = sum_c M(r, c) in[..., c, ...].
std::vector<Complex> apply_along_axis(const std::vector<Complex>& in,
                                      const std::vector<int>& shape, int axis,
                                      const Eigen::MatrixXcd& M) {
    const int n_old = shape[static_cast<std::size_t>(axis)];
    const int n_new = static_cast<int>(M.rows());
    if (static_cast<int>(M.cols()) != n_old)
        throw ValidationError("fourier: axis matrix shape mismatch");
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(shape[static_cast<std::size_t>(a)]);
    for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < shape.size(); ++a)
        inner *= static_cast<std::size_t>(shape[a]);

    std::vector<Complex> out(outer * static_cast<std::size_t>(n_new) * inner);
    for (std::size_t o = 0; o < outer; ++o) {
        const Complex* in_block = in.data() + o * static_cast<std::size_t>(n_old) * inner;
        Complex* out_block = out.data() + o * static_cast<std::size_t>(n_new) * inner;
        for (int r = 0; r < n_new; ++r)
            for (std::size_t i = 0; i < inner; ++i) {
                Complex acc = 0.0;
                for (int c = 0; c < n_old; ++c)
                    acc += M(r, c) * in_block[static_cast<std::size_t>(c) * inner + i];
                out_block[static_cast<std::size_t>(r) * inner + i] = acc;
            }
    }
    return out;
}

enum class Kernel { forward, inverse }; // exp(-i p x / hbar) vs exp(+i p x / hbar)

/// One-axis transform matrix: rows indexed by the target axis, columns by the
/// source axis; source trapezoid weights and (2 pi hbar)^(-1/2) folded in.
Eigen::MatrixXcd axis_matrix(const GridAxis& target, const GridAxis& source, double hbar,
                             Kernel kernel) {
    const int n_t = 2 * target.half_points + 1;
    const int n_s = 2 * source.half_points + 1;
    const std::vector<double> w = axis_weights(source);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * hbar);
    const double sign = (kernel == Kernel::forward) ? -1.0 : 1.0;
    Eigen::MatrixXcd M(n_t, n_s);
    for (int r = 0; r < n_t; ++r) {
        const double t = (r - target.half_points) * target.spacing;
        for (int c = 0; c < n_s; ++c) {
            const double s = (c - source.half_points) * source.spacing;
            M(r, c) = std::polar(w[static_cast<std::size_t>(c)] * norm, sign * t * s / hbar);
        }
    }
    return M;
}

/// spacing of the source axis must resolve oscillations up to the largest
/// target coordinate: h < pi hbar / |t|_max.
void require_alias_safe(const UniformGrid& source, const UniformGrid& target, double hbar,
                        const char* context) {
    for (int a = 0; a < source.dim(); ++a) {
        const double t_max = target.half_extent(a);
        if (t_max <= 0.0) continue;
        if (!(source.axis(a).spacing < M_PI * hbar / t_max))
            throw AliasingRisk(std::string(context) + ": axis " + std::to_string(a) +
                               " spacing " + std::to_string(source.axis(a).spacing) +
                               " cannot resolve oscillations up to " + std::to_string(t_max) +
                               " (need < " + std::to_string(M_PI * hbar / t_max) + ")");
    }
}

void require_matching_dims(const UniformGrid& a, const UniformGrid& b, const char* context) {
    if (a.dim() != b.dim())
        throw ValidationError(std::string(context) + ": source and target grids must have "
                              "the same number of axes");
}

GriddedDistribution magnitude_squared(const ComplexField& psi) {
    std::vector<double> v(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) v[i] = std::norm(psi[i]);
    return GriddedDistribution(psi.grid(), std::move(v));
}

void require_normalized(const ComplexField& psi, const char* context) {
    const double norm = quadrature(magnitude_squared(psi));
    if (std::abs(norm - 1.0) > 1e-8)
        throw NotNormalized(std::string(context) + ": |psi|^2 integrates to " +
                            std::to_string(norm) + ", expected 1 within 1e-8");
}

std::vector<int> grid_shape(const UniformGrid& g) {
    std::vector<int> shape(static_cast<std::size_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) shape[static_cast<std::size_t>(a)] = g.points(a);
    return shape;
}

ComplexField transform_wavefunction(const ComplexField& in, const UniformGrid& target,
                                    const PhysicalParams& params, Kernel kernel,
                                    const char* context) {
    params.validate();
    require_matching_dims(in.grid(), target, context);
    require_alias_safe(in.grid(), target, params.hbar, context);
    require_normalized(in, context);

    std::vector<Complex> values = in.values();
    std::vector<int> shape = grid_shape(in.grid());
    for (int a = 0; a < in.grid().dim(); ++a) {
        values = apply_along_axis(values, shape,
                                  a, axis_matrix(target.axis(a), in.grid().axis(a),
                                                 params.hbar, kernel));
        shape[static_cast<std::size_t>(a)] = target.points(a);
    }
    return ComplexField(target, std::move(values));
}

DensityMatrixGrid transform_dm(const DensityMatrixGrid& dm, const UniformGrid& target,
                               const PhysicalParams& params, Kernel kernel,
                               const char* context) {
    params.validate();
    require_matching_dims(dm.side(), target, context);
    require_alias_safe(dm.side(), target, params.hbar, context);
    dm.require_hermitian();

    const int d = dm.side().dim();
    std::vector<int> shape = grid_shape(dm.side());
    std::vector<int> full_shape = shape;
    full_shape.insert(full_shape.end(), shape.begin(), shape.end());

    std::vector<Complex> values = dm.values();
    for (int a = 0; a < d; ++a) {
        const Eigen::MatrixXcd M =
            axis_matrix(target.axis(a), dm.side().axis(a), params.hbar, kernel);
        values = apply_along_axis(values, full_shape, a, M);
        full_shape[static_cast<std::size_t>(a)] = target.points(a);
        values = apply_along_axis(values, full_shape, d + a, M.conjugate());
        full_shape[static_cast<std::size_t>(d + a)] = target.points(a);
    }
    return DensityMatrixGrid(dm.order(), target, std::move(values));
}

} // namespace

DensityMatrixGrid::DensityMatrixGrid(int order, UniformGrid side, std::vector<Complex> values)
    : order_(order), side_(std::move(side)), values_(std::move(values)) {
    if (order_ < 1 || order_ > 2)
        throw UnsupportedOrder("DensityMatrixGrid: order must be 1 or 2");
    if (values_.size() != side_.size() * side_.size())
        throw ValidationError("DensityMatrixGrid: value count must be side.size()^2");
    if (side_.dim() % order_ != 0)
        throw ValidationError("DensityMatrixGrid: side axis count must be a multiple of "
                              "the order");
}

void DensityMatrixGrid::require_hermitian(double tol) const {
    const std::size_t n = side_.size();
    double peak = 0.0;
    for (const Complex& v : values_) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t r = l; r < n; ++r) {
            const double dev = std::abs(values_[l * n + r] - std::conj(values_[r * n + l]));
            if (dev > tol * peak)
                throw ValidationError("DensityMatrixGrid: matrix deviates from Hermitian "
                                      "by " + std::to_string(dev / peak) + " relative");
        }
}

GriddedDistribution DensityMatrixGrid::diagonal() const {
    const std::size_t n = side_.size();
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(values_[i * n + i]));
    std::vector<double> diag(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex v = values_[i * n + i];
        if (peak > 0.0 && std::abs(v.imag()) > 1e-10 * peak)
            throw ValidationError("DensityMatrixGrid: diagonal entry has imaginary part " +
                                  std::to_string(v.imag()));
        double re = v.real();
        if (re < 0.0) {
            if (peak > 0.0 && re < -1e-12 * peak)
                throw ValidationError("DensityMatrixGrid: negative diagonal entry " +
                                      std::to_string(re));
            re = 0.0;
        }
        diag[i] = re;
    }
    return GriddedDistribution(side_, std::move(diag));
}

double DensityMatrixGrid::trace() const { return quadrature(diagonal()); }

DensityMatrixGrid DensityMatrixGrid::from_wavefunction(const ComplexField& psi, int order,
                                                       const PhysicalParams& params) {
    params.validate();
    if (order < 1 || order > 2)
        throw UnsupportedOrder("DensityMatrixGrid::from_wavefunction: order must be 1 or 2");
    const UniformGrid& g = psi.grid();
    const int n_total = g.dim(); // one axis per particle at desk scale
    if (order > n_total)
        throw ValidationError("DensityMatrixGrid::from_wavefunction: order exceeds the "
                              "particle count of the wavefunction grid");
    require_normalized(psi, "DensityMatrixGrid::from_wavefunction");

    std::vector<GridAxis> side_axes, rest_axes;
    for (int a = 0; a < order; ++a) side_axes.push_back(g.axis(a));
    for (int a = order; a < n_total; ++a) rest_axes.push_back(g.axis(a));
    UniformGrid side(g.space(), g.domain(), side_axes);

    std::size_t front = side.size();
    std::size_t back = g.size() / front;

    // integration weights over the traced-out axes
    std::vector<double> back_w(back, 1.0);
    if (!rest_axes.empty()) {
        UniformGrid rest(g.space(), g.domain(), rest_axes);
        int idx[kMaxAxes];
        for (std::size_t j = 0; j < back; ++j) {
            rest.unflatten(j, idx);
            back_w[j] = rest.weight(idx);
        }
    }

    double factor = 1.0; // N! / (N - order)!
    for (int k = 0; k < order; ++k) factor *= static_cast<double>(n_total - k);

    std::vector<Complex> values(front * front, Complex(0.0));
    for (std::size_t l = 0; l < front; ++l) {
        const Complex* row_l = psi.values().data() + l * back;
        for (std::size_t r = l; r < front; ++r) {
            const Complex* row_r = psi.values().data() + r * back;
            Complex acc = 0.0;
            for (std::size_t j = 0; j < back; ++j)
                acc += row_l[j] * std::conj(row_r[j]) * back_w[j];
            values[l * front + r] = factor * acc;
            values[r * front + l] = std::conj(factor * acc);
        }
    }
    return DensityMatrixGrid(order, side, std::move(values));
}

ComplexField wavefunction_to_momentum(const ComplexField& psi, const MomentumGrid& target,
                                      const PhysicalParams& params) {
    return transform_wavefunction(psi, target, params, Kernel::forward,
                                  "wavefunction_to_momentum");
}

ComplexField momentum_to_wavefunction(const ComplexField& psi_tilde, const PositionGrid& target,
                                      const PhysicalParams& params) {
    return transform_wavefunction(psi_tilde, target, params, Kernel::inverse,
                                  "momentum_to_wavefunction");
}

DensityMatrixGrid dm_position_to_momentum(const DensityMatrixGrid& dm, const MomentumGrid& target,
                                          const PhysicalParams& params) {
    return transform_dm(dm, target, params, Kernel::forward, "dm_position_to_momentum");
}

DensityMatrixGrid dm_momentum_to_position(const DensityMatrixGrid& dm, const PositionGrid& target,
                                          const PhysicalParams& params) {
    return transform_dm(dm, target, params, Kernel::inverse, "dm_momentum_to_position");
}

double delta_zero_regularized(const PhysicalParams& params) {
    params.validate();
    return params.volume / std::pow(2.0 * M_PI * params.hbar, 3);
}

} // namespace momrep::fourier

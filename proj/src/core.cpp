#include "momrep/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momrep {

int statistics_sign(Statistics statistics, int parity) {
    if (parity != 0 && parity != 1)
        throw ValidationError("statistics_sign: parity must be 0 or 1, got " +
                              std::to_string(parity));
    if (statistics == Statistics::bose) return 1;
    return parity == 0 ? 1 : -1;
}

void PhysicalParams::validate() const {
    if (!(hbar > 0.0)) throw ValidationError("PhysicalParams: hbar must be > 0");
    if (!(mass > 0.0)) throw ValidationError("PhysicalParams: mass must be > 0");
    if (!(volume > 0.0)) throw ValidationError("PhysicalParams: volume must be > 0");
    if (n_particles < 1) throw ValidationError("PhysicalParams: n_particles must be >= 1");
    const double n = static_cast<double>(n_particles);
    if (std::abs(density * volume - n) > 1e-12 * n)
        throw ValidationError("PhysicalParams: density * volume != n_particles "
                              "(got " + std::to_string(density * volume) + " vs " +
                              std::to_string(n_particles) + ")");
}

void PhysicalParams::require_continuous_tau(const char* context) const {
    if (!(tau > 0.0))
        throw CondensateRegime(std::string(context) +
                               ": tau must be > 0 on continuous-statistics paths "
                               "(condensate fractions are handled by the condensate module)");
}

PhysicalParams make_params(double tau, std::int64_t n_particles, double volume,
                           Statistics statistics, double hbar, double mass) {
    PhysicalParams p;
    p.hbar = hbar;
    p.mass = mass;
    p.tau = tau;
    p.volume = volume;
    p.n_particles = n_particles;
    p.density = static_cast<double>(n_particles) / volume;
    p.statistics = statistics;
    p.validate();
    return p;
}

UniformGrid::UniformGrid(GridSpace space, GridDomain domain, std::vector<GridAxis> axes)
    : space_(space), domain_(domain), axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > kMaxAxes)
        throw ValidationError("UniformGrid: axis count must be in [1, " +
                              std::to_string(kMaxAxes) + "]");
    size_ = 1;
    for (const GridAxis& ax : axes_) {
        if (!(ax.spacing > 0.0))
            throw ValidationError("UniformGrid: axis spacing must be > 0");
        if (ax.half_points < 1)
            throw ValidationError("UniformGrid: each axis needs at least 3 points "
                                  "(half_points >= 1)");
        size_ *= static_cast<std::size_t>(2 * ax.half_points + 1);
    }
}

void UniformGrid::unflatten(std::size_t flat, int* idx) const {
    for (int a = dim() - 1; a >= 0; --a) {
        const std::size_t n = static_cast<std::size_t>(points(a));
        idx[a] = static_cast<int>(flat % n);
        flat /= n;
    }
}

std::size_t UniformGrid::flatten(const int* idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim(); ++a)
        flat = flat * static_cast<std::size_t>(points(a)) + static_cast<std::size_t>(idx[a]);
    return flat;
}

double UniformGrid::weight(const int* idx) const {
    double w = 1.0;
    for (int a = 0; a < dim(); ++a) {
        const GridAxis& ax = axes_[static_cast<std::size_t>(a)];
        double wa = ax.spacing;
        if (idx[a] == 0 || idx[a] == 2 * ax.half_points) wa *= 0.5;
        w *= wa;
    }
    return w;
}

bool UniformGrid::on_boundary(const int* idx) const {
    for (int a = 0; a < dim(); ++a)
        if (idx[a] == 0 || idx[a] == 2 * axes_[static_cast<std::size_t>(a)].half_points)
            return true;
    return false;
}

Vec3 UniformGrid::point3(const int* idx) const {
    Vec3 p = Vec3::Zero();
    const int d = std::min(dim(), 3);
    for (int a = 0; a < d; ++a) p[a] = coordinate(a, idx[a]);
    return p;
}

std::string UniformGrid::describe() const {
    std::ostringstream os;
    os << (space_ == GridSpace::position ? "position" : "momentum") << " " << dim() << "d";
    switch (domain_) {
        case GridDomain::decaying: break;
        case GridDomain::box: os << " box"; break;
        case GridDomain::periodic: os << " periodic"; break;
    }
    for (int a = 0; a < dim(); ++a)
        os << " n=" << points(a) << " h=" << axis(a).spacing;
    return os.str();
}

bool UniformGrid::same_layout(const UniformGrid& other) const {
    if (dim() != other.dim()) return false;
    for (int a = 0; a < dim(); ++a)
        if (axis(a).half_points != other.axis(a).half_points ||
            axis(a).spacing != other.axis(a).spacing)
            return false;
    return true;
}

MomentumGrid MomentumGrid::cubic(int dim, double spacing, int half_points) {
    return MomentumGrid(std::vector<GridAxis>(static_cast<std::size_t>(dim),
                                              GridAxis{spacing, half_points}));
}

PositionGrid PositionGrid::cubic(int dim, double spacing, int half_points, GridDomain domain) {
    return PositionGrid(std::vector<GridAxis>(static_cast<std::size_t>(dim),
                                              GridAxis{spacing, half_points}),
                        domain);
}

namespace {

template <class T>
double max_abs(const std::vector<T>& v) {
    double m = 0.0;
    for (const T& x : v) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
}

/// Shared quadrature core: tail policy by domain, then weighted sum.
template <class T>
T quadrature_impl(const GridField<T>& field) {
    const UniformGrid& g = field.grid();
    const double peak = max_abs(field.values());
    int idx[kMaxAxes];

    if (g.domain() == GridDomain::decaying && peak > 0.0) {
        double boundary_peak = 0.0;
        for (std::size_t i = 0; i < field.size(); ++i) {
            g.unflatten(i, idx);
            if (g.on_boundary(idx))
                boundary_peak = std::max(boundary_peak,
                                         static_cast<double>(std::abs(field[i])));
        }
        if (boundary_peak > 1e-10 * peak)
            throw TailNotDecayed("quadrature: boundary value " + std::to_string(boundary_peak) +
                                 " exceeds 1e-10 x max " + std::to_string(peak) +
                                 " on " + g.describe());
    }
    if (g.domain() == GridDomain::periodic && peak > 0.0) {
        // both endpoints of a periodic axis sample the same physical point
        for (int a = 0; a < g.dim(); ++a) {
            for (std::size_t i = 0; i < field.size(); ++i) {
                g.unflatten(i, idx);
                if (idx[a] != 0) continue;
                int jdx[kMaxAxes];
                std::copy(idx, idx + g.dim(), jdx);
                jdx[a] = g.points(a) - 1;
                const double diff =
                    static_cast<double>(std::abs(field[i] - field[g.flatten(jdx)]));
                if (diff > 1e-9 * peak)
                    throw ValidationError("quadrature: periodic field endpoints differ by " +
                                          std::to_string(diff) + " on " + g.describe());
            }
        }
    }

    T total{};
    for (std::size_t i = 0; i < field.size(); ++i) {
        g.unflatten(i, idx);
        total += field[i] * g.weight(idx);
    }
    return total;
}

} // namespace

double quadrature(const GriddedDistribution& dist) { return quadrature_impl(dist); }
Complex quadrature(const ComplexField& field) { return quadrature_impl(field); }

DeltaPeakMeasure::DeltaPeakMeasure(std::vector<DeltaPeak> peaks) : peaks_(std::move(peaks)) {
    double scale = 0.0;
    for (const DeltaPeak& pk : peaks_) {
        if (!(pk.weight >= 0.0))
            throw ValidationError("DeltaPeakMeasure: peak weights must be >= 0");
        scale = std::max(scale, pk.location.norm());
    }
    const double tol = 1e-12 * std::max(1.0, scale);
    for (std::size_t i = 0; i < peaks_.size(); ++i)
        for (std::size_t j = i + 1; j < peaks_.size(); ++j)
            if ((peaks_[i].location - peaks_[j].location).norm() <= tol)
                throw ValidationError("DeltaPeakMeasure: peak locations must be pairwise "
                                      "distinct");
}

double DeltaPeakMeasure::total_weight() const {
    double total = 0.0;
    for (const DeltaPeak& pk : peaks_) total += pk.weight;
    return total;
}

void DeltaPeakMeasure::require_total(double expected) const {
    const double total = total_weight();
    if (std::abs(total - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
        throw ValidationError("DeltaPeakMeasure: total weight " + std::to_string(total) +
                              " != expected " + std::to_string(expected));
}

namespace quadrules {

namespace {

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the orthogonal
/// polynomial recurrence; weights are mu0 * (first eigenvector component)^2.
Rule golub_welsch(const std::vector<double>& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        J(k, k + 1) = offdiag[static_cast<std::size_t>(k)];
        J(k + 1, k) = offdiag[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        rule.nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: order must be >= 1");
    std::vector<double> beta(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        beta[static_cast<std::size_t>(k - 1)] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return golub_welsch(beta, 2.0);
}

Rule gauss_hermite(int n) {
    if (n < 1) throw ValidationError("gauss_hermite: order must be >= 1");
    std::vector<double> beta(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k)
        beta[static_cast<std::size_t>(k - 1)] = std::sqrt(static_cast<double>(k) / 2.0);
    return golub_welsch(beta, std::sqrt(M_PI));
}

} // namespace quadrules

} // namespace momrep

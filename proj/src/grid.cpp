#include "erps/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "erps/error.hpp"

namespace erps {

Grid1D::Grid1D(std::size_t n_points, double spacing, double origin, Boundary boundary)
    : n_(n_points), dq_(spacing), origin_(origin), boundary_(boundary) {
    if (n_points < min_points) {
        throw PreconditionError("Grid1D needs at least " + std::to_string(min_points) + " points, got " +
                                std::to_string(n_points));
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw PreconditionError("Grid1D spacing must be positive and finite");
    }
    if (!std::isfinite(origin)) {
        throw PreconditionError("Grid1D origin must be finite");
    }
}

Grid1D Grid1D::centered(std::size_t n_points, double length, Boundary boundary) {
    if (n_points < min_points) {
        throw PreconditionError("Grid1D needs at least " + std::to_string(min_points) + " points");
    }
    const double dq = length / static_cast<double>(n_points);
    return Grid1D(n_points, dq, -0.5 * length + 0.5 * dq, boundary);
}

Grid1D Grid1D::periodic_for_momentum(double p0, double hbar, int n_periods, std::size_t n_points,
                                     bool nodes_between_points) {
    if (p0 == 0.0 || n_periods <= 0 || !(hbar > 0.0)) {
        throw PreconditionError("periodic_for_momentum needs p0 != 0, hbar > 0 and n_periods > 0");
    }
    const double length = 2.0 * std::numbers::pi * hbar * n_periods / std::abs(p0);
    const double dq = length / static_cast<double>(n_points);
    const double origin = -0.5 * length + (nodes_between_points ? 0.5 * dq : 0.0);
    return Grid1D(n_points, dq, origin, Boundary::periodic);
}

double Grid1D::wrap(double q) const noexcept {
    const double lo = lower_edge();
    double w = lo + std::fmod(q - lo, extent());
    if (w < lo) w += extent();
    if (w >= upper_edge()) w = lo;
    return w;
}

std::vector<double> Grid1D::coordinates() const {
    std::vector<double> q(n_);
    for (std::size_t i = 0; i < n_; ++i) q[i] = coordinate(i);
    return q;
}

std::vector<double> Grid1D::wavenumbers(bool zero_nyquist) const {
    std::vector<double> k(n_);
    const double dk = 2.0 * std::numbers::pi / extent();
    const auto n = static_cast<long>(n_);
    for (long i = 0; i < n; ++i) {
        const long m = (i < (n + 1) / 2) ? i : i - n;
        k[static_cast<std::size_t>(i)] = dk * static_cast<double>(m);
    }
    if (zero_nyquist && n_ % 2 == 0) k[n_ / 2] = 0.0;
    return k;
}

}  // namespace erps

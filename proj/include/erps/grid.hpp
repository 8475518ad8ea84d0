#pragma once

#include <cstddef>
#include <vector>

namespace erps {

enum class Boundary { periodic, truncated };

/// Uniform 1D lattice. Point i sits at origin + i * spacing and owns the
/// cell [q_i - spacing/2, q_i + spacing/2), so the total extent is
/// n_points * spacing.
class Grid1D {
public:
    static constexpr std::size_t min_points = 8;

    Grid1D(std::size_t n_points, double spacing, double origin, Boundary boundary);

    /// Grid of the given length whose cells tile [-length/2, length/2).
    static Grid1D centered(std::size_t n_points, double length, Boundary boundary);

    /// Periodic grid holding exactly `n_periods` wavelengths of a plane wave
    /// with momentum p0. When `nodes_between_points` is set the origin is
    /// shifted by half a spacing so zeros of cos(p0 q / hbar) fall mid-cell.
    static Grid1D periodic_for_momentum(double p0, double hbar, int n_periods, std::size_t n_points,
                                        bool nodes_between_points = false);

    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return dq_; }
    double origin() const noexcept { return origin_; }
    Boundary boundary() const noexcept { return boundary_; }
    bool periodic() const noexcept { return boundary_ == Boundary::periodic; }

    double extent() const noexcept { return static_cast<double>(n_) * dq_; }
    double coordinate(std::size_t i) const noexcept { return origin_ + static_cast<double>(i) * dq_; }
    double lower_edge() const noexcept { return origin_ - 0.5 * dq_; }
    double upper_edge() const noexcept { return lower_edge() + extent(); }
    double center() const noexcept { return lower_edge() + 0.5 * extent(); }
    bool contains(double q) const noexcept { return q >= lower_edge() && q < upper_edge(); }

    /// Periodic image of q inside [lower_edge, upper_edge).
    double wrap(double q) const noexcept;

    std::vector<double> coordinates() const;

    /// Angular wavenumbers in FFT order. With `zero_nyquist` the unpaired
    /// Nyquist mode of an even-length grid is set to zero (first derivatives).
    std::vector<double> wavenumbers(bool zero_nyquist) const;

    bool operator==(const Grid1D&) const = default;

private:
    std::size_t n_;
    double dq_;
    double origin_;
    Boundary boundary_;
};

/// Two-axis configuration lattice, axis a (system) major, axis b minor.
class Grid2D {
public:
    Grid2D(Grid1D grid_a, Grid1D grid_b) : a_(grid_a), b_(grid_b) {}

    const Grid1D& a() const noexcept { return a_; }
    const Grid1D& b() const noexcept { return b_; }
    std::size_t size() const noexcept { return a_.size() * b_.size(); }
    std::size_t index(std::size_t ia, std::size_t ib) const noexcept { return ia * b_.size() + ib; }
    double cell_area() const noexcept { return a_.spacing() * b_.spacing(); }

    bool operator==(const Grid2D&) const = default;

private:
    Grid1D a_;
    Grid1D b_;
};

}  // namespace erps

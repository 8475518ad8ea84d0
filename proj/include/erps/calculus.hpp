#pragma once

#include <span>
#include <vector>

#include "erps/fft.hpp"
#include "erps/grid.hpp"

namespace erps {

enum class DiffScheme {
    spectral,  ///< Fourier differentiation, exact for band-limited periodic data.
    central,   ///< Second-order central differences, one-sided at truncated ends.
};

/// Spectral on periodic grids, central differences on truncated ones.
DiffScheme default_scheme(const Grid1D& grid) noexcept;

std::vector<cplx> derivative(std::span<const cplx> f, const Grid1D& grid, DiffScheme scheme);
std::vector<double> derivative(std::span<const double> f, const Grid1D& grid, DiffScheme scheme);

/// Rectangle-rule integral sum f_i dq.
double integrate(std::span<const double> f, const Grid1D& grid);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double x) noexcept;

}  // namespace erps

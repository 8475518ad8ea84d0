#pragma once

#include <cstdint>

#include "erps/state_spec.hpp"

namespace erps {

struct RandomStateOptions {
    int min_components = 1;
    int max_components = 4;
    /// Component centres lie within +-center_spread * L of the grid centre.
    double center_spread = 0.125;
    /// Widths are drawn log-uniformly from [min_width, max_width] * L.
    double min_width = 1.0 / 160.0;
    double max_width = 1.0 / 40.0;
    /// Mean momenta up to this fraction of the grid's Nyquist momentum.
    double momentum_fraction = 0.2;
};

/// Deterministic random superposition of Gaussians, a pure function of
/// (grid, hbar, seed, index). Components are well inside the grid, so the
/// state has interior support and no grid-limited position moments.
StateSpec random_smooth_state(const Grid1D& grid, double hbar, std::uint64_t seed, std::uint64_t index,
                              const RandomStateOptions& options = {});

}  // namespace erps

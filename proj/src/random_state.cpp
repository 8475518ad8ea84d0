#include "erps/random_state.hpp"

#include <cmath>
#include <numbers>

#include "erps/error.hpp"
#include "erps/rng.hpp"

namespace erps {

StateSpec random_smooth_state(const Grid1D& grid, double hbar, std::uint64_t seed, std::uint64_t index,
                              const RandomStateOptions& options) {
    if (options.min_components < 1 || options.max_components < options.min_components) {
        throw PreconditionError("random_smooth_state: invalid component range");
    }
    CounterRng rng(seed, static_cast<std::uint64_t>(RngStream::random_states), index);
    const double length = grid.extent();
    const double p_max = options.momentum_fraction * hbar * std::numbers::pi / grid.spacing();
    const auto span = static_cast<std::uint64_t>(options.max_components - options.min_components + 1);
    const int count = options.min_components + static_cast<int>(rng.next_u64() % span);

    const auto component = [&] {
        const double q0 = grid.center() + (2.0 * rng.uniform() - 1.0) * options.center_spread * length;
        const double log_lo = std::log(options.min_width * length), log_hi = std::log(options.max_width * length);
        const double sigma = std::exp(log_lo + rng.uniform() * (log_hi - log_lo));
        const double p0 = (2.0 * rng.uniform() - 1.0) * p_max;
        return StateSpec::gaussian(q0, sigma, p0);
    };

    StateSpec spec = component();
    for (int c = 1; c < count; ++c) {
        const double magnitude = 0.2 + rng.uniform();
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        // Earlier components keep weight 1; the new branch gets a random complex weight.
        spec = StateSpec::superposition(spec, component(), cplx(1.0, 0.0), std::polar(magnitude, phase));
    }
    return spec;
}

}  // namespace erps

#include "erps/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "erps/error.hpp"

namespace erps {

std::size_t PolarFields::masked_count() const {
    return static_cast<std::size_t>(std::count(node_mask.begin(), node_mask.end(), true));
}

PolarFields polar_decompose(const WaveFunction& psi, const PolarOptions& options) {
    if (!psi.is_normalized(options.norm_tolerance)) {
        throw PreconditionError("polar_decompose requires a normalized wave function (norm = " +
                                std::to_string(psi.norm()) + ")");
    }
    const Grid1D& grid = psi.grid();
    const std::size_t n = grid.size();
    const double hbar = psi.hbar();
    const DiffScheme scheme = options.scheme.value_or(default_scheme(grid));

    PolarFields f{grid, hbar, 0.0, scheme, psi.density(), std::vector<double>(n), std::vector<double>(n),
                  std::vector<double>(n), std::vector<bool>(n)};

    const double peak = *std::max_element(f.rho.begin(), f.rho.end());
    f.rho_floor = options.absolute_floor.value_or(options.relative_floor * peak);
    for (std::size_t i = 0; i < n; ++i) f.node_mask[i] = f.rho[i] < f.rho_floor;
    if (f.masked_count() == n) throw NumericalError("polar_decompose: density is below the floor everywhere");

    const auto amp = psi.amplitudes();
    double prev = std::arg(amp[0]);
    f.s_action[0] = hbar * prev;
    for (std::size_t i = 1; i < n; ++i) {
        const double cur = std::arg(amp[i]);
        f.s_action[i] = f.s_action[i - 1] + hbar * wrap_angle(cur - prev);
        prev = cur;
    }

    // Both gradients come from conj(psi) * psi'. Differentiating rho directly
    // loses several digits in the tails, where rho is tiny but |psi| is not.
    const auto dpsi = derivative(amp, grid, scheme);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
        if (f.node_mask[i]) {
            f.grad_s[i] = nan;
            f.grad_log_rho[i] = nan;
            continue;
        }
        const cplx c = std::conj(amp[i]) * dpsi[i];
        f.grad_s[i] = hbar * c.imag() / f.rho[i];
        f.grad_log_rho[i] = 2.0 * c.real() / f.rho[i];
    }
    return f;
}

WaveFunction reconstruct(const PolarFields& fields) {
    std::vector<cplx> amp(fields.rho.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
        amp[i] = std::polar(std::sqrt(fields.rho[i]), fields.s_action[i] / fields.hbar);
    }
    return WaveFunction(fields.grid, std::move(amp), fields.hbar);
}

PolarFields2D polar_decompose(const WaveFunction2D& psi, double relative_floor) {
    const Grid2D& grid = psi.grid();
    const std::size_t na = grid.a().size(), nb = grid.b().size();
    const auto amp = psi.amplitudes();
    PolarFields2D f{grid, psi.hbar(), std::vector<double>(grid.size()), std::vector<double>(grid.size()), 0.0,
                    false};
    for (std::size_t i = 0; i < amp.size(); ++i) f.rho[i] = std::norm(amp[i]);
    const double peak = *std::max_element(f.rho.begin(), f.rho.end());
    const double floor = relative_floor * peak;

    // Phase in units of hbar while unwrapping; scaled at the end.
    std::vector<double> phase(grid.size());
    phase[0] = std::arg(amp[0]);
    for (std::size_t ia = 1; ia < na; ++ia) {
        const std::size_t cur = grid.index(ia, 0), up = grid.index(ia - 1, 0);
        phase[cur] = phase[up] + wrap_angle(std::arg(amp[cur]) - std::arg(amp[up]));
    }
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t ib = 1; ib < nb; ++ib) {
            const std::size_t cur = grid.index(ia, ib), left = grid.index(ia, ib - 1);
            phase[cur] = phase[left] + wrap_angle(std::arg(amp[cur]) - std::arg(amp[left]));
        }
    }

    double residual = 0.0;
    for (std::size_t ia = 1; ia < na; ++ia) {
        for (std::size_t ib = 0; ib < nb; ++ib) {
            const std::size_t cur = grid.index(ia, ib), up = grid.index(ia - 1, ib);
            if (f.rho[cur] < floor || f.rho[up] < floor) continue;
            const double d = phase[cur] - phase[up];
            residual = std::max(residual, std::abs(d - wrap_angle(d)));
        }
    }
    f.consistency_residual = residual;
    f.winding_flag = residual >= std::numbers::pi;
    for (std::size_t i = 0; i < phase.size(); ++i) f.s_action[i] = psi.hbar() * phase[i];
    return f;
}

}  // namespace erps

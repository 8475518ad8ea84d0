#include "erps/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "erps/calculus.hpp"
#include "erps/error.hpp"

namespace erps {

std::vector<cplx> apply_momentum(const WaveFunction& psi) {
    auto d = derivative(psi.amplitudes(), psi.grid(), DiffScheme::spectral);
    const cplx factor(0.0, -psi.hbar());
    for (auto& v : d) v *= factor;
    return d;
}

double quantum_expectation(const WaveFunction& psi, const Observable& obs) {
    return quantum_expectation(psi, ObservableFields::tabulate(obs, psi.grid()));
}

double quantum_expectation(const WaveFunction& psi, const ObservableFields& obs) {
    const std::size_t n = psi.size();
    if (obs.a.size() != n || obs.b.size() != n || obs.c.size() != n) {
        throw PreconditionError("observable fields do not match the grid of the wave function");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(obs.a[i]) || !std::isfinite(obs.b[i]) || !std::isfinite(obs.c[i])) {
            throw PreconditionError("observable coefficients must be finite");
        }
    }
    if (!psi.is_normalized(1e-8)) throw PreconditionError("quantum_expectation requires a normalized state");

    const auto amp = psi.amplitudes();
    const auto p_psi = apply_momentum(psi);
    double sum_a = 0.0, sum_b = 0.0, sum_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_a += obs.a[i] * std::norm(amp[i]);
        // <psi|(B p + p B)/2|psi> = Re <psi|B p psi> for real B.
        sum_b += obs.b[i] * (std::conj(amp[i]) * p_psi[i]).real();
        sum_c += obs.c[i] * std::norm(p_psi[i]);
    }
    return (sum_a + sum_b + sum_c) * psi.grid().spacing();
}

double quantum_variance(const WaveFunction& psi, Quadrature which) {
    if (!psi.is_normalized(1e-8)) throw PreconditionError("quantum_variance requires a normalized state");
    const double dq = psi.grid().spacing();
    const auto amp = psi.amplitudes();
    double m1 = 0.0, m2 = 0.0;
    if (which == Quadrature::position) {
        if (psi.grid().periodic()) require_interior_support(psi);
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double q = psi.grid().coordinate(i);
            const double w = std::norm(amp[i]);
            m1 += q * w;
            m2 += q * q * w;
        }
        m1 *= dq;
        m2 *= dq;
        // Centre before squaring to limit cancellation for offset grids.
        double var = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double d = psi.grid().coordinate(i) - m1;
            var += d * d * std::norm(amp[i]);
        }
        return var * dq;
    }
    const auto p_psi = apply_momentum(psi);
    for (std::size_t i = 0; i < amp.size(); ++i) {
        m1 += (std::conj(amp[i]) * p_psi[i]).real();
        m2 += std::norm(p_psi[i]);
    }
    m1 *= dq;
    m2 *= dq;
    return std::max(0.0, m2 - m1 * m1);
}

cplx commutator_expectation(const WaveFunction& psi) {
    require_interior_support(psi);
    if (!psi.is_normalized(1e-8)) throw PreconditionError("commutator_expectation requires a normalized state");
    const Grid1D& grid = psi.grid();
    const std::size_t n = grid.size();
    const double center = grid.center();
    const auto amp = psi.amplitudes();

    std::vector<cplx> q_psi(n);
    for (std::size_t i = 0; i < n; ++i) q_psi[i] = (grid.coordinate(i) - center) * amp[i];
    const auto p_psi = apply_momentum(psi);
    const auto p_q_psi = apply_momentum(WaveFunction(grid, q_psi, psi.hbar()));

    cplx sum{};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx qp = (grid.coordinate(i) - center) * p_psi[i];
        sum += std::conj(amp[i]) * (qp - p_q_psi[i]);
    }
    return sum * grid.spacing();
}

bool has_interior_support(const WaveFunction& psi) {
    const std::size_t n = psi.size();
    const double threshold = support_threshold * psi.peak_density();
    const auto amp = psi.amplitudes();
    for (std::size_t i = 0; i < boundary_margin_points && i < n; ++i) {
        if (std::norm(amp[i]) > threshold || std::norm(amp[n - 1 - i]) > threshold) return false;
    }
    return true;
}

void require_interior_support(const WaveFunction& psi) {
    if (!has_interior_support(psi)) {
        throw BoundarySupportError("state has support within " + std::to_string(boundary_margin_points) +
                                   " spacings of the grid boundary");
    }
}

}  // namespace erps

#pragma once

#include <vector>

#include "erps/observable.hpp"
#include "erps/wavefunction.hpp"

namespace erps {

/// p psi = -i hbar dpsi/dq, always applied spectrally.
std::vector<cplx> apply_momentum(const WaveFunction& psi);

/// <A(q)> + <(B p + p B)/2> + <p C(q) p>.
double quantum_expectation(const WaveFunction& psi, const Observable& obs);
double quantum_expectation(const WaveFunction& psi, const ObservableFields& obs);

enum class Quadrature { position, momentum };

/// <x^2> - <x>^2 for x = q or p. Position moments on a periodic grid are
/// refused unless the state keeps clear of the boundary.
double quantum_variance(const WaveFunction& psi, Quadrature which);

/// <[q, p]> with both products formed explicitly; iħ for smooth interior states.
cplx commutator_expectation(const WaveFunction& psi);

/// Number of boundary points that must carry no support.
inline constexpr std::size_t boundary_margin_points = 5;
/// Density threshold, relative to the peak, that counts as support.
inline constexpr double support_threshold = 1e-16;

/// Throws BoundarySupportError when any point within `boundary_margin_points`
/// of either end has density above support_threshold * peak.
void require_interior_support(const WaveFunction& psi);
bool has_interior_support(const WaveFunction& psi);

}  // namespace erps

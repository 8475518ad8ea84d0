#pragma once

#include <memory>
#include <string>
#include <variant>

#include "erps/fft.hpp"
#include "erps/grid.hpp"
#include "erps/wavefunction.hpp"

namespace erps {

struct StateSpec;

/// exp(i p0 q / hbar).
struct PlaneWaveSpec {
    double p0 = 0.0;
};

/// (2 pi sigma^2)^{-1/4} exp(-(q - q0)^2 / (4 sigma^2) + i p0 q / hbar);
/// sigma is the standard deviation of the position density.
struct GaussianSpec {
    double q0 = 0.0;
    double sigma = 1.0;
    double p0 = 0.0;
};

/// cos(p0 q / hbar), the equal-weight sum of the two plane waves +-p0.
struct CosineSpec {
    double p0 = 1.0;
};

/// w1 * phi1 + w2 * phi2 with each phi_j normalised on the grid first.
struct SuperpositionSpec {
    std::shared_ptr<const StateSpec> first;
    std::shared_ptr<const StateSpec> second;
    cplx w1{1.0, 0.0};
    cplx w2{1.0, 0.0};
};

struct StateSpec {
    std::variant<PlaneWaveSpec, GaussianSpec, CosineSpec, SuperpositionSpec> kind;

    static StateSpec plane_wave(double p0) { return {PlaneWaveSpec{p0}}; }
    static StateSpec gaussian(double q0, double sigma, double p0) { return {GaussianSpec{q0, sigma, p0}}; }
    static StateSpec cosine(double p0) { return {CosineSpec{p0}}; }
    static StateSpec superposition(StateSpec a, StateSpec b, cplx w1 = 1.0, cplx w2 = 1.0);
};

/// Product psi_a(q_a) psi_b(q_b) of two 1D specs.
struct ProductSpec {
    StateSpec a;
    StateSpec b;
};

/// Short stable identifier, e.g. "gaussian(q0=0,sigma=1,p0=1)".
std::string describe(const StateSpec& spec);

/// Samples the spec on the grid, without normalisation.
std::vector<cplx> sample_amplitudes(const StateSpec& spec, const Grid1D& grid, double hbar);

/// Samples and normalises. Plane waves and cosines on a periodic grid must
/// wind an integer number of times across the domain.
WaveFunction build_state(const StateSpec& spec, const Grid1D& grid, double hbar);

WaveFunction2D build_product(const ProductSpec& spec, const Grid2D& grid, double hbar);

}  // namespace erps

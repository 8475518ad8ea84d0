#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "erps/observable.hpp"
#include "erps/polar.hpp"
#include "erps/state_spec.hpp"
#include "erps/xi_model.hpp"

namespace erps {

/// Linear interpolation of a grid field at q. Between a masked and an
/// unmasked point the unmasked value is held constant; a query whose nearest
/// grid point is masked throws NodeQueryError.
double interpolate_field(std::span<const double> field, const std::vector<bool>& mask, const Grid1D& grid,
                         double q);

/// p(q; xi) = dS/dq + (xi / 2) d ln(rho)/dq with linearly interpolated fields.
double momentum_field(const PolarFields& fields, double xi, double q);

/// Best estimate p_bar = dS/dq and error scale d ln(rho)/dq, so the single-shot
/// estimation error is (xi / 2) * eps_scale.
struct EstimateField {
    Grid1D grid;
    std::vector<double> p_bar;
    std::vector<double> eps_scale;
    std::vector<bool> node_mask;
};

EstimateField estimate_field(const PolarFields& fields);

/// Inverse-CDF sampler over grid cells. Cell i is [q_i - dq/2, q_i + dq/2)
/// with mass density[i] * dq, uniform inside (piecewise-linear CDF). Masked
/// cells carry no mass.
class CellSampler {
public:
    CellSampler(const Grid1D& grid, std::span<const double> density, const std::vector<bool>& mask);

    struct Draw {
        std::size_t cell;
        double q;
    };
    Draw sample(double u_cell, double u_offset) const;

    double total_mass() const noexcept { return cumulative_.back(); }

private:
    Grid1D grid_;
    std::vector<double> cumulative_;
};

struct PhaseSpaceEnsemble {
    std::vector<double> q;
    std::vector<double> p;
    std::vector<double> xi;
    std::string source_state;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return q.size(); }
};

/// Draws n members (q, p, xi): q from rho, xi from chi, p from momentum_field.
/// The result depends only on (fields, xi_model, n, seed), not on `workers`.
PhaseSpaceEnsemble sample_ensemble(const PolarFields& fields, const XiModel& xi_model, std::size_t n,
                                   std::uint64_t seed, unsigned workers = 1, std::string source_state = {});

struct MeanWithError {
    double mean;
    double std_error;
};

MeanWithError ensemble_average(const PhaseSpaceEnsemble& ens, const Observable& obs);

struct OpticalEquivalenceReport {
    std::string observable;
    double mc_mean;
    double std_error;
    double quantum_value;
    double z_score;
    bool pass;
};

/// Threshold on |mc_mean - quantum_value| / std_error.
inline constexpr double optical_equivalence_z_limit = 4.0;

/// Compares an ensemble average against the spectral expectation value. The
/// standard error is floored at 1e-12 * max(1, |quantum_value|) so integrands
/// with zero Monte-Carlo variance are judged at roundoff level.
OpticalEquivalenceReport compare_with_quantum(const PhaseSpaceEnsemble& ens, const WaveFunction& psi,
                                              const Observable& obs);

OpticalEquivalenceReport optical_equivalence_check(const StateSpec& spec, const Grid1D& grid, double hbar,
                                                   const Observable& obs, const XiModel& xi_model, std::size_t n,
                                                   std::uint64_t seed);

/// CSV with header "q,p,xi"; at most `max_rows` rows when non-zero.
/// Total-variation distance between the histogram of `samples` and the
/// reference density, both binned on blocks of `cells_per_bin` grid cells.
/// Non-finite samples are ignored; the density is renormalized over the grid.
double histogram_tv(std::span<const double> samples, const Grid1D& grid, std::span<const double> density,
                    std::size_t cells_per_bin);

void write_ensemble_csv(std::ostream& os, const PhaseSpaceEnsemble& ens, std::size_t max_rows = 0);

}  // namespace erps

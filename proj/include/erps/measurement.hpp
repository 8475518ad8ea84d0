#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "erps/state_spec.hpp"
#include "erps/wavefunction.hpp"
#include "erps/xi_model.hpp"

namespace erps {

/// Impulsive momentum measurement of a system (axis a) by a Gaussian pointer
/// (axis b) through H = g p_A p_B acting for a time T.
struct MeasurementConfig {
    StateSpec system_state = StateSpec::cosine(1.0);
    double p0 = 1.0;                  ///< Momentum scale; outcomes are +p0 or -p0.
    GaussianSpec pointer{0.0, 0.5, 0.0};
    double coupling_g = 1.0;
    double duration_T = 3.0;
    double separation_factor = 6.0;   ///< Requires g p0 T >= separation_factor * pointer.sigma.
    double hbar = 1.0;
    int system_periods = 8;           ///< System axis holds this many wavelengths of p0.
    std::size_t n_a = 1024;
    std::size_t n_b = 1024;
    double pointer_length = 24.0;     ///< Extent of the pointer axis, centred on pointer.q0.

    /// Throws ConfigError naming the offending field.
    void validate() const;

    Grid2D grid() const;
    double pointer_shift() const { return coupling_g * p0 * duration_T; }
};

/// Applies exp(-i g p_A p_B T / hbar) in the two-axis Fourier representation.
WaveFunction2D apply_impulsive_coupling(const WaveFunction2D& psi, double coupling_g, double duration_T);

/// Builds system x pointer from the config and couples them. Throws
/// BoundarySupportError when the shifted pointer reaches the grid edge.
WaveFunction2D entangling_propagate(const MeasurementConfig& config);

/// Same for an explicit system state on the config's system axis.
WaveFunction2D entangling_propagate(const WaveFunction& system, const MeasurementConfig& config);

struct MeasurementRecord {
    double outcome;          ///< +p0 or -p0.
    double pointer_reading;  ///< Sampled q_B.
    std::size_t pointer_index;
    WaveFunction post_state;  ///< Normalized conditional slice at the reading.
    double post_ms_error_p;
    bool post_grid_limited;   ///< E_q^2 of the post state is only a grid bound.
    std::size_t retries;      ///< Dead-zone samples discarded before acceptance.
};

/// Relative pointer density below which a sample counts as inter-packet dead zone.
inline constexpr double dead_zone_ratio = 1e-10;

/// Samples q_B from the pointer marginal on the readout RNG stream at
/// (seed, run_index), assigns the outcome by the midpoint between the two
/// packet centres and collapses the system onto the conditional slice.
MeasurementRecord readout_and_collapse(const WaveFunction2D& entangled, const MeasurementConfig& config,
                                       std::uint64_t seed, std::uint64_t run_index = 0);

struct OutcomeCounts {
    std::size_t n_runs = 0;
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
    double max_post_ms_error_p = 0.0;
    double max_post_momentum_deviation = 0.0;  ///< max | <p>_post - outcome | / p0.
    std::vector<MeasurementRecord> records;     ///< Kept only when requested.
};

/// Entangles `system` once and draws n_runs independent readouts.
OutcomeCounts repeated_readouts(const WaveFunction& system, const MeasurementConfig& config, std::size_t n_runs,
                                std::uint64_t seed, bool keep_records = false);

struct RepeatabilityReport {
    double expected_outcome;
    std::size_t n_trials;
    std::size_t n_same;
    bool pass;  ///< Every trial reproduced the first outcome.
};

/// Re-measures record.post_state with a fresh pointer n_trials times.
RepeatabilityReport repeatability_check(const MeasurementRecord& record, const MeasurementConfig& config,
                                        std::uint64_t seed, std::size_t n_trials = 1000);

struct BornReport {
    std::size_t n_runs;
    std::size_t n_plus;
    std::size_t n_minus;
    double freq_plus;
    double expected_plus;    ///< |alpha|^2 from projecting onto exp(+-i p0 q / hbar).
    double outside_mass;     ///< Norm not captured by the two plane waves.
    double std_error;        ///< Binomial standard error at expected_plus.
    double z_score;          ///< 0 when the expectation is deterministic and matched.
    double chi_square;       ///< Pearson statistic over the two outcomes (1 dof).
    bool pass;               ///< Frequency within 4 standard errors.
};

BornReport born_statistics(const StateSpec& system, const MeasurementConfig& config, std::size_t n_runs,
                           std::uint64_t seed);

enum class XiCorrelation { global_xi, separable_xi };

const char* to_string(XiCorrelation m) noexcept;

struct MomentumAtom {
    double p_a;
    double p_b;
    double probability;
};

struct PrepIndependenceReport {
    XiCorrelation mode;
    double q_a;
    double q_b;
    bool degenerate;  ///< A conditioning point has zero density gradient.
    std::string degenerate_reason;
    std::vector<MomentumAtom> joint;
    std::vector<MomentumAtom> product;  ///< Product of the joint's marginals.
    double tv_distance;
};

/// Conditional law of (p_A, p_B) at (q_A, q_B) for two independently
/// prepared Gaussian systems. Requires a discrete xi model.
PrepIndependenceReport preparation_independence_diagnostic(const GaussianSpec& state_a, const GaussianSpec& state_b,
                                                           const XiModel& xi_model, XiCorrelation mode, double q_a,
                                                           double q_b);

/// Columns run_id,pointer_reading,outcome,post_ms_error_p.
void write_measurement_log_csv(std::ostream& os, const std::vector<MeasurementRecord>& records);

}  // namespace erps

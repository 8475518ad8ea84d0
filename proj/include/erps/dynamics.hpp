#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "erps/calculus.hpp"
#include "erps/state_spec.hpp"
#include "erps/wavefunction.hpp"

namespace erps {

struct HamiltonianSpec {
    double mass = 1.0;
    std::vector<double> potential;  ///< V on the grid points; empty means V = 0.
    double coupling_g = 0.0;        ///< Two-DOF coupling H = g p_A p_B (used by measurement).

    static HamiltonianSpec free(double mass);
    /// V = m omega^2 (q - center)^2 / 2 sampled on the grid.
    static HamiltonianSpec harmonic(const Grid1D& grid, double mass, double omega, double center = 0.0);

    /// Throws PreconditionError when mass <= 0, the potential is non-finite
    /// or its size does not match the grid.
    void validate(const Grid1D& grid) const;
};

/// Strang split-step propagator with precomputed phase factors.
class SplitStepPropagator {
public:
    /// Negative dt runs the scheme backwards in time. Emits a warning when
    /// |dt| exceeds 10 m dq^2 / hbar or the grid is truncated.
    SplitStepPropagator(const Grid1D& grid, const HamiltonianSpec& ham, double hbar, double dt);

    void step(std::vector<cplx>& amplitudes) const;

    double dt() const noexcept { return dt_; }

private:
    std::vector<cplx> half_potential_;
    std::vector<cplx> kinetic_;
    double dt_;
};

/// Largest step for which no warning is emitted: 10 m dq^2 / hbar.
double step_size_guideline(const Grid1D& grid, double mass, double hbar);

WaveFunction propagate(const WaveFunction& psi, const HamiltonianSpec& ham, double dt, std::size_t n_steps);

/// States at steps 0, every, 2 every, ... up to n_steps (inclusive when divisible).
std::vector<WaveFunction> propagate_snapshots(const WaveFunction& psi, const HamiltonianSpec& ham, double dt,
                                              std::size_t n_steps, std::size_t every = 1);

/// <H> = integral V rho dq + <p^2> / 2m with p applied spectrally.
double average_energy(const WaveFunction& psi, const HamiltonianSpec& ham);

struct ContinuityReport {
    /// Residual d rho/dt + d(rho dS/dq / m)/dq at each interior snapshot 1..K-2.
    std::vector<std::vector<double>> residuals;
    std::vector<double> l2_norms;  ///< sqrt(sum r^2 dq) per interior snapshot.
    double max_l2;
    bool node_flag;  ///< Some snapshot has a masked point between unmasked ones.
};

/// Snapshots must be consecutive with spacing dt. The flux rho dS/dq is
/// evaluated as hbar Im(conj(psi) psi'), so it stays finite at nodes.
ContinuityReport continuity_residual(std::span<const WaveFunction> snapshots, double mass, double dt,
                                     std::optional<DiffScheme> scheme = std::nullopt);

struct TrajectoryOptions {
    std::size_t record_every = 1;  ///< Store positions every k steps (the final step is always stored).
};

struct TrajectoryBundle {
    std::size_t n_traj = 0;
    std::vector<double> times;
    /// Row-major (trajectory, record); NaN after a trajectory stops.
    std::vector<double> positions;
    /// Step at which each stopped trajectory hit a masked node or left a truncated grid.
    std::vector<std::pair<std::size_t, std::size_t>> stopped;

    double at(std::size_t traj, std::size_t record) const { return positions[traj * times.size() + record]; }
    std::vector<double> column(std::size_t record) const;
};

/// Bohmian trajectories q' = (dS/dq)/m, explicit midpoint in time. Velocity
/// fields come from polar_decompose of each propagated step and are linearly
/// interpolated in space and, at the half step, in time. Initial positions
/// are drawn from |psi_0|^2 on the trajectories RNG stream.
TrajectoryBundle integrate_trajectories(const WaveFunction& psi0, const HamiltonianSpec& ham, double dt,
                                        std::size_t n_steps, std::size_t n_traj, std::uint64_t seed,
                                        const TrajectoryOptions& options = {});

enum class ClassicalLimitStatus { scaling, exactly_classical, undefined_ratio };

const char* to_string(ClassicalLimitStatus s) noexcept;

struct ClassicalLimitReport {
    std::vector<double> hbar_values;
    std::vector<double> rms_error;   ///< sqrt(<xi^2>/4 J_q) = (hbar/2) sqrt(J_q).
    std::vector<double> rms_grad_s;  ///< sqrt(integral (dS/dq)^2 rho dq).
    std::vector<double> ratios;      ///< Empty unless status is scaling.
    std::optional<double> slope;     ///< Least-squares slope of log(ratio) against log(hbar).
    ClassicalLimitStatus status;
};

/// Evaluates one state spec at each hbar_eff on a fixed grid (at least two values).
ClassicalLimitReport classical_limit_scan(const StateSpec& spec, const Grid1D& grid,
                                          std::span<const double> hbar_values);

/// Columns t,q,re,im,rho,S for every snapshot in sequence.
void write_snapshots_csv(std::ostream& os, std::span<const WaveFunction> snapshots, std::span<const double> times);

/// Columns traj_id,t,q; stopped trajectories end at their last finite record.
void write_trajectories_csv(std::ostream& os, const TrajectoryBundle& bundle);

}  // namespace erps

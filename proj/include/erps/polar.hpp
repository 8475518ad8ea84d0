#pragma once

#include <optional>
#include <vector>

#include "erps/calculus.hpp"
#include "erps/wavefunction.hpp"

namespace erps {

/// Polar (Madelung) form psi = sqrt(rho) exp(i S / hbar) on a grid.
///
/// Derivative fields are NaN wherever `node_mask` is set; every consumer
/// either skips masked points or reports a NodeQueryError.
struct PolarFields {
    Grid1D grid;
    double hbar;
    double rho_floor;
    DiffScheme scheme;
    std::vector<double> rho;
    std::vector<double> s_action;      ///< Unwrapped hbar * arg(psi).
    std::vector<double> grad_s;        ///< Momentum field dS/dq.
    std::vector<double> grad_log_rho;  ///< d ln(rho) / dq.
    std::vector<bool> node_mask;       ///< rho < rho_floor.

    bool masked(std::size_t i) const { return node_mask[i]; }
    std::size_t masked_count() const;
};

struct PolarOptions {
    /// Floor relative to the peak density; ignored when `absolute_floor` is set.
    double relative_floor = 1e-12;
    std::optional<double> absolute_floor;
    std::optional<DiffScheme> scheme;
    /// Tolerance of the normalisation precondition.
    double norm_tolerance = 1e-8;
};

/// Polar decomposition with sequential phase unwrapping along the grid.
///
/// grad_log_rho is (d rho / dq) / rho. grad_s is the current-density form
/// hbar Im(conj(psi) dpsi/dq) / rho, which equals dS/dq without having to
/// differentiate an unwrapped phase that need not be periodic.
PolarFields polar_decompose(const WaveFunction& psi, const PolarOptions& options = {});

/// sqrt(rho) exp(i S / hbar) from the stored fields.
WaveFunction reconstruct(const PolarFields& fields);

/// 2D unwrap: column a first along axis a at b = 0, then every row along b.
struct PolarFields2D {
    Grid2D grid;
    double hbar;
    std::vector<double> rho;
    std::vector<double> s_action;
    /// Largest |wrap(dS_a) - dS_a| over vertical neighbour pairs after the
    /// row-wise unwrap, in radians. Zero for a consistently unwrapped field.
    double consistency_residual;
    /// Set when the residual reaches pi, i.e. the phase winds around a node.
    bool winding_flag;
};

PolarFields2D polar_decompose(const WaveFunction2D& psi, double relative_floor = 1e-12);

}  // namespace erps

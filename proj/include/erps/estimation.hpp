#pragma once

#include <optional>
#include <vector>

#include "erps/polar.hpp"
#include "erps/wavefunction.hpp"

namespace erps {

/// E_p^2 = (hbar^2 / 4) * integral (d ln rho / dq)^2 rho dq over unmasked points.
double ms_error_p(const PolarFields& fields);

/// J_q = integral (d ln rho / dq)^2 rho dq.
double fisher_q(const PolarFields& fields);

struct PositionError {
    double value;       ///< integral (q - q_o)^2 rho dq on the grid.
    double mean;        ///< q_o.
    bool grid_limited;  ///< Density at a domain edge exceeds 1e-6 of the peak.
};

/// Density ratio, edge over peak, above which E_q^2 is only a grid-limited lower bound.
inline constexpr double grid_limited_edge_ratio = 1e-6;

PositionError ms_error_q(const PolarFields& fields);

struct CramerRaoPositionReport {
    double ms_error_q;
    double inv_fisher_q;
    double ratio;  ///< ms_error_q * fisher_q, >= 1 with equality for Gaussians.
};

/// Throws PreconditionError on grid-limited input.
CramerRaoPositionReport cramer_rao_position_check(const PolarFields& fields);

struct CramerRaoMomentumReport {
    double per_xi_ms;     ///< Quadrature of (p(q; xi) - p_o)^2 rho.
    double inv_fisher_p;  ///< 1 / J_p with J_p = 4 sigma^2 / xi^2.
    double ratio;         ///< per_xi_ms * J_p.
    double efficiency_constant;  ///< a = -xi^2 / (4 sigma^2).
    double linear_slope;         ///< Fitted slope of p(q; xi) - p_o in q.
    double linear_residual;      ///< Max deviation from the affine fit within 3 sigma.
};

/// Per-xi Cramer-Rao check for the Gaussian family (q_o = 0, p_o = 0 without
/// loss of generality), evaluated on an internal grid of width 24 sigma.
CramerRaoMomentumReport cramer_rao_momentum_gaussian_check(double sigma_q, double xi, double hbar);

struct VarianceDecomposition {
    double ms_error_p;    ///< E_p^2.
    double dispersion_p;  ///< Delta_p^2, spread of the estimator dS/dq.
    double var_p;         ///< sigma_p^2 from the spectral momentum moments.
};

VarianceDecomposition variance_decomposition(const WaveFunction& psi, const PolarFields& fields);

/// Slack on the inequalities, in units of hbar^2.
inline constexpr double uncertainty_slack = 1e-8;

struct UncertaintyReport {
    double ms_error_p;
    std::optional<double> ms_error_q;  ///< Empty when grid limited.
    double var_p;
    std::optional<double> var_q;
    std::optional<double> product_pq;  ///< E_p^2 E_q^2.
    std::optional<double> hk_product;  ///< sigma_p^2 sigma_q^2.
    std::optional<double> robertson_rhs;  ///< |<[q, p]>|^2 / 4.
    bool grid_limited;
    bool tradeoff_holds;     ///< E_p^2 E_q^2 >= hbar^2/4 - slack.
    bool kennard_holds;      ///< sigma_p^2 sigma_q^2 >= hbar^2/4 - slack.
    bool robertson_holds;    ///< E_p^2 E_q^2 >= |<[q,p]>|^2/4 - slack.
};

UncertaintyReport uncertainty_suite(const WaveFunction& psi, const PolarFields& fields);

/// Flat record of the estimation quantities of one state.
struct EstimationReport {
    double ms_error_p;
    double ms_error_q;
    double fisher_q;
    double dispersion_p;
    double var_p;
    double var_q;
    double product_pq;
    double hk_product;
    bool grid_limited;
};

EstimationReport estimation_report(const WaveFunction& psi, const PolarFields& fields);

/// <q|p|psi> / <q|psi> at grid point i, with p applied spectrally.
cplx weak_value_at(const WaveFunction& psi, std::span<const cplx> p_psi, std::size_t i);

/// Weak value at an arbitrary q using band-limited interpolation of psi and
/// p psi. Throws NodeQueryError when the nearest grid point is masked.
cplx weak_value(const WaveFunction& psi, const PolarFields& fields, double q);

/// Weak value on every grid point; NaN on masked nodes.
std::vector<cplx> weak_value_field(const WaveFunction& psi, const PolarFields& fields);

struct BohmianVelocity {
    std::vector<double> from_phase;       ///< (dS/dq) / m.
    std::vector<double> from_weak_value;  ///< Re(weak value) / m.
    std::vector<bool> node_mask;
};

BohmianVelocity bohmian_velocity_field(const WaveFunction& psi, const PolarFields& fields, double mass);

}  // namespace erps

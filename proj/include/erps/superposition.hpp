#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "erps/calculus.hpp"
#include "erps/state_spec.hpp"

namespace erps {

struct SuperpositionOptions {
    /// Support threshold on the branch densities; default 1e-10 * max(rho_1 + rho_2).
    std::optional<double> overlap_threshold;
    /// Node floor for the combined density, relative to its peak.
    double relative_floor = 1e-12;
    std::optional<DiffScheme> scheme;
};

/// The two weighted branches psi_j = w_j phi_j / N of a superposition, where
/// phi_j is the normalized branch state and N normalizes psi_1 + psi_2.
struct BranchDecomposition {
    Grid1D grid;
    double hbar;
    std::vector<cplx> psi_1;
    std::vector<cplx> psi_2;
    std::vector<double> rho_1;  ///< |psi_1|^2, integrates to the branch mass.
    std::vector<double> rho_2;
    std::vector<double> rho;    ///< |psi_1 + psi_2|^2.
    double mass_1;              ///< integral rho_1 dq.
    double mass_2;
    double prior_1;             ///< |w_1|^2 / (|w_1|^2 + |w_2|^2).
    double prior_2;
};

BranchDecomposition decompose_branches(const SuperpositionSpec& spec, const Grid1D& grid, double hbar);

struct SuperposedFields {
    std::vector<double> p_bar;      ///< Best momentum estimate from the two-branch formula.
    std::vector<double> eps_scale;  ///< d ln(rho)/dq from the two-branch formula.
    std::vector<bool> node_mask;    ///< Combined density below the floor.
};

/// Evaluates p_bar and eps_scale from each branch's modulus, modulus gradient
/// and phase gradient, never from the combined wavefunction.
SuperposedFields superposed_estimate_fields(const SuperpositionSpec& spec, const Grid1D& grid, double hbar,
                                            const SuperpositionOptions& options = {});

struct OverlapReport {
    double overlap_threshold;
    std::vector<std::size_t> support_1;  ///< Indices with rho_1 > threshold.
    std::vector<std::size_t> support_2;
    std::vector<std::size_t> overlap_set;
    std::vector<double> interference_field;  ///< rho - rho_1 - rho_2.
    double interference_linf;

    // Branch MS errors use the individually normalized branches phi_j.
    double ms_error_total;
    double ms_error_branch_1;
    double ms_error_branch_2;
    double mass_1;
    double mass_2;
    double prior_1;
    double prior_2;
    /// E_p^2[psi] - mass_1 E_p^2[phi_1] - mass_2 E_p^2[phi_2].
    double ms_additivity_gap;
    /// E_p^2[psi] - E_p^2[phi_1] - E_p^2[phi_2], no weights.
    double ms_additivity_gap_unweighted;

    double dispersion_total;  ///< Spread of dS/dq under rho.
    double dispersion_branch_1;
    double dispersion_branch_2;

    /// integral |rho - prior_1 rho(phi_1) - prior_2 rho(phi_2)| dq.
    double total_probability_witness;
};

OverlapReport overlap_analysis(const SuperpositionSpec& spec, const Grid1D& grid, double hbar,
                               const SuperpositionOptions& options = {});

struct CompatibilityReport {
    double xi;
    bool overlap_empty;
    std::size_t points_compared;  ///< Overlap points outside the combined node mask.
    double max_deviation_1;       ///< max |p(q; xi)[psi] - p(q; xi)[phi_1]| over the overlap.
    double max_deviation_2;
    std::vector<double> deviation_1;  ///< Per grid point, NaN off the overlap set.
    std::vector<double> deviation_2;
    bool compatible;  ///< Both maxima at most compatibility_tolerance.
};

inline constexpr double compatibility_tolerance = 1e-9;

CompatibilityReport momentum_field_compatibility(const SuperpositionSpec& spec, const Grid1D& grid, double hbar,
                                                 double xi, const SuperpositionOptions& options = {});

/// Columns q,rho,rho_1,rho_2,interference.
void write_interference_csv(std::ostream& os, const Grid1D& grid, const BranchDecomposition& branches,
                            const OverlapReport& report);

}  // namespace erps

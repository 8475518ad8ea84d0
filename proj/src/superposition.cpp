#include "erps/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/polar.hpp"

namespace erps {
namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Modulus a, modulus gradient a' and a * theta' of one branch, where
// theta = S / hbar. All three stay finite where the branch vanishes.
struct BranchVariables {
    std::vector<double> a;
    std::vector<double> da;
    std::vector<double> a_dtheta;
    std::vector<cplx> unit;  // psi / |psi|, 1 where psi = 0
};

BranchVariables branch_variables(const std::vector<cplx>& psi, const Grid1D& grid, DiffScheme scheme) {
    const auto d = derivative(psi, grid, scheme);
    BranchVariables v{std::vector<double>(psi.size()), std::vector<double>(psi.size()),
                      std::vector<double>(psi.size()), std::vector<cplx>(psi.size())};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        v.a[i] = std::abs(psi[i]);
        v.unit[i] = v.a[i] > 0.0 ? psi[i] / v.a[i] : cplx(1.0, 0.0);
        const cplx c = std::conj(v.unit[i]) * d[i];
        v.da[i] = c.real();
        v.a_dtheta[i] = c.imag();
    }
    return v;
}

double dispersion(const PolarFields& f) {
    double mass = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
        if (f.node_mask[i]) continue;
        mass += f.rho[i];
        m1 += f.rho[i] * f.grad_s[i];
    }
    const double mean = m1 / mass;
    double s = 0.0;
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
        if (f.node_mask[i]) continue;
        s += (f.grad_s[i] - mean) * (f.grad_s[i] - mean) * f.rho[i];
    }
    return s * f.grid.spacing();
}

double default_threshold(const BranchDecomposition& b) {
    double peak = 0.0;
    for (std::size_t i = 0; i < b.rho.size(); ++i) peak = std::max(peak, b.rho_1[i] + b.rho_2[i]);
    return 1e-10 * peak;
}

std::vector<bool> combined_mask(const BranchDecomposition& b, double relative_floor) {
    const double peak = *std::max_element(b.rho.begin(), b.rho.end());
    std::vector<bool> mask(b.rho.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = b.rho[i] < relative_floor * peak;
    return mask;
}

}  // namespace

BranchDecomposition decompose_branches(const SuperpositionSpec& spec, const Grid1D& grid, double hbar) {
    if (!spec.first || !spec.second) throw PreconditionError("superposition is missing a branch");
    if (spec.w1 == cplx{} && spec.w2 == cplx{}) throw PreconditionError("superposition weights are both zero");
    const auto phi_1 = build_state(*spec.first, grid, hbar);
    const auto phi_2 = build_state(*spec.second, grid, hbar);
    const std::size_t n = grid.size();

    BranchDecomposition b{grid,          hbar, std::vector<cplx>(n), std::vector<cplx>(n), std::vector<double>(n),
                          std::vector<double>(n), std::vector<double>(n), 0.0, 0.0, 0.0, 0.0};
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(spec.w1 * phi_1[i] + spec.w2 * phi_2[i]);
    norm = std::sqrt(norm * grid.spacing());
    if (!(norm > 0.0)) throw NumericalError("superposition branches cancel on the grid");
    for (std::size_t i = 0; i < n; ++i) {
        b.psi_1[i] = spec.w1 * phi_1[i] / norm;
        b.psi_2[i] = spec.w2 * phi_2[i] / norm;
        b.rho_1[i] = std::norm(b.psi_1[i]);
        b.rho_2[i] = std::norm(b.psi_2[i]);
        b.rho[i] = std::norm(b.psi_1[i] + b.psi_2[i]);
    }
    b.mass_1 = integrate(b.rho_1, grid);
    b.mass_2 = integrate(b.rho_2, grid);
    const double w = std::norm(spec.w1) + std::norm(spec.w2);
    b.prior_1 = std::norm(spec.w1) / w;
    b.prior_2 = std::norm(spec.w2) / w;
    return b;
}

SuperposedFields superposed_estimate_fields(const SuperpositionSpec& spec, const Grid1D& grid, double hbar,
                                            const SuperpositionOptions& options) {
    const auto b = decompose_branches(spec, grid, hbar);
    const DiffScheme scheme = options.scheme.value_or(default_scheme(grid));
    const auto v1 = branch_variables(b.psi_1, grid, scheme);
    const auto v2 = branch_variables(b.psi_2, grid, scheme);

    SuperposedFields out{std::vector<double>(grid.size()), std::vector<double>(grid.size()),
                         combined_mask(b, options.relative_floor)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (out.node_mask[i]) {
            out.p_bar[i] = nan;
            out.eps_scale[i] = nan;
            continue;
        }
        const double a1 = v1.a[i], a2 = v2.a[i];
        const cplx rel = std::conj(v1.unit[i]) * v2.unit[i];  // exp(i (theta_2 - theta_1))
        const double c = rel.real(), s = rel.imag();
        const double rho = a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * c;
        const double flow = a1 * v1.a_dtheta[i] + a2 * v2.a_dtheta[i] +
                            c * (a1 * v2.a_dtheta[i] + a2 * v1.a_dtheta[i]) + s * (a1 * v2.da[i] - a2 * v1.da[i]);
        const double half_drho = a1 * v1.da[i] + a2 * v2.da[i] + c * (a1 * v2.da[i] + a2 * v1.da[i]) +
                                 s * (a2 * v1.a_dtheta[i] - a1 * v2.a_dtheta[i]);
        out.p_bar[i] = hbar * flow / rho;
        out.eps_scale[i] = 2.0 * half_drho / rho;
    }
    return out;
}

OverlapReport overlap_analysis(const SuperpositionSpec& spec, const Grid1D& grid, double hbar,
                               const SuperpositionOptions& options) {
    const auto b = decompose_branches(spec, grid, hbar);
    OverlapReport r{};
    r.overlap_threshold = options.overlap_threshold.value_or(default_threshold(b));
    r.interference_field.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool in1 = b.rho_1[i] > r.overlap_threshold, in2 = b.rho_2[i] > r.overlap_threshold;
        if (in1) r.support_1.push_back(i);
        if (in2) r.support_2.push_back(i);
        if (in1 && in2) r.overlap_set.push_back(i);
        r.interference_field[i] = b.rho[i] - b.rho_1[i] - b.rho_2[i];
        r.interference_linf = std::max(r.interference_linf, std::abs(r.interference_field[i]));
    }

    PolarOptions popts;
    popts.relative_floor = options.relative_floor;
    popts.scheme = options.scheme;
    const auto f = polar_decompose(build_state(StateSpec{spec}, grid, hbar), popts);
    const auto f1 = polar_decompose(build_state(*spec.first, grid, hbar), popts);
    const auto f2 = polar_decompose(build_state(*spec.second, grid, hbar), popts);
    r.ms_error_total = ms_error_p(f);
    r.ms_error_branch_1 = ms_error_p(f1);
    r.ms_error_branch_2 = ms_error_p(f2);
    r.mass_1 = b.mass_1;
    r.mass_2 = b.mass_2;
    r.prior_1 = b.prior_1;
    r.prior_2 = b.prior_2;
    r.ms_additivity_gap = r.ms_error_total - b.mass_1 * r.ms_error_branch_1 - b.mass_2 * r.ms_error_branch_2;
    r.ms_additivity_gap_unweighted = r.ms_error_total - r.ms_error_branch_1 - r.ms_error_branch_2;
    r.dispersion_total = dispersion(f);
    r.dispersion_branch_1 = dispersion(f1);
    r.dispersion_branch_2 = dispersion(f2);

    double witness = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        witness += std::abs(f.rho[i] - b.prior_1 * f1.rho[i] - b.prior_2 * f2.rho[i]);
    }
    r.total_probability_witness = witness * grid.spacing();
    return r;
}

CompatibilityReport momentum_field_compatibility(const SuperpositionSpec& spec, const Grid1D& grid, double hbar,
                                                 double xi, const SuperpositionOptions& options) {
    const auto b = decompose_branches(spec, grid, hbar);
    const double threshold = options.overlap_threshold.value_or(default_threshold(b));
    const DiffScheme scheme = options.scheme.value_or(default_scheme(grid));
    const auto combined = superposed_estimate_fields(spec, grid, hbar, options);
    const auto v1 = branch_variables(b.psi_1, grid, scheme);
    const auto v2 = branch_variables(b.psi_2, grid, scheme);

    CompatibilityReport r{xi, true, 0, 0.0, 0.0, std::vector<double>(grid.size(), nan),
                          std::vector<double>(grid.size(), nan), true};
    const auto branch_momentum = [&](const BranchVariables& v, std::size_t i) {
        return hbar * v.a_dtheta[i] / v.a[i] + 0.5 * xi * 2.0 * v.da[i] / v.a[i];
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(b.rho_1[i] > threshold && b.rho_2[i] > threshold)) continue;
        r.overlap_empty = false;
        if (combined.node_mask[i]) continue;
        const double p = combined.p_bar[i] + 0.5 * xi * combined.eps_scale[i];
        r.deviation_1[i] = std::abs(p - branch_momentum(v1, i));
        r.deviation_2[i] = std::abs(p - branch_momentum(v2, i));
        r.max_deviation_1 = std::max(r.max_deviation_1, r.deviation_1[i]);
        r.max_deviation_2 = std::max(r.max_deviation_2, r.deviation_2[i]);
        ++r.points_compared;
    }
    r.compatible = r.max_deviation_1 <= compatibility_tolerance && r.max_deviation_2 <= compatibility_tolerance;
    return r;
}

void write_interference_csv(std::ostream& os, const Grid1D& grid, const BranchDecomposition& branches,
                            const OverlapReport& report) {
    os << "q,rho,rho_1,rho_2,interference\n" << std::setprecision(17);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << grid.coordinate(i) << ',' << branches.rho[i] << ',' << branches.rho_1[i] << ',' << branches.rho_2[i]
           << ',' << report.interference_field[i] << '\n';
    }
}

}  // namespace erps

#include "erps/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erps/error.hpp"
#include "erps/quantum.hpp"
#include "erps/state_spec.hpp"

namespace erps {
namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Evaluates the band-limited interpolant of grid data at q.
cplx fourier_interpolate(std::span<const cplx> values, const Grid1D& grid, double q) {
    const auto spec = fft(values);
    const auto k = grid.wavenumbers(false);
    const std::size_t n = grid.size();
    const double x = q - grid.origin();
    cplx sum{};
    for (std::size_t j = 0; j < n; ++j) {
        // Split the unpaired Nyquist mode symmetrically so the interpolant of real data stays real.
        if (n % 2 == 0 && j == n / 2) {
            sum += spec[j] * std::cos(k[j] * x);
            continue;
        }
        sum += spec[j] * std::polar(1.0, k[j] * x);
    }
    return sum / static_cast<double>(n);
}

}  // namespace

double fisher_q(const PolarFields& fields) {
    double s = 0.0;
    for (std::size_t i = 0; i < fields.rho.size(); ++i) {
        if (fields.node_mask[i]) continue;
        const double g = fields.grad_log_rho[i];
        s += g * g * fields.rho[i];
    }
    const double j = s * fields.grid.spacing();
    if (!std::isfinite(j)) throw NumericalError("Fisher information diverges; check rho_floor");
    return j;
}

double ms_error_p(const PolarFields& fields) { return 0.25 * fields.hbar * fields.hbar * fisher_q(fields); }

PositionError ms_error_q(const PolarFields& fields) {
    const Grid1D& grid = fields.grid;
    const std::size_t n = grid.size();
    double mass = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mass += fields.rho[i];
        m1 += grid.coordinate(i) * fields.rho[i];
    }
    const double mean = m1 / mass;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = grid.coordinate(i) - mean;
        var += d * d * fields.rho[i];
    }
    var /= mass;
    const double peak = *std::max_element(fields.rho.begin(), fields.rho.end());
    const bool limited = std::max(fields.rho.front(), fields.rho.back()) > grid_limited_edge_ratio * peak;
    return {var, mean, limited};
}

CramerRaoPositionReport cramer_rao_position_check(const PolarFields& fields) {
    const auto eq = ms_error_q(fields);
    if (eq.grid_limited) throw PreconditionError("cramer_rao_position_check: E_q^2 is grid limited");
    const double j = fisher_q(fields);
    return {eq.value, 1.0 / j, eq.value * j};
}

CramerRaoMomentumReport cramer_rao_momentum_gaussian_check(double sigma_q, double xi, double hbar) {
    if (xi == 0.0) throw PreconditionError("cramer_rao_momentum_gaussian_check: xi must be non-zero");
    if (!(sigma_q > 0.0)) throw PreconditionError("cramer_rao_momentum_gaussian_check: sigma_q must be positive");
    const auto grid = Grid1D::centered(512, 24.0 * sigma_q, Boundary::periodic);
    const auto psi = build_state(StateSpec::gaussian(0.0, sigma_q, 0.0), grid, hbar);
    const auto fields = polar_decompose(psi);

    double ms = 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    std::vector<std::pair<double, double>> window;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (fields.node_mask[i]) continue;
        const double err = fields.grad_s[i] + 0.5 * xi * fields.grad_log_rho[i];
        ms += err * err * fields.rho[i];
        const double q = grid.coordinate(i);
        if (std::abs(q) <= 3.0 * sigma_q) {
            window.emplace_back(q, err);
            sx += q;
            sy += err;
            sxx += q * q;
            sxy += q * err;
            ++count;
        }
    }
    ms *= grid.spacing();

    const double cnt = static_cast<double>(count);
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / cnt;
    double residual = 0.0;
    for (const auto& [q, y] : window) residual = std::max(residual, std::abs(y - (intercept + slope * q)));

    const double a = -xi * xi / (4.0 * sigma_q * sigma_q);
    // Efficiency p - p_o = a d ln(rho)/dp makes the Cauchy-Schwarz step an
    // equality, so 1/J_p = |a|.
    const double j_p = 1.0 / std::abs(a);
    return {ms, 1.0 / j_p, ms * j_p, a, slope, residual};
}

VarianceDecomposition variance_decomposition(const WaveFunction& psi, const PolarFields& fields) {
    const double ep = ms_error_p(fields);
    double mass = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < fields.rho.size(); ++i) {
        if (fields.node_mask[i]) continue;
        mass += fields.rho[i];
        m1 += fields.grad_s[i] * fields.rho[i];
    }
    const double mean = m1 / mass;
    double disp = 0.0;
    for (std::size_t i = 0; i < fields.rho.size(); ++i) {
        if (fields.node_mask[i]) continue;
        const double d = fields.grad_s[i] - mean;
        disp += d * d * fields.rho[i];
    }
    disp *= fields.grid.spacing();
    return {ep, disp, quantum_variance(psi, Quadrature::momentum)};
}

UncertaintyReport uncertainty_suite(const WaveFunction& psi, const PolarFields& fields) {
    const double hbar = psi.hbar();
    const double bound = 0.25 * hbar * hbar;
    const double slack = uncertainty_slack * hbar * hbar;

    UncertaintyReport r{};
    r.ms_error_p = ms_error_p(fields);
    r.var_p = quantum_variance(psi, Quadrature::momentum);
    const auto eq = ms_error_q(fields);
    r.grid_limited = eq.grid_limited;
    const bool interior = !psi.grid().periodic() || has_interior_support(psi);
    if (!eq.grid_limited) {
        r.ms_error_q = eq.value;
        r.product_pq = r.ms_error_p * eq.value;
        r.tradeoff_holds = *r.product_pq >= bound - slack;
    }
    if (!eq.grid_limited && interior) {
        r.var_q = quantum_variance(psi, Quadrature::position);
        r.hk_product = r.var_p * *r.var_q;
        r.kennard_holds = *r.hk_product >= bound - slack;
    }
    if (has_interior_support(psi) && r.product_pq) {
        const cplx c = commutator_expectation(psi);
        r.robertson_rhs = 0.25 * std::norm(c);
        r.robertson_holds = *r.product_pq >= *r.robertson_rhs - slack;
    }
    return r;
}

EstimationReport estimation_report(const WaveFunction& psi, const PolarFields& fields) {
    const auto dec = variance_decomposition(psi, fields);
    const auto eq = ms_error_q(fields);
    const bool interior = !psi.grid().periodic() || has_interior_support(psi);
    const double var_q = interior ? quantum_variance(psi, Quadrature::position) : eq.value;
    return {dec.ms_error_p,
            eq.value,
            fisher_q(fields),
            dec.dispersion_p,
            dec.var_p,
            var_q,
            dec.ms_error_p * eq.value,
            dec.var_p * var_q,
            eq.grid_limited};
}

cplx weak_value_at(const WaveFunction& psi, std::span<const cplx> p_psi, std::size_t i) {
    return p_psi[i] / psi[i];
}

cplx weak_value(const WaveFunction& psi, const PolarFields& fields, double q) {
    const Grid1D& grid = psi.grid();
    if (!grid.contains(q)) throw PreconditionError("weak_value: q outside the grid");
    const long nearest = std::lround((q - grid.origin()) / grid.spacing());
    const auto idx = static_cast<std::size_t>(std::clamp(nearest, 0L, static_cast<long>(grid.size()) - 1));
    if (fields.node_mask[idx]) throw NodeQueryError("weak_value queried at a masked node");
    const auto p_psi = apply_momentum(psi);
    return fourier_interpolate(p_psi, grid, q) / fourier_interpolate(psi.amplitudes(), grid, q);
}

std::vector<cplx> weak_value_field(const WaveFunction& psi, const PolarFields& fields) {
    const auto p_psi = apply_momentum(psi);
    std::vector<cplx> w(psi.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = fields.node_mask[i] ? cplx(nan, nan) : weak_value_at(psi, p_psi, i);
    }
    return w;
}

BohmianVelocity bohmian_velocity_field(const WaveFunction& psi, const PolarFields& fields, double mass) {
    if (!(mass > 0.0)) throw PreconditionError("bohmian_velocity_field: mass must be positive");
    const auto w = weak_value_field(psi, fields);
    BohmianVelocity v{std::vector<double>(w.size()), std::vector<double>(w.size()), fields.node_mask};
    for (std::size_t i = 0; i < w.size(); ++i) {
        v.from_phase[i] = fields.node_mask[i] ? nan : fields.grad_s[i] / mass;
        v.from_weak_value[i] = fields.node_mask[i] ? nan : w[i].real() / mass;
    }
    return v;
}

}  // namespace erps

// Estimation experiments: Cramer-Rao family and the uncertainty suite.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <iomanip>

#include "erps/ensemble.hpp"
#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/quantum.hpp"
#include "erps/random_state.hpp"
#include "erps/serialize.hpp"
#include "experiments.hpp"

namespace erps::runner {
namespace {

struct RandomBattery {
    Grid1D grid;
    std::size_t count;
};

std::optional<RandomBattery> parse_battery(const Section& s, double hbar, std::size_t default_count) {
    s.allow_only({"count", "grid"});
    const auto count = s.unsigned_integer("count", default_count);
    if (count == 0) s.error("count", "must be positive");
    auto grid = parse_grid(s.child("grid"), hbar);
    if (!grid) return std::nullopt;
    return RandomBattery{*grid, count};
}

/// E_p^2 straight from its definition: the chi-weighted quadrature of
/// (p(q; xi) - dS/dq)^2 rho over the grid.
double ms_error_from_definition(const PolarFields& f, const XiModel& xi) {
    double total = 0.0;
    for (std::size_t a = 0; a < xi.atoms().size(); ++a) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.rho.size(); ++i) {
            if (f.node_mask[i]) continue;
            const double err = momentum_field(f, xi.atoms()[a], f.grid.coordinate(i)) - f.grad_s[i];
            s += err * err * f.rho[i];
        }
        total += xi.weights()[a] * s * f.grid.spacing();
    }
    return total;
}

/// Normalised state with density proportional to exp(-q^2 / (2 sigma^2) + delta * g(q / sigma)).
WaveFunction perturbed_gaussian(const Grid1D& grid, double hbar, double sigma, double delta, const std::string& family) {
    std::vector<cplx> amp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.coordinate(i) / sigma;
        const double g = family == "quartic" ? -0.25 * x * x * x * x : std::cos(x);
        amp[i] = std::exp(0.5 * (-0.5 * x * x + delta * g));
    }
    return WaveFunction(grid, std::move(amp), hbar).normalized();
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

ExperimentBody parse_cramer_rao(const Section& root, const Common& common) {
    root.allow_only(with_common_keys(
        {"random_states", "mc_states", "mc_samples", "gaussian_sigmas", "perturbations", "xi_grid"}));
    const auto battery = parse_battery(root.child("random_states"), common.hbar, 100);
    const auto mc_states = root.unsigned_integer("mc_states", 5);
    const auto mc_samples = root.unsigned_integer("mc_samples", 200000);
    const auto sigmas = root.numbers("gaussian_sigmas", std::vector<double>{0.5, 1.0, 2.0});

    const auto pert = root.child("perturbations");
    pert.allow_only({"families", "deltas", "sigma"});
    const auto families = pert.texts("families", std::vector<std::string>{"quartic", "cosine"});
    const auto deltas = pert.numbers("deltas", std::vector<double>{0.001, 0.002, 0.004});
    const double pert_sigma = pert.number("sigma", 1.0);
    for (const auto& f : families) {
        if (f != "quartic" && f != "cosine") pert.error("families", "unknown family '" + f + "' (quartic, cosine)");
    }
    for (const double d : deltas) {
        if (!(d > 0.0)) pert.error("deltas", "entries must be positive");
    }

    const auto xg = root.child("xi_grid");
    xg.allow_only({"sigmas", "xis"});
    const auto cr_sigmas = xg.numbers("sigmas", std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0});
    const auto cr_xis = xg.numbers("xis", std::vector<double>{-2.0, -1.0, 0.5, 1.0, 3.0});
    for (const double s : sigmas) {
        if (!(s > 0.0)) root.error("gaussian_sigmas", "entries must be positive");
    }
    for (const double s : cr_sigmas) {
        if (!(s > 0.0)) xg.error("sigmas", "entries must be positive");
    }
    for (const double x : cr_xis) {
        if (x == 0.0) xg.error("xis", "entries must be non-zero");
    }
    if (root.failed() || !battery) return {};

    return [=](RunContext& ctx) {
        const double hbar = ctx.hbar();
        const auto xi = XiModel::two_point(hbar);

        // Identity between the MS error and the Fisher information.
        ctx.guard("fisher_identity", 3, [&] {
            double worst = 0.0;
            nlohmann::json mc = nlohmann::json::array();
            for (std::size_t k = 0; k < battery->count; ++k) {
                const auto spec = random_smooth_state(battery->grid, hbar, ctx.seed(), k);
                const auto psi = build_state(spec, battery->grid, hbar);
                const auto f = polar_decompose(psi);
                const double lhs = ms_error_from_definition(f, xi);
                const double rhs = 0.25 * hbar * hbar * fisher_q(f);
                worst = std::max(worst, rel_gap(lhs, rhs));

                if (k < mc_states) {
                    const auto ens = sample_ensemble(f, xi, mc_samples, ctx.seed() + 1000 + k);
                    double s = 0.0, s2 = 0.0;
                    for (std::size_t m = 0; m < ens.size(); ++m) {
                        const double d = ens.p[m] - momentum_field(f, 0.0, ens.q[m]);
                        s += d * d;
                        s2 += d * d * d * d;
                    }
                    const double n = static_cast<double>(ens.size());
                    const double mean = s / n;
                    const double se = std::sqrt(std::max(s2 / n - mean * mean, 0.0) / n);
                    const double z = std::abs(mean - rhs) / std::max(se, 1e-12 * rhs);
                    ctx.at_most("fisher_identity/monte_carlo/state_" + std::to_string(k) + "/z_score", 3, z,
                                optical_equivalence_z_limit);
                    mc.push_back({{"index", k}, {"state", describe(spec)}, {"mc_mean", mean}, {"std_error", se},
                                  {"quadrature", rhs}, {"z_score", z}});
                }
            }
            ctx.at_most("fisher_identity/max_relative_gap", 3, worst, 1e-12,
                        std::to_string(battery->count) + " random states");
            ctx.result("fisher_identity", {{"states", battery->count}, {"max_relative_gap", worst}, {"monte_carlo", mc}});
        });

        ctx.guard("gaussian_saturation", 4, [&] {
            nlohmann::json rows = nlohmann::json::array();
            const double bound = 0.25 * hbar * hbar;
            for (const double sigma : sigmas) {
                const auto grid = Grid1D::centered(1024, 40.0 * sigma, Boundary::periodic);
                const auto psi = build_state(StateSpec::gaussian(0.0, sigma, 0.0), grid, hbar);
                const auto f = polar_decompose(psi);
                const auto eq = ms_error_q(f);
                const double product = ms_error_p(f) * eq.value;
                ctx.within_rel("gaussian_saturation/sigma_" + std::to_string(sigma) + "/product", 4, product, bound,
                               1e-6);
                const auto cr = cramer_rao_position_check(f);
                ctx.within("gaussian_saturation/sigma_" + std::to_string(sigma) + "/position_cr_ratio", 0, cr.ratio,
                           1.0, 1e-6);
                rows.push_back({{"sigma", sigma}, {"product", product}, {"position_cr", cr}});
            }

            nlohmann::json pert_rows = nlohmann::json::array();
            const auto grid = Grid1D::centered(1024, 40.0 * pert_sigma, Boundary::periodic);
            for (const auto& family : families) {
                std::vector<double> excess;
                for (const double d : deltas) {
                    const auto psi = perturbed_gaussian(grid, hbar, pert_sigma, d, family);
                    const auto f = polar_decompose(psi);
                    const double product = ms_error_p(f) * ms_error_q(f).value;
                    excess.push_back(product - bound);
                    ctx.at_least("gaussian_saturation/" + family + "/delta_" + std::to_string(d) + "/excess", 4,
                                 product - bound, 1e-14 * bound, "product must strictly exceed hbar^2/4");
                    pert_rows.push_back({{"family", family}, {"delta", d}, {"product", product},
                                         {"excess", product - bound}});
                }
                // The Gaussian is a minimum, so the excess grows like delta^2.
                for (std::size_t i = 1; i < deltas.size(); ++i) {
                    const double r = deltas[i] / deltas[i - 1];
                    const double growth = excess[i] / excess[i - 1];
                    ctx.within_rel("gaussian_saturation/" + family + "/quadratic_growth_" + std::to_string(i), 0,
                                   growth, r * r, 0.1);
                }
            }
            ctx.result("gaussian_saturation", {{"gaussians", rows}, {"perturbed", pert_rows}});
        });

        ctx.guard("momentum_cramer_rao", 5, [&] {
            nlohmann::json rows = nlohmann::json::array();
            for (const double sigma : cr_sigmas) {
                for (const double x : cr_xis) {
                    const double xi_val = x * hbar;
                    const auto r = cramer_rao_momentum_gaussian_check(sigma, xi_val, hbar);
                    const std::string tag = "momentum_cramer_rao/sigma_" + std::to_string(sigma) + "/xi_" +
                                            std::to_string(x);
                    ctx.within(tag + "/ratio", 5, r.ratio, 1.0, 1e-8);
                    ctx.at_most(tag + "/linear_residual", 5, r.linear_residual, 1e-10 * std::abs(xi_val) / sigma);
                    const double slope = -xi_val / (2.0 * sigma * sigma);
                    ctx.within_rel(tag + "/slope", 5, r.linear_slope, slope, 1e-8);
                    rows.push_back({{"sigma", sigma}, {"xi", xi_val}, {"report", r}});
                }
            }
            ctx.result("momentum_cramer_rao", rows);
        });
    };
}

ExperimentBody parse_uncertainty_suite(const Section& root, const Common& common) {
    root.allow_only(with_common_keys({"decomposition", "inequalities", "weak_values", "cosine"}));
    const auto dec = parse_battery(root.child("decomposition"), common.hbar, 100);
    const auto ineq = parse_battery(root.child("inequalities"), common.hbar, 1000);
    const auto weak = parse_battery(root.child("weak_values"), common.hbar, 100);
    const auto cos_s = root.child("cosine");
    cos_s.allow_only({"p0", "grid"});
    const double cos_p0 = cos_s.number("p0", 1.0);
    const auto cos_grid = parse_grid(cos_s.child("grid"), common.hbar);
    if (root.failed() || !dec || !ineq || !weak || !cos_grid) return {};

    return [=](RunContext& ctx) {
        const double hbar = ctx.hbar();
        const double h2 = hbar * hbar;

        ctx.guard("variance_decomposition", 6, [&] {
            double worst = 0.0;
            for (std::size_t k = 0; k < dec->count; ++k) {
                const auto psi = build_state(random_smooth_state(dec->grid, hbar, ctx.seed(), k), dec->grid, hbar);
                const auto d = variance_decomposition(psi, polar_decompose(psi));
                worst = std::max(worst, rel_gap(d.ms_error_p + d.dispersion_p, d.var_p));
            }
            ctx.at_most("variance_decomposition/max_relative_gap", 6, worst, 1e-8,
                        std::to_string(dec->count) + " random states");

            const auto psi = build_state(StateSpec::cosine(cos_p0), *cos_grid, hbar);
            const auto d = variance_decomposition(psi, polar_decompose(psi));
            const double p2 = cos_p0 * cos_p0;
            ctx.within_rel("variance_decomposition/cosine/ms_error_p", 6, d.ms_error_p, p2, 1e-8);
            ctx.within("variance_decomposition/cosine/dispersion_p", 6, d.dispersion_p, 0.0, 1e-8 * p2);
            ctx.within_rel("variance_decomposition/cosine/var_p", 6, d.var_p, p2, 1e-8);
            ctx.result("variance_decomposition", {{"states", dec->count}, {"max_relative_gap", worst}, {"cosine", d}});
        });

        ctx.guard("uncertainty", 7, [&] {
            double min_tradeoff = INFINITY, min_kennard = INFINITY, worst_comm = 0.0, min_robertson_gap = INFINITY;
            std::size_t flagged = 0, evaluated = 0, comm_checked = 0;
            for (std::size_t k = 0; k < ineq->count; ++k) {
                const auto psi =
                    build_state(random_smooth_state(ineq->grid, hbar, ctx.seed() + 1, k), ineq->grid, hbar);
                const auto r = uncertainty_suite(psi, polar_decompose(psi));
                if (!r.product_pq || !r.hk_product) {
                    ++flagged;
                    continue;
                }
                ++evaluated;
                min_tradeoff = std::min(min_tradeoff, *r.product_pq);
                min_kennard = std::min(min_kennard, *r.hk_product);
                if (r.robertson_rhs) min_robertson_gap = std::min(min_robertson_gap, *r.product_pq - *r.robertson_rhs);
                if (has_interior_support(psi)) {
                    worst_comm = std::max(worst_comm, std::abs(commutator_expectation(psi) - cplx(0.0, hbar)));
                    ++comm_checked;
                }
            }
            const double floor = 0.25 * h2 - uncertainty_slack * h2;
            ctx.at_least("uncertainty/evaluated_states", 7, static_cast<double>(evaluated),
                         static_cast<double>(ineq->count), "random states must not be flagged grid limited");
            ctx.at_least("uncertainty/min_tradeoff_product", 7, min_tradeoff, floor);
            ctx.at_least("uncertainty/min_kennard_product", 7, min_kennard, floor);
            ctx.at_most("uncertainty/commutator_deviation", 7, worst_comm, 1e-8 * hbar,
                        std::to_string(comm_checked) + " interior-supported states");
            ctx.at_least("uncertainty/min_robertson_gap", 0, min_robertson_gap, -uncertainty_slack * h2);
            ctx.result("uncertainty", {{"states", ineq->count},
                                       {"evaluated", evaluated},
                                       {"flagged", flagged},
                                       {"min_tradeoff_product", min_tradeoff},
                                       {"min_kennard_product", min_kennard},
                                       {"max_commutator_deviation", worst_comm}});
        });

        ctx.guard("weak_values", 8, [&] {
            double worst_re = 0.0, worst_im = 0.0, worst_int = 0.0;
            for (std::size_t k = 0; k < weak->count; ++k) {
                const auto psi =
                    build_state(random_smooth_state(weak->grid, hbar, ctx.seed() + 2, k), weak->grid, hbar);
                const auto f = polar_decompose(psi);
                const auto w = weak_value_field(psi, f);
                double im2 = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    if (f.node_mask[i]) continue;
                    const double re_ref = f.grad_s[i], im_ref = -0.5 * hbar * f.grad_log_rho[i];
                    worst_re = std::max(worst_re, std::abs(w[i].real() - re_ref) / std::max(1.0, std::abs(re_ref)));
                    worst_im = std::max(worst_im, std::abs(w[i].imag() - im_ref) / std::max(1.0, std::abs(im_ref)));
                    im2 += w[i].imag() * w[i].imag() * f.rho[i];
                }
                im2 *= weak->grid.spacing();
                worst_int = std::max(worst_int, rel_gap(im2, ms_error_p(f)));
            }
            ctx.at_most("weak_values/real_part_vs_phase_gradient", 8, worst_re, 1e-8);
            ctx.at_most("weak_values/imag_part_vs_log_density_gradient", 8, worst_im, 1e-8);
            ctx.at_most("weak_values/imag_square_integral_vs_ms_error", 8, worst_int, 1e-8);

            // Closed form for a Gaussian: p0 + i hbar (q - q0) / (2 sigma^2), also off the grid points.
            const double q0 = 0.3, sigma = 1.1, p0 = 0.7;
            const auto grid = Grid1D::centered(512, 40.0, Boundary::periodic);
            const auto psi = build_state(StateSpec::gaussian(q0, sigma, p0), grid, hbar);
            const auto f = polar_decompose(psi);
            double worst_gauss = 0.0;
            for (const double q : {-3.17, -1.0, 0.0, 0.123, 2.5, 4.01}) {
                const cplx ref(p0, hbar * (q - q0) / (2.0 * sigma * sigma));
                worst_gauss = std::max(worst_gauss, std::abs(weak_value(psi, f, q) - ref) / std::max(1.0, std::abs(ref)));
            }
            ctx.at_most("weak_values/gaussian_closed_form", 8, worst_gauss, 1e-8);
            ctx.result("weak_values", {{"states", weak->count},
                                       {"max_real_deviation", worst_re},
                                       {"max_imag_deviation", worst_im},
                                       {"max_integral_gap", worst_int},
                                       {"gaussian_closed_form_deviation", worst_gauss}});
        });
    };
}

}  // namespace erps::runner

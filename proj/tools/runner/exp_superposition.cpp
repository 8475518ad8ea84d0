// Two-branch superpositions: closed-form fields, additivity and interference.

#include <cmath>

#include "erps/polar.hpp"
#include "erps/random_state.hpp"
#include "erps/serialize.hpp"
#include "erps/superposition.hpp"
#include "experiments.hpp"

namespace erps::runner {
namespace {

SuperpositionSpec as_superposition(const StateSpec& a, const StateSpec& b, cplx w1, cplx w2) {
    return std::get<SuperpositionSpec>(StateSpec::superposition(a, b, w1, w2).kind);
}

/// Largest |closed - direct| / max(1, |direct|) for both fields.
std::pair<double, double> closed_form_deviation(const SuperpositionSpec& sp, const Grid1D& grid, double hbar) {
    const auto closed = superposed_estimate_fields(sp, grid, hbar);
    const auto direct = polar_decompose(build_state(StateSpec{sp}, grid, hbar));
    double dp = 0.0, de = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (direct.node_mask[i] || closed.node_mask[i]) continue;
        dp = std::max(dp, std::abs(closed.p_bar[i] - direct.grad_s[i]) / std::max(1.0, std::abs(direct.grad_s[i])));
        de = std::max(de, std::abs(closed.eps_scale[i] - direct.grad_log_rho[i]) /
                              std::max(1.0, std::abs(direct.grad_log_rho[i])));
    }
    return {dp, de};
}

}  // namespace

ExperimentBody parse_superposition(const Section& root, const Common& common) {
    root.allow_only(with_common_keys(
        {"grid", "random_pairs", "sigma", "disjoint_separation", "overlap_separation", "counter_propagating"}));
    const auto grid = parse_grid(root.child("grid"), common.hbar);
    const auto pairs = root.unsigned_integer("random_pairs", 50);
    const double sigma = root.number("sigma", 1.0);
    const double far = root.number("disjoint_separation", 16.0);
    const double near = root.number("overlap_separation", 1.0);
    if (!(sigma > 0.0)) root.error("sigma", "must be positive");
    if (!(far > 0.0)) root.error("disjoint_separation", "must be positive");
    if (!(near > 0.0)) root.error("overlap_separation", "must be positive");
    const auto cp = root.child("counter_propagating");
    cp.allow_only({"p0", "grid"});
    const double p0 = cp.number("p0", 1.0);
    const auto cp_grid = parse_grid(cp.child("grid"), common.hbar);
    if (root.failed() || !grid || !cp_grid) return {};

    return [=](RunContext& ctx) {
        const double hbar = ctx.hbar();

        ctx.guard("superposition/closed_form", 10, [&] {
            double worst_p = 0.0, worst_e = 0.0;
            for (std::size_t k = 0; k < pairs; ++k) {
                const auto a = random_smooth_state(*grid, hbar, ctx.seed(), 2 * k);
                const auto b = random_smooth_state(*grid, hbar, ctx.seed(), 2 * k + 1);
                const cplx w2 = std::polar(0.5 + 0.02 * static_cast<double>(k), 0.7 * static_cast<double>(k));
                const auto [dp, de] = closed_form_deviation(as_superposition(a, b, 1.0, w2), *grid, hbar);
                worst_p = std::max(worst_p, dp);
                worst_e = std::max(worst_e, de);
            }
            ctx.at_most("superposition/closed_form/p_bar", 10, worst_p, 1e-8, std::to_string(pairs) + " random pairs");
            ctx.at_most("superposition/closed_form/eps_scale", 10, worst_e, 1e-8);
            ctx.result("closed_form", {{"pairs", pairs}, {"max_p_bar_deviation", worst_p},
                                       {"max_eps_scale_deviation", worst_e}});
        });

        ctx.guard("superposition/disjoint", 10, [&] {
            const double d = far * sigma;
            const auto sp = as_superposition(StateSpec::gaussian(-d / 2, sigma, 0.5), StateSpec::gaussian(d / 2, sigma, -0.3),
                                             cplx(0.6, 0.0), cplx(0.0, 0.8));
            const auto rep = overlap_analysis(sp, *grid, hbar);
            const double scale = std::max(1.0, rep.ms_error_total);
            ctx.holds("superposition/disjoint/overlap_empty", 10, rep.overlap_set.empty(),
                      std::to_string(rep.overlap_set.size()) + " overlap points");
            ctx.within("superposition/disjoint/additivity_gap", 10, rep.ms_additivity_gap, 0.0, 1e-9 * scale);
            ctx.at_most("superposition/disjoint/interference_linf", 0, rep.interference_linf, 1e-9);
            const auto comp = momentum_field_compatibility(sp, *grid, hbar, hbar);
            ctx.holds("superposition/disjoint/compatible", 0, comp.compatible);
            ctx.result("disjoint", {{"separation_sigmas", far}, {"report", rep}, {"compatibility", comp}});
            ctx.artifact("interference_disjoint.csv", [&](std::ostream& os) {
                write_interference_csv(os, *grid, decompose_branches(sp, *grid, hbar), rep);
            });
        });

        ctx.guard("superposition/overlapping", 0, [&] {
            const double d = near * sigma;
            const auto sp = as_superposition(StateSpec::gaussian(-d / 2, sigma, 0.5), StateSpec::gaussian(d / 2, sigma, -0.3),
                                             1.0, 1.0);
            const auto rep = overlap_analysis(sp, *grid, hbar);
            ctx.at_least("superposition/overlapping/total_probability_witness", 0, rep.total_probability_witness, 0.01);
            const auto comp = momentum_field_compatibility(sp, *grid, hbar, hbar);
            ctx.holds("superposition/overlapping/incompatible", 0, !comp.compatible);
            ctx.result("overlapping", {{"separation_sigmas", near}, {"report", rep}, {"compatibility", comp}});
            ctx.artifact("interference_overlapping.csv", [&](std::ostream& os) {
                write_interference_csv(os, *grid, decompose_branches(sp, *grid, hbar), rep);
            });
        });

        ctx.guard("superposition/counter_propagating", 10, [&] {
            const auto sp = as_superposition(StateSpec::plane_wave(p0), StateSpec::plane_wave(-p0), 1.0, 1.0);
            const auto rep = overlap_analysis(sp, *cp_grid, hbar);
            ctx.within_rel("superposition/counter_propagating/ms_error", 10, rep.ms_error_total, p0 * p0, 1e-8);
            ctx.within("superposition/counter_propagating/branch_ms_error", 0, rep.ms_error_branch_1, 0.0, 1e-12);
            // The two-branch formula reduces to eps = -(2 p0 / hbar) tan(p0 q / hbar).
            const auto f = superposed_estimate_fields(sp, *cp_grid, hbar);
            double worst = 0.0;
            for (std::size_t i = 0; i < cp_grid->size(); ++i) {
                if (f.node_mask[i]) continue;
                const double ref = -2.0 * p0 / hbar * std::tan(p0 * cp_grid->coordinate(i) / hbar);
                worst = std::max(worst, std::abs(f.eps_scale[i] - ref) / std::max(1.0, std::abs(ref)));
            }
            ctx.at_most("superposition/counter_propagating/tan_profile", 0, worst, 1e-8);
            ctx.result("counter_propagating", {{"p0", p0}, {"ms_error_total", rep.ms_error_total},
                                               {"ms_additivity_gap", rep.ms_additivity_gap},
                                               {"tan_profile_deviation", worst}});
        });
    };
}

}  // namespace erps::runner

// Pointer measurement of momentum, Born statistics and epistemic collapse.

#include <cmath>
#include <numbers>

#include "erps/error.hpp"
#include "erps/measurement.hpp"
#include "erps/serialize.hpp"
#include "experiments.hpp"

namespace erps::runner {
namespace {

std::optional<MeasurementConfig> parse_measurement_config(const Section& s, double hbar) {
    s.allow_only({"p0", "pointer", "coupling_g", "duration_T", "separation_factor", "system_periods", "n_a", "n_b",
                  "pointer_length"});
    MeasurementConfig c;
    c.hbar = hbar;
    c.p0 = s.number("p0", c.p0);
    if (s.has("pointer")) {
        const auto ptr = parse_gaussian(s.child("pointer"));
        if (ptr) c.pointer = *ptr;
    }
    c.coupling_g = s.number("coupling_g", c.coupling_g);
    c.duration_T = s.number("duration_T", c.duration_T);
    c.separation_factor = s.number("separation_factor", c.separation_factor);
    c.system_periods = static_cast<int>(s.integer("system_periods", c.system_periods));
    c.n_a = s.unsigned_integer("n_a", c.n_a);
    c.n_b = s.unsigned_integer("n_b", c.n_b);
    c.pointer_length = s.number("pointer_length", c.pointer_length);
    c.system_state = StateSpec::cosine(c.p0);
    try {
        c.validate();
    } catch (const ConfigError& e) {
        // Messages lead with the offending field name.
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        s.error(colon == std::string::npos ? "" : msg.substr(0, colon),
                colon == std::string::npos ? msg : msg.substr(colon + 2));
        return std::nullopt;
    }
    return c;
}

StateSpec weighted_plane_waves(double p0, double weight_plus) {
    return StateSpec::superposition(StateSpec::plane_wave(p0), StateSpec::plane_wave(-p0), std::sqrt(weight_plus),
                                    std::sqrt(1.0 - weight_plus));
}

/// Largest deviation from sum_s c_s exp(i s p0 q_a / hbar) phi(q_b - s g p0 T) / sqrt(L).
double closed_form_deviation(const WaveFunction2D& ent, const MeasurementConfig& c, double weight_plus) {
    const auto& g = ent.grid();
    const double L = g.a().extent();
    const double s = c.pointer.sigma;
    const auto pointer = [&](double x) {
        const double d = x - c.pointer.q0;
        return std::pow(2.0 * std::numbers::pi * s * s, -0.25) * std::exp(-d * d / (4.0 * s * s));
    };
    const double cp = std::sqrt(weight_plus), cm = std::sqrt(1.0 - weight_plus);
    const double shift = c.pointer_shift();
    double worst = 0.0;
    for (std::size_t ia = 0; ia < g.a().size(); ++ia) {
        const double qa = g.a().coordinate(ia);
        const cplx up = std::polar(cp / std::sqrt(L), c.p0 * qa / c.hbar);
        const cplx down = std::polar(cm / std::sqrt(L), -c.p0 * qa / c.hbar);
        for (std::size_t ib = 0; ib < g.b().size(); ++ib) {
            const double qb = g.b().coordinate(ib);
            const cplx exact = up * pointer(qb - shift) + down * pointer(qb + shift);
            worst = std::max(worst, std::abs(ent.at(ia, ib) - exact));
        }
    }
    return worst;
}

}  // namespace

ExperimentBody parse_measurement(const Section& root, const Common& common) {
    root.allow_only(with_common_keys({"measurement", "n_runs", "repeat_trials", "born_weights", "log_rows"}));
    const auto config = parse_measurement_config(root.child("measurement"), common.hbar);
    const auto n_runs = root.unsigned_integer("n_runs", 10000);
    const auto repeats = root.unsigned_integer("repeat_trials", 1000);
    const auto weights = root.numbers("born_weights", std::vector<double>{0.5, 0.8, 1.0});
    const auto log_rows = root.unsigned_integer("log_rows", 1000);
    if (n_runs == 0) root.error("n_runs", "must be positive");
    if (repeats == 0) root.error("repeat_trials", "must be positive");
    for (const double w : weights) {
        if (!(w >= 0.0 && w <= 1.0)) root.error("born_weights", "entries must lie in [0, 1]");
    }
    if (root.failed() || !config) return {};

    return [=](RunContext& ctx) {
        const auto& cfg = *config;
        nlohmann::json out = nlohmann::json::object();
        out["grid"] = {{"n_a", cfg.n_a}, {"n_b", cfg.n_b}, {"pointer_shift", cfg.pointer_shift()}};

        for (std::size_t k = 0; k < weights.size(); ++k) {
            const double w = weights[k];
            const std::string tag = "measurement/weight_" + std::to_string(w);
            ctx.guard(tag, 11, [&] {
                const auto system = build_state(weighted_plane_waves(cfg.p0, w), cfg.grid().a(), ctx.hbar());
                const auto ent = entangling_propagate(system, cfg);
                const double dev = closed_form_deviation(ent, cfg, w);
                ctx.at_most(tag + "/closed_form", 11, dev, 1e-8);

                const auto runs = repeated_readouts(system, cfg, n_runs, ctx.seed() + 10 * k, true);
                const double freq = static_cast<double>(runs.n_plus) / static_cast<double>(runs.n_runs);
                const double se = std::sqrt(w * (1.0 - w) / static_cast<double>(runs.n_runs));
                const double z = se > 0.0 ? std::abs(freq - w) / se : (freq == w ? 0.0 : INFINITY);
                ctx.at_most(tag + "/born_z_score", 11, z, 4.0,
                            std::to_string(runs.n_plus) + " of " + std::to_string(runs.n_runs) + " runs gave +p0");
                ctx.at_most(tag + "/post_ms_error_p", 11, runs.max_post_ms_error_p, 1e-4 * cfg.p0 * cfg.p0);
                ctx.at_most(tag + "/post_momentum_deviation", 0, runs.max_post_momentum_deviation, 1e-4);

                nlohmann::json repeat = nlohmann::json::object();
                for (const double sign : {1.0, -1.0}) {
                    const auto it = std::find_if(runs.records.begin(), runs.records.end(),
                                                 [&](const MeasurementRecord& r) { return r.outcome * sign > 0.0; });
                    if (it == runs.records.end()) continue;
                    const auto rep = repeatability_check(*it, cfg, ctx.seed() + 10 * k + (sign > 0 ? 1 : 2), repeats);
                    const std::string name = sign > 0 ? "plus" : "minus";
                    ctx.holds(tag + "/repeatability_" + name, 11, rep.pass,
                              std::to_string(rep.n_same) + "/" + std::to_string(rep.n_trials));
                    ctx.holds(tag + "/post_state_grid_limited_" + name, 0, it->post_grid_limited,
                              "a plane-wave post state has no finite position moments on the grid");
                    repeat[name] = rep;
                }
                if (k == 0 && !runs.records.empty()) {
                    // Control: a fresh cosine in place of the collapsed state splits roughly evenly.
                    MeasurementRecord control = runs.records.front();
                    control.post_state = build_state(StateSpec::cosine(cfg.p0), cfg.grid().a(), ctx.hbar());
                    const auto rep = repeatability_check(control, cfg, ctx.seed() + 7, repeats);
                    const double n = static_cast<double>(rep.n_trials);
                    const double z = std::abs(static_cast<double>(rep.n_same) / n - 0.5) / std::sqrt(0.25 / n);
                    ctx.at_most(tag + "/fresh_state_control_z_score", 0, z, 4.0,
                                std::to_string(rep.n_same) + "/" + std::to_string(rep.n_trials) + " matched");
                    repeat["fresh_state_control"] = rep;
                }
                out[tag] = {{"weight_plus", w},       {"closed_form_deviation", dev},
                            {"n_runs", runs.n_runs},  {"n_plus", runs.n_plus},
                            {"n_minus", runs.n_minus}, {"freq_plus", freq},
                            {"std_error", se},         {"z_score", z},
                            {"max_post_ms_error_p", runs.max_post_ms_error_p},
                            {"repeatability", repeat}};
                std::vector<MeasurementRecord> log(
                    runs.records.begin(),
                    runs.records.begin() + static_cast<std::ptrdiff_t>(std::min(log_rows, runs.records.size())));
                ctx.artifact("measurement_log_weight_" + std::to_string(k) + ".csv",
                             [&](std::ostream& os) { write_measurement_log_csv(os, log); });
            });
        }

        // Cross-check against the library's projection-based Born statistics.
        ctx.guard("measurement/born_projection", 0, [&] {
            const auto b = born_statistics(cfg.system_state, cfg, std::min<std::size_t>(n_runs, 2000), ctx.seed() + 99);
            ctx.within("measurement/born_projection/expected_plus", 0, b.expected_plus, 0.5, 1e-12);
            ctx.holds("measurement/born_projection/pass", 0, b.pass);
            out["born_projection"] = b;
        });
        ctx.result("measurement", out);
    };
}

ExperimentBody parse_prep_independence(const Section& root, const Common& common) {
    root.allow_only(with_common_keys({"state_a", "state_b", "xi", "points", "degenerate_point"}));
    const auto a = parse_gaussian(root.child("state_a"));
    const auto b = parse_gaussian(root.child("state_b"));
    const auto xi = parse_xi(root.child("xi", false), common.hbar);
    std::vector<std::pair<double, double>> points;
    for (const auto& p : root.children("points")) {
        p.allow_only({"q_a", "q_b"});
        points.emplace_back(p.number("q_a"), p.number("q_b"));
    }
    if (points.empty() && !root.failed()) root.error("points", "needs at least one conditioning point");
    std::optional<std::pair<double, double>> degenerate;
    if (root.has("degenerate_point")) {
        const auto d = root.child("degenerate_point");
        d.allow_only({"q_a", "q_b"});
        degenerate = std::pair{d.number("q_a"), d.number("q_b")};
    }
    if (xi && !xi->discrete()) root.error("xi", "the diagnostic needs a discrete xi model");
    if (root.failed() || !a || !b || !xi) return {};

    return [=](RunContext& ctx) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [qa, qb] : points) {
            const std::string tag = "prep_independence/q_a_" + std::to_string(qa) + "/q_b_" + std::to_string(qb);
            ctx.guard(tag, 12, [&] {
                const auto global = preparation_independence_diagnostic(*a, *b, *xi, XiCorrelation::global_xi, qa, qb);
                const auto sep = preparation_independence_diagnostic(*a, *b, *xi, XiCorrelation::separable_xi, qa, qb);
                ctx.holds(tag + "/non_degenerate", 12, !global.degenerate, global.degenerate_reason);
                ctx.within(tag + "/global_tv", 12, global.tv_distance, 0.5, 1e-3);
                ctx.at_most(tag + "/separable_tv", 12, sep.tv_distance, 1e-12);
                rows.push_back({{"global", global}, {"separable", sep}});
            });
        }
        ctx.result("points", rows);
        if (degenerate) {
            ctx.guard("prep_independence/degenerate", 0, [&] {
                const auto r = preparation_independence_diagnostic(*a, *b, *xi, XiCorrelation::global_xi,
                                                                   degenerate->first, degenerate->second);
                ctx.holds("prep_independence/degenerate/flagged", 0, r.degenerate, r.degenerate_reason);
                ctx.result("degenerate", r);
            });
        }
    };
}

}  // namespace erps::runner

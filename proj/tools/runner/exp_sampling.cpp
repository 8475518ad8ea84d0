// Ensemble-sampling experiments: optical equivalence and the Born rule.

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "erps/ensemble.hpp"
#include "erps/error.hpp"
#include "erps/quantum.hpp"
#include "erps/serialize.hpp"
#include "experiments.hpp"

namespace erps::runner {
namespace {

const std::map<std::string, Observable (*)()>& observable_table() {
    static const std::map<std::string, Observable (*)()> t = {
        {"q", Observable::position},
        {"q2", Observable::position_squared},
        {"p", Observable::momentum},
        {"p2", Observable::momentum_squared},
        {"qp_sym", Observable::symmetrized_position_momentum},
        {"p_q2_p", Observable::momentum_position_squared_momentum},
    };
    return t;
}

}  // namespace

ExperimentBody parse_optical_equivalence(const Section& root, const Common& common) {
    root.allow_only(with_common_keys({"n_samples", "xi", "observables", "states", "csv_rows"}));
    const auto n = root.unsigned_integer("n_samples");
    if (n < 2) root.error("n_samples", "must be at least 2");
    const auto csv_rows = root.unsigned_integer("csv_rows", 10000);
    const auto xi = parse_xi(root.child("xi", false), common.hbar);
    const auto names = root.texts("observables", std::vector<std::string>{"q", "q2", "p", "p2", "qp_sym", "p_q2_p"});
    for (const auto& o : names) {
        if (!observable_table().count(o)) root.error("observables", "unknown observable '" + o + "'");
    }
    const auto states = parse_states(root, "states", common.hbar);
    if (root.failed() || !xi) return {};

    return [=](RunContext& ctx) {
        nlohmann::json per_state = nlohmann::json::object();
        for (std::size_t s = 0; s < states.size(); ++s) {
            const auto& st = states[s];
            ctx.guard("optical_equivalence/" + st.name, 1, [&] {
                const auto psi = build_state(st.spec, st.grid, ctx.hbar());
                const auto fields = polar_decompose(psi);
                // One ensemble per state, every observable evaluated on it.
                const auto ens = sample_ensemble(fields, *xi, n, ctx.seed() + s, 1, describe(st.spec));
                nlohmann::json reports = nlohmann::json::object();
                for (const auto& o : names) {
                    const auto rep = compare_with_quantum(ens, psi, observable_table().at(o)());
                    ctx.at_most("optical_equivalence/" + st.name + "/" + o + "/z_score", 1, rep.z_score,
                                optical_equivalence_z_limit,
                                "mc_mean " + std::to_string(rep.mc_mean) + " vs quantum " +
                                    std::to_string(rep.quantum_value));
                    reports[o] = rep;
                }
                per_state[st.name] = {{"state", describe(st.spec)}, {"n_samples", n}, {"reports", reports}};
                ctx.artifact("ensemble_" + st.name + ".csv",
                             [&](std::ostream& os) { write_ensemble_csv(os, ens, csv_rows); });
            });
        }
        ctx.result("states", per_state);
    };
}

ExperimentBody parse_born_rule(const Section& root, const Common& common) {
    root.allow_only(with_common_keys({"n_samples", "xi", "states"}));
    const auto n = root.unsigned_integer("n_samples");
    if (n < 1) root.error("n_samples", "must be positive");
    const auto xi = parse_xi(root.child("xi", false), common.hbar);
    std::vector<std::size_t> bins;
    for (const auto& entry : root.children("states")) {
        bins.push_back(entry.unsigned_integer("cells_per_bin", 16));
        if (bins.back() == 0) entry.error("cells_per_bin", "must be positive");
    }
    const auto states = parse_states(root, "states", common.hbar, {"cells_per_bin"});
    if (root.failed() || !xi) return {};

    return [=](RunContext& ctx) {
        constexpr double tv_limit = 0.01;
        nlohmann::json per_state = nlohmann::json::object();
        for (std::size_t s = 0; s < states.size(); ++s) {
            const auto& st = states[s];
            ctx.guard("born_rule/" + st.name, 2, [&] {
                const auto psi = build_state(st.spec, st.grid, ctx.hbar());
                const auto fields = polar_decompose(psi);
                const auto ens = sample_ensemble(fields, *xi, n, ctx.seed() + s, 1, describe(st.spec));
                const double tv = histogram_tv(ens.q, st.grid, psi.density(), bins[s]);
                ctx.at_most("born_rule/" + st.name + "/tv", 2, tv, tv_limit);
                per_state[st.name] = {{"state", describe(st.spec)},
                                      {"n_samples", n},
                                      {"cells_per_bin", bins[s]},
                                      {"tv_distance", tv}};

                ctx.artifact("histogram_" + st.name + ".csv", [&](std::ostream& os) {
                    const std::size_t nb = (st.grid.size() + bins[s] - 1) / bins[s];
                    std::vector<double> emp(nb, 0.0), ref(nb, 0.0);
                    for (const double q : ens.q) {
                        const auto cell = std::min(st.grid.size() - 1, static_cast<std::size_t>(
                                                                           (q - st.grid.lower_edge()) / st.grid.spacing()));
                        emp[cell / bins[s]] += 1.0 / static_cast<double>(ens.size());
                    }
                    const auto rho = psi.density();
                    for (std::size_t i = 0; i < rho.size(); ++i) ref[i / bins[s]] += rho[i] * st.grid.spacing();
                    os << "bin_lower,bin_upper,empirical,born\n" << std::setprecision(17);
                    for (std::size_t b = 0; b < nb; ++b) {
                        const double lo = st.grid.lower_edge() + static_cast<double>(b * bins[s]) * st.grid.spacing();
                        const double hi = std::min(st.grid.upper_edge(), lo + static_cast<double>(bins[s]) * st.grid.spacing());
                        os << lo << ',' << hi << ',' << emp[b] << ',' << ref[b] << '\n';
                    }
                });
            });
        }
        ctx.result("states", per_state);
    };
}

}  // namespace erps::runner

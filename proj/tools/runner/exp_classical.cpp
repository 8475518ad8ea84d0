// hbar_eff scan of the single-shot momentum error against the flow momentum.

#include "erps/dynamics.hpp"
#include "erps/serialize.hpp"
#include "experiments.hpp"

namespace erps::runner {

ExperimentBody parse_classical_limit(const Section& root, const Common& common) {
    root.allow_only(with_common_keys({"hbar_values", "states"}));
    const auto hbars = root.numbers("hbar_values");
    if (hbars.size() < 2) root.error("hbar_values", "needs at least two values");
    for (const double h : hbars) {
        if (!(h > 0.0)) root.error("hbar_values", "entries must be positive");
    }
    std::vector<ClassicalLimitStatus> expected;
    for (const auto& entry : root.children("states")) {
        const auto e = entry.text("expect", std::string("scaling"));
        if (e == "scaling") expected.push_back(ClassicalLimitStatus::scaling);
        else if (e == "exactly_classical") expected.push_back(ClassicalLimitStatus::exactly_classical);
        else if (e == "undefined_ratio") expected.push_back(ClassicalLimitStatus::undefined_ratio);
        else entry.error("expect", "unknown status '" + e + "' (scaling, exactly_classical, undefined_ratio)");
    }
    // States are validated at hbar_eff = 1 here; the scan rebuilds them per value.
    const auto states = parse_states(root, "states", common.hbar, {"expect"});
    if (root.failed()) return {};

    return [=](RunContext& ctx) {
        nlohmann::json rows = nlohmann::json::object();
        for (std::size_t s = 0; s < states.size(); ++s) {
            const auto& st = states[s];
            const bool scaling = expected[s] == ClassicalLimitStatus::scaling;
            const std::string tag = "classical_limit/" + st.name;
            ctx.guard(tag, scaling ? 13 : 0, [&] {
                const auto r = classical_limit_scan(st.spec, st.grid, hbars);
                ctx.holds(tag + "/status", scaling ? 13 : 0, r.status == expected[s],
                          std::string("got ") + to_string(r.status) + ", expected " + to_string(expected[s]));
                if (scaling) ctx.within(tag + "/log_log_slope", 13, r.slope.value_or(NAN), 1.0, 0.01);
                rows[st.name] = r;
            });
        }
        ctx.result("states", rows);
    };
}

}  // namespace erps::runner

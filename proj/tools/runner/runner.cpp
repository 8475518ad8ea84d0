#include "runner.hpp"

#include <fftw3.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "erps/error.hpp"
#include "experiments.hpp"

#ifndef ERPSLAB_VERSION
#define ERPSLAB_VERSION "unknown"
#endif

namespace erps::runner {
namespace {

using Parser = ExperimentBody (*)(const Section&, const Common&);

const std::map<std::string, Parser>& parsers() {
    static const std::map<std::string, Parser> p = {
        {"optical_equivalence", parse_optical_equivalence},
        {"born_rule", parse_born_rule},
        {"cramer_rao", parse_cramer_rao},
        {"uncertainty_suite", parse_uncertainty_suite},
        {"dynamics", parse_dynamics},
        {"superposition", parse_superposition},
        {"measurement", parse_measurement},
        {"prep_independence", parse_prep_independence},
        {"classical_limit", parse_classical_limit},
    };
    return p;
}

RunOutcome config_failure(std::vector<std::string> errors) {
    RunOutcome out;
    out.exit_code = exit_config_error;
    out.config_errors = std::move(errors);
    return out;
}

}  // namespace

std::vector<std::string> with_common_keys(std::initializer_list<const char*> keys) {
    std::vector<std::string> out{"experiment", "seed", "hbar", "output_dir"};
    out.insert(out.end(), keys.begin(), keys.end());
    return out;
}

const std::vector<ExperimentInfo>& catalog() {
    static const std::vector<ExperimentInfo> c = {
        {"optical_equivalence", "Monte-Carlo phase-space averages against spectral quantum expectations",
         "ensemble <O(q,p)> equals <psi|O|psi> for observables up to quadratic order in p", {1}},
        {"born_rule", "sampled position histogram against |psi|^2",
         "positions of the restricted phase-space ensemble follow the Born rule", {2}},
        {"cramer_rao", "Fisher information, MS errors and Cramer-Rao saturation",
         "E_p^2 = (hbar^2/4) J_q; Gaussians saturate E_q^2 J_q >= 1 and the per-xi momentum bound", {3, 4, 5}},
        {"uncertainty_suite", "variance decomposition, uncertainty relations and weak values",
         "sigma_p^2 = E_p^2 + Delta_p^2; Heisenberg-Kennard and MS-error trade-off >= hbar^2/4; weak-value "
         "identities",
         {6, 7, 8}},
        {"dynamics", "split-step Schrodinger propagation, continuity and Bohmian equivariance",
         "unitary evolution conserving norm and energy; trajectories q' = (dS/dq)/m track |psi(t)|^2", {9}},
        {"superposition", "two-branch estimator fields, interference and MS-error additivity",
         "interference only on overlapping supports; counter-propagating waves carry E_p^2 = p0^2", {10}},
        {"measurement", "impulsive pointer measurement, readout collapse and Born statistics",
         "pointer coupling H = g p_A p_B yields +-p0 outcomes with Born weights, repeatably, and sharp "
         "post-measurement estimates",
         {11}},
        {"prep_independence", "joint vs product momentum law for two systems sharing one xi",
         "a shared global xi makes independently prepared systems non-factorizable", {12}},
        {"classical_limit", "ratio of estimation error to momentum field across hbar_eff",
         "RMS(eps_p)/RMS(dS/dq) scales linearly with hbar_eff", {13}},
    };
    return c;
}

std::string format_catalog() {
    std::ostringstream os;
    for (const auto& e : catalog()) {
        os << e.name << "\n  " << e.description << "\n  reproduces: " << e.reproduces << "\n  criteria:";
        for (const int c : e.criteria) os << ' ' << c;
        os << '\n';
    }
    return os.str();
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

RunOutcome run_config(const YAML::Node& root_node, const RunOptions& options) {
    std::vector<std::string> errors;
    if (!root_node.IsMap()) return config_failure({"<root>: config must be a mapping"});
    const Section root(root_node, "", errors);

    const auto experiment = root.text("experiment");
    Common common{root.unsigned_integer("seed"), root.number("hbar", 1.0)};
    if (!(common.hbar > 0.0)) root.error("hbar", "must be positive");
    if (options.seed_override) common.seed = *options.seed_override;

    ExperimentBody body;
    const auto it = parsers().find(experiment);
    if (it == parsers().end()) {
        if (!experiment.empty()) root.error("experiment", "unknown experiment '" + experiment + "'");
    } else {
        try {
            body = it->second(root, common);
        } catch (const std::exception& e) {
            errors.push_back(std::string("<config>: ") + e.what());
        }
    }
    if (!errors.empty() || !body) return config_failure(errors);

    std::filesystem::path out_dir =
        options.output_dir ? *options.output_dir
                           : std::filesystem::path(root.text("output_dir", "out/" + experiment));

    RunContext ctx(out_dir, common.seed, common.hbar);
    ctx.guard(experiment + "/run", 0, [&] { body(ctx); });

    auto checks = ctx.checks();
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
    std::size_t n_failed = 0;
    for (const auto& c : checks) n_failed += c.pass ? 0 : 1;

    auto echo = yaml_to_json(root_node);
    echo["seed"] = common.seed;
    auto artifacts = ctx.artifacts();
    std::sort(artifacts.begin(), artifacts.end());

    nlohmann::json report = {
        {"schema_version", 1},
        {"experiment", experiment},
        {"config", echo},
        {"versions", {{"erpslab", ERPSLAB_VERSION}, {"fftw", std::string(fftw_version)}}},
        {"checks", checks},
        {"results", ctx.results()},
        {"artifacts", artifacts},
        {"summary",
         {{"n_checks", checks.size()}, {"n_failed", n_failed}, {"pass", n_failed == 0 && !checks.empty()}}},
    };

    RunOutcome out;
    out.checks = std::move(checks);
    out.exit_code = (n_failed == 0 && !out.checks.empty()) ? exit_pass : exit_check_failure;
    std::filesystem::create_directories(out_dir);
    out.report_path = out_dir / "report.json";
    std::ofstream(out.report_path) << dump_report(report);
    out.report = std::move(report);
    return out;
}

RunOutcome run_config_file(const std::filesystem::path& path, const RunOptions& options) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        return config_failure({path.string() + ": cannot read config file"});
    } catch (const YAML::Exception& e) {
        return config_failure({path.string() + ": " + e.what()});
    }
    return run_config(root, options);
}

}  // namespace erps::runner

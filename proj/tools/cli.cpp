#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "runner.hpp"

namespace {

void print_checks(const erps::runner::RunOutcome& out) {
    for (const auto& c : out.checks) {
        std::printf("%s %s value=%.6g", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value);
        if (c.relation != "holds" && c.relation != "exception") std::printf(" %s %.6g", c.relation.c_str(), c.expected);
        if (c.tolerance != 0.0) std::printf(" tol=%.3g", c.tolerance);
        if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"erpslab: epistemically restricted phase-space experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment config and write report.json");
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool quiet = false;
    run->add_option("config", config_path, "YAML experiment config")->required();
    auto* out_opt = run->add_option("--output-dir,-o", output_dir, "Directory for report.json and CSV artifacts");
    auto* seed_opt = run->add_option("--seed-override", seed, "Replace the config's seed");
    run->add_flag("--quiet,-q", quiet, "Only print the summary line");

    auto* list = app.add_subcommand("list", "List the available experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : erps::runner::exit_config_error;
    }

    if (list->parsed()) {
        std::cout << erps::runner::format_catalog();
        return 0;
    }

    erps::runner::RunOptions options;
    if (*out_opt) options.output_dir = output_dir;
    if (*seed_opt) options.seed_override = seed;

    const auto t0 = std::chrono::steady_clock::now();
    const auto out = erps::runner::run_config_file(config_path, options);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out.exit_code == erps::runner::exit_config_error) {
        for (const auto& e : out.config_errors) std::cerr << "config error: " << e << '\n';
        return out.exit_code;
    }
    if (!quiet) print_checks(out);
    std::size_t failed = 0;
    for (const auto& c : out.checks) failed += c.pass ? 0 : 1;
    std::printf("%zu checks, %zu failed; report: %s\n", out.checks.size(), failed, out.report_path.string().c_str());
    // Wall time stays out of report.json so repeated runs compare byte for byte.
    std::fprintf(stderr, "wall time: %.2f s\n", wall);
    return out.exit_code;
}

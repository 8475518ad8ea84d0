#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include <json.hpp>

#include "context.hpp"

namespace erps::runner {

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::string reproduces;     ///< The quantitative claim the experiment checks.
    std::vector<int> criteria;  ///< Acceptance criteria covered by the shipped config.
};

/// The nine experiments, in catalog order.
const std::vector<ExperimentInfo>& catalog();

std::string format_catalog();

struct RunOptions {
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::uint64_t> seed_override;
};

struct RunOutcome {
    int exit_code = 0;  ///< 0 all checks pass, 1 some check failed, 2 config error.
    std::vector<std::string> config_errors;
    std::vector<Check> checks;  ///< Sorted by name.
    nlohmann::json report;
    std::filesystem::path report_path;
};

inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failure = 1;
inline constexpr int exit_config_error = 2;

/// Parses, validates and runs one experiment config, writing report.json and
/// CSV artifacts. Never throws for config or numerical problems.
RunOutcome run_config(const YAML::Node& root, const RunOptions& options);
RunOutcome run_config_file(const std::filesystem::path& path, const RunOptions& options);

/// Report JSON serialized the way it is written to disk.
std::string dump_report(const nlohmann::json& report);

}  // namespace erps::runner

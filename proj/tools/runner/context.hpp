#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace erps::runner {

struct Check {
    std::string name;
    int criterion = 0;  ///< Acceptance criterion number, 0 for supplementary checks.
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string relation;  ///< abs, rel, at_most, at_least, holds or exception.
    bool pass = false;
    std::string detail;
};

void to_json(nlohmann::json& j, const Check& c);

/// Collects checks, structured results and CSV artifacts for one experiment run.
class RunContext {
public:
    RunContext(std::filesystem::path output_dir, std::uint64_t seed, double hbar);

    std::uint64_t seed() const noexcept { return seed_; }
    double hbar() const noexcept { return hbar_; }
    const std::filesystem::path& output_dir() const noexcept { return output_dir_; }

    /// |value - expected| <= tolerance.
    void within(const std::string& name, int criterion, double value, double expected, double tolerance,
                std::string detail = {});
    /// |value - expected| <= tolerance * |expected|.
    void within_rel(const std::string& name, int criterion, double value, double expected, double tolerance,
                    std::string detail = {});
    void at_most(const std::string& name, int criterion, double value, double bound, std::string detail = {});
    void at_least(const std::string& name, int criterion, double value, double bound, std::string detail = {});
    void holds(const std::string& name, int criterion, bool ok, std::string detail = {});

    /// Runs `body`; an exception becomes a failed check called `name` and
    /// the remaining work of the experiment continues.
    void guard(const std::string& name, int criterion, const std::function<void()>& body);

    void result(const std::string& key, nlohmann::json value);
    void artifact(const std::string& filename, const std::function<void(std::ostream&)>& writer);

    const std::vector<Check>& checks() const noexcept { return checks_; }
    const nlohmann::json& results() const noexcept { return results_; }
    const std::vector<std::string>& artifacts() const noexcept { return artifacts_; }

private:
    void add(Check c);

    std::filesystem::path output_dir_;
    std::uint64_t seed_;
    double hbar_;
    std::vector<Check> checks_;
    nlohmann::json results_ = nlohmann::json::object();
    std::vector<std::string> artifacts_;
};

}  // namespace erps::runner

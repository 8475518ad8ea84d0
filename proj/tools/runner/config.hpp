#pragma once

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "erps/grid.hpp"
#include "erps/state_spec.hpp"
#include "erps/xi_model.hpp"

namespace erps::runner {

/// A YAML mapping together with its dotted key path, used to report schema
/// violations as "path.key: message". Errors accumulate in a shared list so
/// one pass reports every problem.
class Section {
public:
    Section(YAML::Node node, std::string path, std::vector<std::string>& errors);

    const std::string& path() const noexcept { return path_; }
    bool has(const std::string& key) const;

    /// Records an error for every key not in `allowed`.
    void allow_only(std::initializer_list<const char*> allowed) const;
    void allow_only(const std::vector<std::string>& allowed) const;

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const;
    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) const;
    std::uint64_t unsigned_integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const;
    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) const;
    std::vector<std::string> texts(const std::string& key,
                                   std::optional<std::vector<std::string>> fallback = std::nullopt) const;

    /// Sub-mapping; a missing required key yields an empty section and an error.
    Section child(const std::string& key, bool required = true) const;
    /// Elements of a sequence of mappings.
    std::vector<Section> children(const std::string& key) const;

    void error(const std::string& key, const std::string& message) const;
    bool failed() const noexcept { return !errors_->empty(); }
    std::size_t error_count() const noexcept { return errors_->size(); }
    bool is_list(const std::string& key) const { return has(key) && node_[key].IsSequence(); }

private:
    YAML::Node lookup(const std::string& key, bool required) const;
    std::string key_path(const std::string& key) const;

    YAML::Node node_;
    std::string path_;
    std::vector<std::string>* errors_;
};

/// Grid spec. kind "centered": n_points, length, boundary (periodic|truncated).
/// kind "momentum_periods": p0, periods, n_points, nodes_between_points.
std::optional<Grid1D> parse_grid(const Section& s, double hbar);

/// State spec. kind plane_wave{p0}, gaussian{q0,sigma,p0}, cosine{p0},
/// superposition{first, second, w1, w2} with weights as number or [re, im].
std::optional<StateSpec> parse_state(const Section& s);

/// Gaussian-only state spec (for pointers and preparation diagnostics).
std::optional<GaussianSpec> parse_gaussian(const Section& s);

/// Xi spec. kind two_point | gaussian | custom_discrete{atoms, weights}
/// with atoms in units of hbar.
std::optional<XiModel> parse_xi(const Section& s, double hbar);

struct NamedState {
    std::string name;
    StateSpec spec;
    Grid1D grid;
};

/// Sequence under `key` of {name, state, grid} entries (plus `extra_keys`).
std::vector<NamedState> parse_states(const Section& s, const std::string& key, double hbar,
                                     std::initializer_list<const char*> extra_keys = {});

/// Converts a YAML tree to JSON, typing scalars as integer, float, bool or string.
nlohmann::json yaml_to_json(const YAML::Node& node);

}  // namespace erps::runner

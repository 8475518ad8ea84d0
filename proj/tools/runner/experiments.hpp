#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "context.hpp"

namespace erps::runner {

using ExperimentBody = std::function<void(RunContext&)>;

/// Keys every config accepts at the top level.
struct Common {
    std::uint64_t seed;
    double hbar;
};

std::vector<std::string> with_common_keys(std::initializer_list<const char*> keys);

// Each parser validates its keys (recording errors on the section) and
// returns the experiment body bound to the parsed parameters.
ExperimentBody parse_optical_equivalence(const Section& root, const Common& common);
ExperimentBody parse_born_rule(const Section& root, const Common& common);
ExperimentBody parse_cramer_rao(const Section& root, const Common& common);
ExperimentBody parse_uncertainty_suite(const Section& root, const Common& common);
ExperimentBody parse_dynamics(const Section& root, const Common& common);
ExperimentBody parse_superposition(const Section& root, const Common& common);
ExperimentBody parse_measurement(const Section& root, const Common& common);
ExperimentBody parse_prep_independence(const Section& root, const Common& common);
ExperimentBody parse_classical_limit(const Section& root, const Common& common);

}  // namespace erps::runner

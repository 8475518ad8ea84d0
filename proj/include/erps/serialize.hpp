#pragma once

// JSON forms of the report structs. Field names follow the struct members;
// optional values serialize as null. Large per-point arrays (interference
// fields, compatibility deviations, post states) are left to the CSV writers.

#include <json.hpp>

#include "erps/dynamics.hpp"
#include "erps/ensemble.hpp"
#include "erps/estimation.hpp"
#include "erps/measurement.hpp"
#include "erps/superposition.hpp"

namespace erps {

void to_json(nlohmann::json& j, const MeanWithError& r);
void to_json(nlohmann::json& j, const OpticalEquivalenceReport& r);
void to_json(nlohmann::json& j, const PositionError& r);
void to_json(nlohmann::json& j, const CramerRaoPositionReport& r);
void to_json(nlohmann::json& j, const CramerRaoMomentumReport& r);
void to_json(nlohmann::json& j, const VarianceDecomposition& r);
void to_json(nlohmann::json& j, const UncertaintyReport& r);
void to_json(nlohmann::json& j, const EstimationReport& r);
void to_json(nlohmann::json& j, const ContinuityReport& r);
void to_json(nlohmann::json& j, const ClassicalLimitReport& r);
void to_json(nlohmann::json& j, const OverlapReport& r);
void to_json(nlohmann::json& j, const CompatibilityReport& r);
void to_json(nlohmann::json& j, const MeasurementRecord& r);
void to_json(nlohmann::json& j, const RepeatabilityReport& r);
void to_json(nlohmann::json& j, const BornReport& r);
void to_json(nlohmann::json& j, const MomentumAtom& r);
void to_json(nlohmann::json& j, const PrepIndependenceReport& r);
void to_json(nlohmann::json& j, const XiModel& r);

}  // namespace erps

#include "erps/serialize.hpp"

namespace erps {
namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

const char* kind_name(XiModel::Kind k) {
    switch (k) {
        case XiModel::Kind::two_point: return "two_point";
        case XiModel::Kind::gaussian: return "gaussian";
        case XiModel::Kind::custom_discrete: return "custom_discrete";
    }
    return "unknown";
}

}  // namespace

void to_json(nlohmann::json& j, const MeanWithError& r) { j = {{"mean", r.mean}, {"std_error", r.std_error}}; }

void to_json(nlohmann::json& j, const OpticalEquivalenceReport& r) {
    j = {{"observable", r.observable}, {"mc_mean", r.mc_mean},     {"std_error", r.std_error},
         {"quantum_value", r.quantum_value}, {"z_score", r.z_score}, {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const PositionError& r) {
    j = {{"value", r.value}, {"mean", r.mean}, {"grid_limited", r.grid_limited}};
}

void to_json(nlohmann::json& j, const CramerRaoPositionReport& r) {
    j = {{"ms_error_q", r.ms_error_q}, {"inv_fisher_q", r.inv_fisher_q}, {"ratio", r.ratio}};
}

void to_json(nlohmann::json& j, const CramerRaoMomentumReport& r) {
    j = {{"per_xi_ms", r.per_xi_ms},
         {"inv_fisher_p", r.inv_fisher_p},
         {"ratio", r.ratio},
         {"efficiency_constant", r.efficiency_constant},
         {"linear_slope", r.linear_slope},
         {"linear_residual", r.linear_residual}};
}

void to_json(nlohmann::json& j, const VarianceDecomposition& r) {
    j = {{"ms_error_p", r.ms_error_p}, {"dispersion_p", r.dispersion_p}, {"var_p", r.var_p}};
}

void to_json(nlohmann::json& j, const UncertaintyReport& r) {
    j = {{"ms_error_p", r.ms_error_p},
         {"ms_error_q", opt(r.ms_error_q)},
         {"var_p", r.var_p},
         {"var_q", opt(r.var_q)},
         {"product_pq", opt(r.product_pq)},
         {"hk_product", opt(r.hk_product)},
         {"robertson_rhs", opt(r.robertson_rhs)},
         {"grid_limited", r.grid_limited},
         {"tradeoff_holds", r.tradeoff_holds},
         {"kennard_holds", r.kennard_holds},
         {"robertson_holds", r.robertson_holds}};
}

void to_json(nlohmann::json& j, const EstimationReport& r) {
    j = {{"ms_error_p", r.ms_error_p},     {"ms_error_q", r.ms_error_q}, {"fisher_q", r.fisher_q},
         {"dispersion_p", r.dispersion_p}, {"var_p", r.var_p},           {"var_q", r.var_q},
         {"product_pq", r.product_pq},     {"hk_product", r.hk_product}, {"grid_limited", r.grid_limited}};
}

void to_json(nlohmann::json& j, const ContinuityReport& r) {
    j = {{"l2_norms", r.l2_norms}, {"max_l2", r.max_l2}, {"node_flag", r.node_flag}};
}

void to_json(nlohmann::json& j, const ClassicalLimitReport& r) {
    j = {{"hbar_values", r.hbar_values}, {"rms_error", r.rms_error}, {"rms_grad_s", r.rms_grad_s},
         {"ratios", r.ratios},           {"slope", opt(r.slope)},    {"status", to_string(r.status)}};
}

void to_json(nlohmann::json& j, const OverlapReport& r) {
    j = {{"overlap_threshold", r.overlap_threshold},
         {"support_1_size", r.support_1.size()},
         {"support_2_size", r.support_2.size()},
         {"overlap_set_size", r.overlap_set.size()},
         {"interference_linf", r.interference_linf},
         {"ms_error_total", r.ms_error_total},
         {"ms_error_branch_1", r.ms_error_branch_1},
         {"ms_error_branch_2", r.ms_error_branch_2},
         {"branch_normalization", "branches individually normalized"},
         {"mass_1", r.mass_1},
         {"mass_2", r.mass_2},
         {"prior_1", r.prior_1},
         {"prior_2", r.prior_2},
         {"ms_additivity_gap", r.ms_additivity_gap},
         {"ms_additivity_gap_unweighted", r.ms_additivity_gap_unweighted},
         {"dispersion_total", r.dispersion_total},
         {"dispersion_branch_1", r.dispersion_branch_1},
         {"dispersion_branch_2", r.dispersion_branch_2},
         {"total_probability_witness", r.total_probability_witness}};
}

void to_json(nlohmann::json& j, const CompatibilityReport& r) {
    j = {{"xi", r.xi},
         {"overlap_empty", r.overlap_empty},
         {"points_compared", r.points_compared},
         {"max_deviation_1", r.max_deviation_1},
         {"max_deviation_2", r.max_deviation_2},
         {"compatible", r.compatible}};
}

void to_json(nlohmann::json& j, const MeasurementRecord& r) {
    j = {{"outcome", r.outcome},
         {"pointer_reading", r.pointer_reading},
         {"pointer_index", r.pointer_index},
         {"post_ms_error_p", r.post_ms_error_p},
         {"post_grid_limited", r.post_grid_limited},
         {"retries", r.retries}};
}

void to_json(nlohmann::json& j, const RepeatabilityReport& r) {
    j = {{"expected_outcome", r.expected_outcome}, {"n_trials", r.n_trials}, {"n_same", r.n_same}, {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const BornReport& r) {
    j = {{"n_runs", r.n_runs},
         {"n_plus", r.n_plus},
         {"n_minus", r.n_minus},
         {"freq_plus", r.freq_plus},
         {"expected_plus", r.expected_plus},
         {"outside_mass", r.outside_mass},
         {"std_error", r.std_error},
         {"z_score", r.z_score},
         {"chi_square", r.chi_square},
         {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const MomentumAtom& r) {
    j = {{"p_a", r.p_a}, {"p_b", r.p_b}, {"probability", r.probability}};
}

void to_json(nlohmann::json& j, const PrepIndependenceReport& r) {
    j = {{"mode", to_string(r.mode)},
         {"q_a", r.q_a},
         {"q_b", r.q_b},
         {"degenerate", r.degenerate},
         {"degenerate_reason", r.degenerate_reason},
         {"joint", r.joint},
         {"product", r.product},
         {"tv_distance", r.tv_distance}};
}

void to_json(nlohmann::json& j, const XiModel& r) {
    j = {{"kind", kind_name(r.kind())}, {"hbar", r.hbar()}, {"atoms", r.atoms()}, {"weights", r.weights()}};
}

}  // namespace erps

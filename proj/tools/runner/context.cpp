#include "context.hpp"

#include <cmath>
#include <fstream>

#include "erps/error.hpp"

namespace erps::runner {
namespace {

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

void to_json(nlohmann::json& j, const Check& c) {
    j = {{"name", c.name},
         {"criterion", c.criterion},
         {"value", number_or_null(c.value)},
         {"expected", number_or_null(c.expected)},
         {"tolerance", number_or_null(c.tolerance)},
         {"relation", c.relation},
         {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
}

RunContext::RunContext(std::filesystem::path output_dir, std::uint64_t seed, double hbar)
    : output_dir_(std::move(output_dir)), seed_(seed), hbar_(hbar) {}

void RunContext::add(Check c) { checks_.push_back(std::move(c)); }

void RunContext::within(const std::string& name, int criterion, double value, double expected, double tolerance,
                        std::string detail) {
    const bool ok = std::abs(value - expected) <= tolerance;
    add({name, criterion, value, expected, tolerance, "abs", ok, std::move(detail)});
}

void RunContext::within_rel(const std::string& name, int criterion, double value, double expected, double tolerance,
                            std::string detail) {
    const bool ok = std::abs(value - expected) <= tolerance * std::abs(expected);
    add({name, criterion, value, expected, tolerance, "rel", ok, std::move(detail)});
}

void RunContext::at_most(const std::string& name, int criterion, double value, double bound, std::string detail) {
    add({name, criterion, value, bound, 0.0, "at_most", value <= bound, std::move(detail)});
}

void RunContext::at_least(const std::string& name, int criterion, double value, double bound, std::string detail) {
    add({name, criterion, value, bound, 0.0, "at_least", value >= bound, std::move(detail)});
}

void RunContext::holds(const std::string& name, int criterion, bool ok, std::string detail) {
    add({name, criterion, ok ? 1.0 : 0.0, 1.0, 0.0, "holds", ok, std::move(detail)});
}

void RunContext::guard(const std::string& name, int criterion, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        add({name, criterion, std::nan(""), std::nan(""), std::nan(""), "exception", false, e.what()});
    }
}

void RunContext::result(const std::string& key, nlohmann::json value) { results_[key] = std::move(value); }

void RunContext::artifact(const std::string& filename, const std::function<void(std::ostream&)>& writer) {
    std::filesystem::create_directories(output_dir_);
    std::ofstream os(output_dir_ / filename);
    if (!os) throw Error("cannot write artifact " + (output_dir_ / filename).string());
    writer(os);
    artifacts_.push_back(filename);
}

}  // namespace erps::runner

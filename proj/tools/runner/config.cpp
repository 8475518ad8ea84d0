#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "erps/error.hpp"

namespace erps::runner {

Section::Section(YAML::Node node, std::string path, std::vector<std::string>& errors)
    : node_(std::move(node)), path_(std::move(path)), errors_(&errors) {}

std::string Section::key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

void Section::error(const std::string& key, const std::string& message) const {
    errors_->push_back(key_path(key) + ": " + message);
}

bool Section::has(const std::string& key) const { return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull(); }

YAML::Node Section::lookup(const std::string& key, bool required) const {
    if (!node_.IsMap()) {
        if (required) error(key, "required (parent is not a mapping)");
        return YAML::Node();
    }
    YAML::Node v = node_[key];
    if ((!v.IsDefined() || v.IsNull()) && required) error(key, "required key is missing");
    return v;
}

void Section::allow_only(const std::vector<std::string>& allowed) const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
        const auto key = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) error(key, "unknown key");
    }
}

void Section::allow_only(std::initializer_list<const char*> allowed) const {
    allow_only(std::vector<std::string>(allowed.begin(), allowed.end()));
}

double Section::number(const std::string& key, std::optional<double> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or(0.0);
    try {
        const double x = v.as<double>();
        if (!std::isfinite(x)) error(key, "must be finite");
        return x;
    } catch (const YAML::Exception&) {
        error(key, "expected a number");
        return 0.0;
    }
}

std::int64_t Section::integer(const std::string& key, std::optional<std::int64_t> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or(0);
    try {
        return v.as<std::int64_t>();
    } catch (const YAML::Exception&) {
        error(key, "expected an integer");
        return 0;
    }
}

std::uint64_t Section::unsigned_integer(const std::string& key, std::optional<std::uint64_t> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or(0);
    try {
        const auto s = v.as<std::string>();
        if (!s.empty() && s.front() == '-') throw YAML::Exception(YAML::Mark::null_mark(), "negative");
        return v.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
        error(key, "expected a non-negative integer");
        return 0;
    }
}

bool Section::boolean(const std::string& key, std::optional<bool> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or(false);
    try {
        return v.as<bool>();
    } catch (const YAML::Exception&) {
        error(key, "expected true or false");
        return false;
    }
}

std::string Section::text(const std::string& key, std::optional<std::string> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or("");
    if (!v.IsScalar()) {
        error(key, "expected a string");
        return {};
    }
    return v.as<std::string>();
}

std::vector<double> Section::numbers(const std::string& key, std::optional<std::vector<double>> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or(std::vector<double>{});
    if (!v.IsSequence()) {
        error(key, "expected a list of numbers");
        return {};
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        try {
            out.push_back(v[i].as<double>());
        } catch (const YAML::Exception&) {
            error(key + "[" + std::to_string(i) + "]", "expected a number");
        }
    }
    return out;
}

std::vector<std::string> Section::texts(const std::string& key,
                                        std::optional<std::vector<std::string>> fallback) const {
    const auto v = lookup(key, !fallback);
    if (!v.IsDefined() || v.IsNull()) return fallback.value_or(std::vector<std::string>{});
    if (!v.IsSequence()) {
        error(key, "expected a list of strings");
        return {};
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[i].as<std::string>());
    return out;
}

Section Section::child(const std::string& key, bool required) const {
    auto v = lookup(key, required);
    if (v.IsDefined() && !v.IsNull() && !v.IsMap()) error(key, "expected a mapping");
    return Section(v.IsDefined() && v.IsMap() ? v : YAML::Node(YAML::NodeType::Map), key_path(key), *errors_);
}

std::vector<Section> Section::children(const std::string& key) const {
    const auto v = lookup(key, true);
    std::vector<Section> out;
    if (!v.IsDefined() || v.IsNull()) return out;
    if (!v.IsSequence()) {
        error(key, "expected a list");
        return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = key_path(key) + "[" + std::to_string(i) + "]";
        if (!v[i].IsMap()) errors_->push_back(p + ": expected a mapping");
        out.emplace_back(v[i].IsMap() ? v[i] : YAML::Node(YAML::NodeType::Map), p, *errors_);
    }
    return out;
}

std::optional<Grid1D> parse_grid(const Section& s, double hbar) {
    const auto kind = s.text("kind", std::string("centered"));
    const auto before = s.error_count();
    try {
        if (kind == "centered") {
            s.allow_only({"kind", "n_points", "length", "boundary"});
            const auto n = s.unsigned_integer("n_points");
            const double length = s.number("length");
            const auto b = s.text("boundary", std::string("periodic"));
            if (b != "periodic" && b != "truncated") s.error("boundary", "must be periodic or truncated");
            if (s.error_count() != before) return std::nullopt;
            return Grid1D::centered(n, length, b == "periodic" ? Boundary::periodic : Boundary::truncated);
        }
        if (kind == "momentum_periods") {
            s.allow_only({"kind", "p0", "periods", "n_points", "nodes_between_points"});
            const double p0 = s.number("p0");
            const auto periods = s.integer("periods");
            const auto n = s.unsigned_integer("n_points");
            const bool shift = s.boolean("nodes_between_points", false);
            if (periods < 1) s.error("periods", "must be at least 1");
            if (s.error_count() != before) return std::nullopt;
            return Grid1D::periodic_for_momentum(p0, hbar, static_cast<int>(periods), n, shift);
        }
        s.error("kind", "unknown grid kind '" + kind + "' (centered, momentum_periods)");
    } catch (const Error& e) {
        s.error("kind", e.what());
    }
    return std::nullopt;
}

namespace {

cplx parse_weight(const Section& s, const std::string& key) {
    if (!s.has(key)) return {1.0, 0.0};
    if (!s.is_list(key)) return {s.number(key), 0.0};
    const auto v = s.numbers(key, std::vector<double>{});
    if (v.size() == 2) return {v[0], v[1]};
    s.error(key, "expected [re, im]");
    return {1.0, 0.0};
}

}  // namespace

std::optional<GaussianSpec> parse_gaussian(const Section& s) {
    s.allow_only({"kind", "q0", "sigma", "p0"});
    const auto kind = s.text("kind", std::string("gaussian"));
    if (kind != "gaussian") s.error("kind", "must be gaussian");
    GaussianSpec g{s.number("q0", 0.0), s.number("sigma"), s.number("p0", 0.0)};
    if (!(g.sigma > 0.0)) s.error("sigma", "must be positive");
    return g;
}

std::optional<StateSpec> parse_state(const Section& s) {
    const auto kind = s.text("kind");
    if (kind == "plane_wave") {
        s.allow_only({"kind", "p0"});
        return StateSpec::plane_wave(s.number("p0"));
    }
    if (kind == "gaussian") {
        if (auto g = parse_gaussian(s)) return StateSpec{*g};
        return std::nullopt;
    }
    if (kind == "cosine") {
        s.allow_only({"kind", "p0"});
        return StateSpec::cosine(s.number("p0"));
    }
    if (kind == "superposition") {
        s.allow_only({"kind", "first", "second", "w1", "w2"});
        auto a = parse_state(s.child("first"));
        auto b = parse_state(s.child("second"));
        const cplx w1 = parse_weight(s, "w1"), w2 = parse_weight(s, "w2");
        if (w1 == cplx{} && w2 == cplx{}) s.error("w1", "weights must not both be zero");
        if (!a || !b) return std::nullopt;
        return StateSpec::superposition(*a, *b, w1, w2);
    }
    if (!kind.empty()) s.error("kind", "unknown state kind '" + kind + "' (plane_wave, gaussian, cosine, superposition)");
    return std::nullopt;
}

std::optional<XiModel> parse_xi(const Section& s, double hbar) {
    const auto kind = s.text("kind", std::string("two_point"));
    try {
        if (kind == "two_point") {
            s.allow_only({"kind"});
            return XiModel::two_point(hbar);
        }
        if (kind == "gaussian") {
            s.allow_only({"kind"});
            return XiModel::gaussian(hbar);
        }
        if (kind == "custom_discrete") {
            s.allow_only({"kind", "atoms", "weights"});
            const auto before = s.error_count();
            auto atoms = s.numbers("atoms");
            const auto weights = s.numbers("weights");
            if (s.error_count() != before) return std::nullopt;
            for (auto& a : atoms) a *= hbar;
            return XiModel::custom_discrete(atoms, weights, hbar);
        }
        s.error("kind", "unknown xi kind '" + kind + "' (two_point, gaussian, custom_discrete)");
    } catch (const Error& e) {
        s.error("kind", e.what());
    }
    return std::nullopt;
}

std::vector<NamedState> parse_states(const Section& s, const std::string& key, double hbar,
                                     std::initializer_list<const char*> extra_keys) {
    std::vector<NamedState> out;
    for (const auto& entry : s.children(key)) {
        std::vector<std::string> allowed{"name", "state", "grid"};
        allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
        entry.allow_only(allowed);
        const auto name = entry.text("name");
        auto spec = parse_state(entry.child("state"));
        auto grid = parse_grid(entry.child("grid"), hbar);
        if (!spec || !grid) continue;
        try {
            (void)sample_amplitudes(*spec, *grid, hbar);
        } catch (const Error& e) {
            entry.error("state", e.what());
            continue;
        }
        out.push_back({name, *spec, *grid});
    }
    return out;
}

nlohmann::json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Map: {
            auto j = nlohmann::json::object();
            for (const auto& kv : node) j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return j;
        }
        case YAML::NodeType::Sequence: {
            auto j = nlohmann::json::array();
            for (const auto& v : node) j.push_back(yaml_to_json(v));
            return j;
        }
        case YAML::NodeType::Scalar: {
            const auto s = node.as<std::string>();
            std::int64_t i{};
            double d{};
            bool b{};
            if (YAML::convert<std::int64_t>::decode(node, i)) return i;
            if (YAML::convert<double>::decode(node, d)) return d;
            if (YAML::convert<bool>::decode(node, b)) return b;
            return s;
        }
        default:
            return nullptr;
    }
}

}  // namespace erps::runner

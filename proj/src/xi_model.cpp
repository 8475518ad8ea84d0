#include "erps/xi_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "erps/error.hpp"

namespace erps {

XiModel::XiModel(Kind kind, double hbar, std::vector<double> atoms, std::vector<double> weights)
    : kind_(kind), hbar_(hbar), atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (!(hbar_ > 0.0)) throw PreconditionError("XiModel: hbar must be positive");
    cumulative_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

XiModel XiModel::two_point(double hbar) { return XiModel(Kind::two_point, hbar, {-hbar, hbar}, {0.5, 0.5}); }

XiModel XiModel::gaussian(double hbar) { return XiModel(Kind::gaussian, hbar, {}, {}); }

XiModel XiModel::custom_discrete(std::vector<double> atoms, std::vector<double> weights, double hbar) {
    if (atoms.empty() || atoms.size() != weights.size()) {
        throw PreconditionError("XiModel: atoms and weights must be non-empty and of equal length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw PreconditionError("XiModel: weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw PreconditionError("XiModel: weights sum to zero");
    for (double& w : weights) w /= total;
    XiModel model(Kind::custom_discrete, hbar, std::move(atoms), std::move(weights));
    if (std::abs(model.mean()) > 1e-12 * hbar) throw PreconditionError("XiModel: mean of xi must vanish");
    if (std::abs(model.variance() - hbar * hbar) > 1e-12 * hbar * hbar) {
        throw PreconditionError("XiModel: variance of xi must equal hbar^2");
    }
    return model;
}

double XiModel::mean() const {
    if (kind_ == Kind::gaussian) return 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) m += weights_[i] * atoms_[i];
    return m;
}

double XiModel::variance() const {
    if (kind_ == Kind::gaussian) return hbar_ * hbar_;
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) v += weights_[i] * (atoms_[i] - m) * (atoms_[i] - m);
    return v;
}

XiModel XiModel::with_hbar(double hbar) const {
    const double scale = hbar / hbar_;
    std::vector<double> atoms(atoms_);
    for (double& a : atoms) a *= scale;
    return XiModel(kind_, hbar, std::move(atoms), weights_);
}

double XiModel::sample(CounterRng& rng) const {
    if (kind_ == Kind::gaussian) {
        const double r = std::sqrt(-2.0 * std::log(rng.uniform_open_low()));
        return hbar_ * r * std::cos(2.0 * std::numbers::pi * rng.uniform());
    }
    if (kind_ == Kind::two_point) return rng.uniform() < 0.5 ? atoms_[0] : atoms_[1];
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
    return atoms_[idx];
}

}  // namespace erps

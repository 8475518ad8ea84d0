#pragma once

#include <vector>

#include "erps/rng.hpp"

namespace erps {

/// Distribution chi(xi) of the global noise variable, with mean 0 and
/// variance hbar^2.
class XiModel {
public:
    enum class Kind { two_point, gaussian, custom_discrete };

    /// xi = +-hbar with equal weight; the moments hold exactly.
    static XiModel two_point(double hbar);
    static XiModel gaussian(double hbar);
    /// Arbitrary atoms; rejected unless |mean| <= 1e-12 hbar and
    /// |variance - hbar^2| <= 1e-12 hbar^2.
    static XiModel custom_discrete(std::vector<double> atoms, std::vector<double> weights, double hbar);

    Kind kind() const noexcept { return kind_; }
    double hbar() const noexcept { return hbar_; }
    bool discrete() const noexcept { return kind_ != Kind::gaussian; }
    const std::vector<double>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double mean() const;
    double variance() const;

    /// Same shape with a different action unit.
    XiModel with_hbar(double hbar) const;

    double sample(CounterRng& rng) const;

private:
    XiModel(Kind kind, double hbar, std::vector<double> atoms, std::vector<double> weights);

    Kind kind_;
    double hbar_;
    std::vector<double> atoms_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

}  // namespace erps

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "erps/grid.hpp"

namespace erps {

/// Classical observable O(q, p) = A(q) + B(q) p + C(q) p^2.
///
/// Quantised with the ordering A(q) + (B p + p B)/2 + p C(q) p.
struct Observable {
    using Coefficient = std::function<double(double)>;

    std::string name;
    Coefficient a;
    Coefficient b;
    Coefficient c;

    double classical(double q, double p) const { return a(q) + b(q) * p + c(q) * p * p; }

    static Observable general(std::string name, Coefficient a, Coefficient b, Coefficient c);
    static Observable identity();
    static Observable position();
    static Observable position_squared();
    static Observable momentum();
    static Observable momentum_squared();
    /// (q p + p q) / 2.
    static Observable symmetrized_position_momentum();
    /// p q^2 p.
    static Observable momentum_position_squared_momentum();
};

/// Coefficients tabulated on a grid.
struct ObservableFields {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;

    static ObservableFields tabulate(const Observable& obs, const Grid1D& grid);
};

}  // namespace erps

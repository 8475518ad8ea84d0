#include "erps/observable.hpp"

namespace erps {
namespace {
double zero(double) { return 0.0; }
double one(double) { return 1.0; }
double ident(double q) { return q; }
double square(double q) { return q * q; }
}  // namespace

Observable Observable::general(std::string name, Coefficient a, Coefficient b, Coefficient c) {
    return {std::move(name), a ? a : zero, b ? b : zero, c ? c : zero};
}

Observable Observable::identity() { return {"1", one, zero, zero}; }
Observable Observable::position() { return {"q", ident, zero, zero}; }
Observable Observable::position_squared() { return {"q^2", square, zero, zero}; }
Observable Observable::momentum() { return {"p", zero, one, zero}; }
Observable Observable::momentum_squared() { return {"p^2", zero, zero, one}; }
Observable Observable::symmetrized_position_momentum() { return {"(qp+pq)/2", zero, ident, zero}; }
Observable Observable::momentum_position_squared_momentum() { return {"p q^2 p", zero, zero, square}; }

ObservableFields ObservableFields::tabulate(const Observable& obs, const Grid1D& grid) {
    ObservableFields f{std::vector<double>(grid.size()), std::vector<double>(grid.size()),
                       std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double q = grid.coordinate(i);
        f.a[i] = obs.a(q);
        f.b[i] = obs.b(q);
        f.c[i] = obs.c(q);
    }
    return f;
}

}  // namespace erps

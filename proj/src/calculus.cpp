#include "erps/calculus.hpp"

#include <cmath>
#include <numbers>

#include "erps/error.hpp"

namespace erps {

DiffScheme default_scheme(const Grid1D& grid) noexcept {
    return grid.periodic() ? DiffScheme::spectral : DiffScheme::central;
}

std::vector<cplx> derivative(std::span<const cplx> f, const Grid1D& grid, DiffScheme scheme) {
    const std::size_t n = grid.size();
    if (f.size() != n) throw PreconditionError("derivative: field size does not match grid");

    if (scheme == DiffScheme::spectral) {
        auto spec = fft(f);
        const auto k = grid.wavenumbers(true);
        for (std::size_t i = 0; i < n; ++i) spec[i] *= cplx(0.0, k[i]);
        return ifft(spec);
    }

    std::vector<cplx> df(n);
    const double inv2h = 0.5 / grid.spacing();
    for (std::size_t i = 1; i + 1 < n; ++i) df[i] = (f[i + 1] - f[i - 1]) * inv2h;
    if (grid.periodic()) {
        df[0] = (f[1] - f[n - 1]) * inv2h;
        df[n - 1] = (f[0] - f[n - 2]) * inv2h;
    } else {
        df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
        df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
    }
    return df;
}

std::vector<double> derivative(std::span<const double> f, const Grid1D& grid, DiffScheme scheme) {
    std::vector<cplx> fc(f.begin(), f.end());
    const auto dc = derivative(fc, grid, scheme);
    std::vector<double> out(dc.size());
    for (std::size_t i = 0; i < dc.size(); ++i) out[i] = dc[i].real();
    return out;
}

double integrate(std::span<const double> f, const Grid1D& grid) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * grid.spacing();
}

double wrap_angle(double x) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(x, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

}  // namespace erps

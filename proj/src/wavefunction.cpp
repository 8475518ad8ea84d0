#include "erps/wavefunction.hpp"

#include <algorithm>
#include <cmath>

#include "erps/error.hpp"

namespace erps {
namespace {

void require_finite(std::span<const cplx> amp) {
    for (const auto& v : amp) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("wave function has non-finite amplitudes");
        }
    }
}

double sum_sq(std::span<const cplx> amp) {
    double s = 0.0;
    for (const auto& v : amp) s += std::norm(v);
    return s;
}

}  // namespace

WaveFunction::WaveFunction(Grid1D grid, std::vector<cplx> amplitudes, double hbar)
    : grid_(grid), amp_(std::move(amplitudes)), hbar_(hbar) {
    if (amp_.size() != grid_.size()) throw PreconditionError("amplitude count does not match grid size");
    if (!(hbar_ > 0.0)) throw PreconditionError("hbar must be positive");
    require_finite(amp_);
}

double WaveFunction::norm() const { return std::sqrt(sum_sq(amp_) * grid_.spacing()); }

bool WaveFunction::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

WaveFunction WaveFunction::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw NumericalError("cannot normalize a zero wave function");
    std::vector<cplx> out(amp_);
    for (auto& v : out) v /= n;
    return WaveFunction(grid_, std::move(out), hbar_);
}

std::vector<double> WaveFunction::density() const {
    std::vector<double> rho(amp_.size());
    std::transform(amp_.begin(), amp_.end(), rho.begin(), [](cplx v) { return std::norm(v); });
    return rho;
}

double WaveFunction::peak_density() const {
    double peak = 0.0;
    for (const auto& v : amp_) peak = std::max(peak, std::norm(v));
    return peak;
}

WaveFunction2D::WaveFunction2D(Grid2D grid, std::vector<cplx> amplitudes, double hbar)
    : grid_(grid), amp_(std::move(amplitudes)), hbar_(hbar) {
    if (amp_.size() != grid_.size()) throw PreconditionError("amplitude count does not match grid size");
    if (!(hbar_ > 0.0)) throw PreconditionError("hbar must be positive");
    require_finite(amp_);
}

double WaveFunction2D::norm() const { return std::sqrt(sum_sq(amp_) * grid_.cell_area()); }

WaveFunction2D WaveFunction2D::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw NumericalError("cannot normalize a zero wave function");
    std::vector<cplx> out(amp_);
    for (auto& v : out) v /= n;
    return WaveFunction2D(grid_, std::move(out), hbar_);
}

std::vector<double> WaveFunction2D::marginal_b() const {
    const std::size_t na = grid_.a().size(), nb = grid_.b().size();
    std::vector<double> m(nb, 0.0);
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t ib = 0; ib < nb; ++ib) m[ib] += std::norm(amp_[ia * nb + ib]);
    }
    for (auto& v : m) v *= grid_.a().spacing();
    return m;
}

WaveFunction WaveFunction2D::slice_at_b(std::size_t ib) const {
    const std::size_t na = grid_.a().size(), nb = grid_.b().size();
    if (ib >= nb) throw PreconditionError("slice index outside grid");
    std::vector<cplx> s(na);
    for (std::size_t ia = 0; ia < na; ++ia) s[ia] = amp_[ia * nb + ib];
    return WaveFunction(grid_.a(), std::move(s), hbar_);
}

}  // namespace erps

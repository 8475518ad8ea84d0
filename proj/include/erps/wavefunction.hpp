#pragma once

#include <span>
#include <vector>

#include "erps/fft.hpp"
#include "erps/grid.hpp"

namespace erps {

/// Complex amplitudes on a 1D grid together with the action unit hbar.
/// Immutable; `normalized()` returns a rescaled copy.
class WaveFunction {
public:
    WaveFunction(Grid1D grid, std::vector<cplx> amplitudes, double hbar);

    const Grid1D& grid() const noexcept { return grid_; }
    double hbar() const noexcept { return hbar_; }
    std::span<const cplx> amplitudes() const noexcept { return amp_; }
    cplx operator[](std::size_t i) const noexcept { return amp_[i]; }
    std::size_t size() const noexcept { return amp_.size(); }

    /// Rectangle-rule L2 norm, sqrt(sum |psi|^2 dq).
    double norm() const;
    bool is_normalized(double tol = 1e-10) const;
    WaveFunction normalized() const;

    std::vector<double> density() const;
    double peak_density() const;

private:
    Grid1D grid_;
    std::vector<cplx> amp_;
    double hbar_;
};

/// Amplitudes over a Grid2D, row-major with axis a major.
class WaveFunction2D {
public:
    WaveFunction2D(Grid2D grid, std::vector<cplx> amplitudes, double hbar);

    const Grid2D& grid() const noexcept { return grid_; }
    double hbar() const noexcept { return hbar_; }
    std::span<const cplx> amplitudes() const noexcept { return amp_; }
    cplx at(std::size_t ia, std::size_t ib) const noexcept { return amp_[grid_.index(ia, ib)]; }

    double norm() const;
    WaveFunction2D normalized() const;

    /// Marginal density of the b coordinate, integrated over a.
    std::vector<double> marginal_b() const;
    /// Conditional slice psi(., q_b[ib]) as an unnormalised 1D state.
    WaveFunction slice_at_b(std::size_t ib) const;

private:
    Grid2D grid_;
    std::vector<cplx> amp_;
    double hbar_;
};

}  // namespace erps

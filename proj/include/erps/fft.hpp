#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace erps {

using cplx = std::complex<double>;

/// Unnormalised forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
std::vector<cplx> fft(std::span<const cplx> x);
/// Inverse DFT including the 1/n factor, so ifft(fft(x)) == x.
std::vector<cplx> ifft(std::span<const cplx> x);

/// Row-major 2D transforms over an (n0 x n1) array.
std::vector<cplx> fft2(std::span<const cplx> x, std::size_t n0, std::size_t n1);
std::vector<cplx> ifft2(std::span<const cplx> x, std::size_t n0, std::size_t n1);

}  // namespace erps

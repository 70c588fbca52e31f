#pragma once

#include <complex>
#include <span>

namespace ersatz::detail {

/// In-place forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
/// Plans are cached per size; execution is safe from concurrent callers.
void fft_forward(std::span<std::complex<double>> data);

}  // namespace ersatz::detail

#pragma once

#include <complex>
#include <span>

namespace ming::detail {

enum class DftSign { forward = -1, backward = +1 };

/// Unnormalized in-place DFT: x_k <- sum_j x_j exp(sign * 2 pi i j k / n).
/// Plans are cached per (length, sign); safe to call from several threads.
void dft_inplace(std::span<std::complex<double>> data, DftSign sign);

}  // namespace ming::detail

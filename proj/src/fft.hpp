#pragma once

#include <complex>
#include <span>

namespace blochsim::detail {

/// Unnormalized in-place DFT, sign -1 (forward) or +1 (backward).
/// Plans are cached per (size, sign) and shared across threads.
void dft_inplace(std::span<std::complex<double>> data, int sign);

}  // namespace blochsim::detail

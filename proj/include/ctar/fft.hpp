#pragma once

#include <complex>
#include <vector>

namespace ctar::fft {

// In-place iterative radix-2 transform.  Size must be a power of two.
// Forward convention: X_k = sum_j x_j exp(-2*pi*i*j*k/n).
// The inverse applies the conjugate transform and divides by n.
void transform(std::vector<std::complex<double>>& data, bool inverse);

bool is_power_of_two(std::size_t n);

}  // namespace ctar::fft

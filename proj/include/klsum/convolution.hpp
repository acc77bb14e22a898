#pragma once

#include <complex>
#include <span>
#include <vector>

namespace klsum {

// In-place radix-2 FFT; data.size() must be a power of two. inverse = true
// computes the unnormalized inverse transform.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

// c[m] = sum_{i + j = m mod n} a[i] b[j] for equal lengths n, realized by a
// zero-padded power-of-two linear convolution folded back modulo n.
std::vector<std::complex<double>> cyclic_convolution(std::span<const std::complex<double>> a,
                                                     std::span<const std::complex<double>> b);

}  // namespace klsum

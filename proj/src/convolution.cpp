#include "klsum/convolution.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace klsum {

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw std::invalid_argument("fft length must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles are evaluated directly rather than by recurrence to keep the
    // error at O(eps log n).
    std::vector<std::complex<double>> w(half);
    for (std::size_t j = 0; j < half; ++j) {
      w[j] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
                                 static_cast<double>(len));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const auto u = data[i + j];
        const auto v = data[i + j + half] * w[j];
        data[i + j] = u + v;
        data[i + j + half] = u - v;
      }
    }
  }
}

std::vector<std::complex<double>> cyclic_convolution(std::span<const std::complex<double>> a,
                                                     std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cyclic convolution length mismatch");
  const std::size_t n = a.size();
  if (n == 0) return {};
  const std::size_t len = std::bit_ceil(2 * n - 1);
  std::vector<std::complex<double>> fa(len), fb(len);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft_inplace(fa, false);
  fft_inplace(fb, false);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  fft_inplace(fa, true);
  const double scale = 1.0 / static_cast<double>(len);
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < 2 * n - 1; ++i) out[i % n] += fa[i] * scale;
  return out;
}

}  // namespace klsum

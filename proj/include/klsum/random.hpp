#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace klsum {

// MT19937-64 (Matsumoto & Nishimura, 64-bit variant as specified in the C++
// standard), with draws reduced by a plain modulo so that a seed yields the
// same stream on every standard library. The modulo bias is below 2^-32 for
// every range used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  // Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::vector<std::uint32_t> tuple(std::size_t len, std::uint32_t q) {
    std::vector<std::uint32_t> out(len);
    for (auto& v : out) v = static_cast<std::uint32_t>(below(q));
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace klsum

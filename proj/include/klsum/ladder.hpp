#pragma once
// Prime-ladder experiment for the complete sums: on each prime, sample shift
// tuples on the generic stratum (all coordinates distinct) and on the
// subgeneric off-diagonal strata, and record the normalized maxima of
// |Sigma_I| and |Sigma_II|.
#include <cstdint>
#include <vector>

namespace klsum {

struct LadderConfig {
  std::vector<std::uint64_t> primes{101, 151, 211, 307, 401, 499};
  std::uint32_t k = 2;
  std::vector<std::int64_t> chars;  // empty: trivial tuple
  std::size_t l = 2;
  std::size_t samples = 100;        // generic tuples per prime
  std::size_t sub_samples = 100;    // subgeneric tuples per prime
  std::size_t calibration = 200;    // stratum scan that fixes the generic z_count
  std::size_t max_attempts = 200000;
  std::uint64_t seed = 0;
  double growth_exponent = 0.15;
  double sub_constant = 10.0;
  unsigned threads = 1;
};

struct LadderRow {
  std::uint64_t q = 0;
  int generic = -1;
  std::size_t attempts = 0;
  std::size_t generic_count = 0;
  double R_I = 0.0;   // max |Sigma_I| / q
  double R_II = 0.0;  // max |Sigma_II| / q^{3/2}
  std::size_t sub_count = 0;
  double sub_I = 0.0;   // max |Sigma_I| / q^{3/2} on subgeneric tuples
  double sub_II = 0.0;  // max |Sigma_II| / q^2 on subgeneric tuples
};

struct LadderReport {
  std::vector<LadderRow> rows;
  double threshold = 0.0;  // (q_last / q_first)^growth_exponent
  double growth_I = 0.0;   // R_I(q_last) / R_I(q_first)
  double growth_II = 0.0;
  bool trend_I_ok = false;
  bool trend_II_ok = false;
  bool sub_ok = false;     // every subgeneric ratio <= sub_constant
  bool complete = false;   // every prime reached its sample quotas
};

// Seeds are derived per prime as seed + q. Throws DomainError for an empty
// ladder or a prime with k not dividing q - 1.
LadderReport prime_ladder(const LadderConfig& config);

}  // namespace klsum

#include "klsum/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "klsum/complete_sums.hpp"
#include "klsum/error.hpp"
#include "klsum/random.hpp"
#include "klsum/strata.hpp"

namespace klsum {

namespace {

bool all_distinct(const ParamTuple& b) {
  return std::set<Elem>(b.values().begin(), b.values().end()).size() == b.size();
}

LadderRow run_prime(const LadderConfig& c, std::uint64_t q) {
  auto field = build_field(q);
  const CharTuple tuple = c.chars.empty() ? CharTuple::trivial(field, c.k) : CharTuple(field, c.chars);
  if (tuple.size() != c.k) throw DomainError("prime_ladder: chars must have k entries");
  const KlTable K = kl_table_fast(tuple);

  LadderRow row;
  row.q = q;
  row.generic = stratum_scan(*field, c.k, c.l, {false, c.calibration, c.seed + q}, c.threads).generic;

  const double qd = static_cast<double>(q);
  Rng rng(c.seed + q);
  while ((row.generic_count < c.samples || row.sub_count < c.sub_samples) && row.attempts < c.max_attempts) {
    ++row.attempts;
    const ParamTuple b(rng.tuple(2 * c.l, field->q()));
    const StratumReport s = stratum_report(*field, c.k, b);
    if (s.degenerate) continue;
    const bool generic = s.z_count == row.generic && all_distinct(b);
    const bool sub = s.z_count < row.generic && !s.on_diagonal;
    if (generic && row.generic_count < c.samples) {
      const SumReport r = sigma_II(K, b, {false, c.threads});
      row.R_I = std::max(row.R_I, std::abs(r.sigma_I) / qd);
      row.R_II = std::max(row.R_II, std::abs(r.sigma_II) / std::pow(qd, 1.5));
      ++row.generic_count;
    } else if (sub && row.sub_count < c.sub_samples) {
      const SumReport r = sigma_II(K, b, {false, c.threads});
      row.sub_I = std::max(row.sub_I, std::abs(r.sigma_I) / std::pow(qd, 1.5));
      row.sub_II = std::max(row.sub_II, std::abs(r.sigma_II) / (qd * qd));
      ++row.sub_count;
    }
  }
  return row;
}

}  // namespace

LadderReport prime_ladder(const LadderConfig& config) {
  if (config.primes.empty()) throw DomainError("prime_ladder: empty ladder");
  LadderReport rep;
  rep.complete = true;
  rep.sub_ok = true;
  for (std::uint64_t q : config.primes) {
    rep.rows.push_back(run_prime(config, q));
    const LadderRow& r = rep.rows.back();
    rep.complete = rep.complete && r.generic_count == config.samples && r.sub_count == config.sub_samples;
    rep.sub_ok = rep.sub_ok && r.sub_I <= config.sub_constant && r.sub_II <= config.sub_constant;
  }
  const LadderRow& first = rep.rows.front();
  const LadderRow& last = rep.rows.back();
  rep.threshold = std::pow(static_cast<double>(last.q) / static_cast<double>(first.q), config.growth_exponent);
  rep.growth_I = first.R_I > 0 ? last.R_I / first.R_I : 0.0;
  rep.growth_II = first.R_II > 0 ? last.R_II / first.R_II : 0.0;
  rep.trend_I_ok = first.R_I > 0 && rep.growth_I <= rep.threshold;
  rep.trend_II_ok = first.R_II > 0 && rep.growth_II <= rep.threshold;
  return rep;
}

}  // namespace klsum

#include "klsum/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "klsum/error.hpp"
#include "klsum/parallel.hpp"
#include "klsum/random.hpp"
#include "klsum/strata.hpp"
#include "klsum/summation.hpp"

namespace klsum {

using boost::multiprecision::cpp_int;

// ---------------------------------------------------------------- CoeffSeq

CoeffSeq::CoeffSeq(std::vector<std::uint64_t> support, std::vector<Complex> values)
    : support_(std::move(support)), values_(std::move(values)) {
  if (support_.size() != values_.size())
    throw DomainError("CoeffSeq: support and values differ in length");
  std::set<std::uint64_t> seen;
  CompensatedSum l1, l2;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] == 0) throw DomainError("CoeffSeq: indices start at 1");
    if (!seen.insert(support_[i]).second)
      throw DomainError("CoeffSeq: repeated index " + std::to_string(support_[i]));
    l1 += std::abs(values_[i]);
    l2 += std::norm(values_[i]);
    max_index_ = std::max(max_index_, support_[i]);
  }
  l1_ = l1.value();
  l2_ = std::sqrt(l2.value());
}

CoeffSeq CoeffSeq::interval_ones(std::uint64_t n) {
  std::vector<std::uint64_t> idx(n);
  for (std::uint64_t i = 0; i < n; ++i) idx[i] = i + 1;
  return CoeffSeq(std::move(idx), std::vector<Complex>(n, Complex(1.0, 0.0)));
}

namespace {

void check_support(const CoeffSeq& c, std::uint32_t q, const char* name) {
  if (c.max_index() >= q)
    throw DomainError(std::string("bilinear: ") + name + " has an index outside [1, q-1]");
}

}  // namespace

Complex bilinear_form(const KlTable& table, const CoeffSeq& alpha, const CoeffSeq& beta) {
  const auto& f = table.field();
  check_support(alpha, f.q(), "alpha");
  check_support(beta, f.q(), "beta");
  CompensatedComplexSum acc;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Elem m = static_cast<Elem>(alpha.support()[i]);
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const Elem n = static_cast<Elem>(beta.support()[j]);
      acc += alpha.values()[i] * beta.values()[j] * table(f.mul(m, n));
    }
  }
  return acc.value();
}

// ------------------------------------------------------------ range flags

namespace {

cpp_int ipow(std::uint64_t base, std::int64_t e) {
  return boost::multiprecision::pow(cpp_int(base), static_cast<unsigned>(e));
}

// lhs_base^lhs_exp  <  or <=  q^{num}, where num may be negative.
bool power_less(std::uint64_t lhs_base, std::int64_t lhs_exp, std::uint64_t q, std::int64_t num, bool strict) {
  cpp_int lhs = ipow(lhs_base, lhs_exp);
  cpp_int rhs = 1;
  if (num >= 0)
    rhs = ipow(q, num);
  else
    lhs *= ipow(q, -num);
  return strict ? lhs < rhs : lhs <= rhs;
}

}  // namespace

bool type_ii_range_first(std::uint64_t q, std::uint64_t N, unsigned l) {
  // q^3 <= N^{2l} and (2N)^{4l} < q^{2l-3}
  const bool lower = ipow(q, 3) <= ipow(N, 2 * l);
  return lower && power_less(2 * N, 4 * std::int64_t{l}, q, 2 * std::int64_t{l} - 3, true);
}

bool type_ii_range_second(std::uint64_t q, std::uint64_t N, std::uint64_t M_plus, unsigned l) {
  // q^3 <= N^{2l} and (2 N M^+)^{2l} < q^{2l-3}
  const bool lower = ipow(q, 3) <= ipow(N, 2 * l);
  return lower && power_less(2 * N * M_plus, 2 * std::int64_t{l}, q, 2 * std::int64_t{l} - 3, true);
}

bool type_i_range_first(std::uint64_t q, std::uint64_t N, unsigned l) {
  // q <= N^l and (2N)^{2l} <= q^{l+1}
  const bool lower = cpp_int(q) <= ipow(N, l);
  return lower && power_less(2 * N, 2 * std::int64_t{l}, q, std::int64_t{l} + 1, false);
}

bool type_i_range_second(std::uint64_t q, std::uint64_t N, std::uint64_t M_plus, unsigned l) {
  // q <= N^l and (2 N M^+)^{2l} <= q^{2l+1}
  const bool lower = cpp_int(q) <= ipow(N, l);
  return lower && power_less(2 * N * M_plus, 2 * std::int64_t{l}, q, 2 * std::int64_t{l} + 1, false);
}

BoundReport theorem_bounds(const BoundInput& in, BilinearType type) {
  if (in.q == 0 || in.M == 0 || in.N == 0 || in.M_plus == 0 || in.l == 0)
    throw DomainError("theorem_bounds: q, M, N, M^+ and l must be positive");
  const double q = static_cast<double>(in.q);
  const double M = static_cast<double>(in.M);
  const double N = static_cast<double>(in.N);
  const double l = static_cast<double>(in.l);

  BoundReport r;
  r.type = type;
  r.computed = in.computed;
  if (type == BilinearType::kTypeII) {
    r.trivial = in.sup_K * in.alpha_l2 * in.beta_l2 * std::sqrt(M * N);
    const double inner = 1.0 / M + std::pow(std::pow(q, 0.75 + 0.75 / l) / (M * N), 1.0 / l);
    r.theorem = in.alpha_l2 * in.beta_l2 * std::sqrt(M * N) * std::sqrt(inner);
    r.range_first = type_ii_range_first(in.q, in.N, in.l);
    r.range_second = type_ii_range_second(in.q, in.N, in.M_plus, in.l);
  } else {
    const double beta_l2 = std::sqrt(N);
    r.trivial = in.sup_K * in.alpha_l2 * beta_l2 * std::sqrt(M * N);
    r.theorem = std::pow(in.alpha_l1, 1.0 - 1.0 / l) * std::pow(in.alpha_l2, 1.0 / l) *
                std::pow(M, 1.0 / (2 * l)) * N * std::pow(std::pow(q, 1.0 + 1.0 / l) / (M * N * N), 1.0 / (2 * l));
    r.range_first = type_i_range_first(in.q, in.N, in.l);
    r.range_second = type_i_range_second(in.q, in.N, in.M_plus, in.l);
  }
  r.in_range = r.range_first || r.range_second;
  if (in.computed) {
    if (r.trivial > 0) r.ratio_trivial = *in.computed / r.trivial;
    if (r.theorem > 0) r.ratio_theorem = *in.computed / r.theorem;
  }
  return r;
}

// --------------------------------------------------------- shift reduction

ShiftTrace shift_reduction_trace(const KlTable& table, const CoeffSeq& alpha, const ShiftParams& p) {
  const PrimeField& f = table.field();
  const std::uint64_t q = f.q();
  if (p.A == 0 || p.B == 0 || p.N == 0 || p.l == 0)
    throw DomainError("shift_reduction_trace: A, B, N and l must be positive");
  if (p.A * p.B > p.N) throw DomainError("shift_reduction_trace: need AB <= N");
  if (p.N >= q) throw DomainError("shift_reduction_trace: need N < q");
  if (2 * p.B > q) throw DomainError("shift_reduction_trace: need 2B <= q");
  check_support(alpha, f.q(), "alpha");

  ShiftTrace t;
  t.cond_2AN = 2 * p.A * p.N < q;
  t.cond_2AMplus = 2 * p.A * alpha.max_index() < q;
  if (!t.cond_2AN && !t.cond_2AMplus)
    throw DomainError("shift_reduction_trace: need 2AN < q or 2AM^+ < q");

  const std::size_t M = alpha.size();
  const auto& idx = alpha.support();
  const auto& val = alpha.values();
  auto K = [&](std::uint64_t x) { return table(static_cast<Elem>(x % q)); };

  // S^{!=} and the Cauchy step.
  CompensatedComplexSum s_neq;
  CompensatedSum square, diagonal;
  CompensatedComplexSum type_i;
  for (std::uint64_t n = 1; n <= p.N; ++n) {
    Complex v = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const Complex ki = K(idx[i] * n);
      v += val[i] * ki;
      diagonal += std::norm(val[i]) * std::norm(ki);
      for (std::size_t j = 0; j < M; ++j)
        if (j != i) s_neq += val[i] * std::conj(val[j]) * ki * std::conj(K(idx[j] * n));
    }
    square += std::norm(v);
    type_i += v;
  }
  t.s_neq = s_neq.value();
  t.square_sum = square.value();
  t.square_diagonal = diagonal.value();
  t.square_identity_diff = std::abs(t.square_sum - (t.square_diagonal + t.s_neq.real())) + std::abs(t.s_neq.imag());
  t.type_i_form = std::abs(type_i.value());
  t.cauchy_ok = t.type_i_form <= std::sqrt(double(p.N) * t.square_sum) * (1 + 1e-12) + 1e-12;

  // The shifted average: for each (a, b) the inner sum runs over n with n + ab in [1, N].
  CompensatedComplexSum shifted;
  for (std::uint64_t a = p.A; a < 2 * p.A; ++a)
    for (std::uint64_t b = p.B; b < 2 * p.B; ++b) {
      const std::int64_t ab = static_cast<std::int64_t>(a * b);
      for (std::int64_t n = 1 - ab; n <= static_cast<std::int64_t>(p.N) - ab; ++n) {
        const std::uint64_t x = static_cast<std::uint64_t>(n + ab);
        for (std::size_t i = 0; i < M; ++i)
          for (std::size_t j = 0; j < M; ++j)
            if (j != i) shifted += val[i] * std::conj(val[j]) * K(idx[i] * x) * std::conj(K(idx[j] * x));
      }
    }
  t.s_shift = shifted.value() / double(p.A * p.B);
  t.shift_identity_diff = std::abs(t.s_shift - t.s_neq);

  // nu(r, s1, s2) over a ~ A, n in [1, N], m1 != m2, with r = n / a, s_i = a m_i.
  std::unordered_map<std::uint64_t, double> nu;
  std::unordered_map<Elem, std::uint64_t> ratio_count;
  auto key = [q](Elem r, Elem s1, Elem s2) { return (std::uint64_t{r} * q + s1) * q + s2; };
  CompensatedSum nu_sum;
  for (std::uint64_t a = p.A; a < 2 * p.A; ++a) {
    const Elem ainv = f.inv(static_cast<Elem>(a % q));
    for (std::uint64_t n = 1; n <= p.N; ++n) {
      const Elem r = f.mul(ainv, static_cast<Elem>(n));
      ++ratio_count[r];
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
          if (i == j) continue;
          const double w = std::abs(val[i]) * std::abs(val[j]);
          const Elem s1 = f.mul(static_cast<Elem>(a % q), static_cast<Elem>(idx[i]));
          const Elem s2 = f.mul(static_cast<Elem>(a % q), static_cast<Elem>(idx[j]));
          nu[key(r, s1, s2)] += w;
          nu_sum += w;
        }
    }
  }
  const double a2 = alpha.l2() * alpha.l2();
  t.nu_sum = nu_sum.value();
  t.nu_bound_l1 = double(p.A) * double(p.N) * alpha.l1() * alpha.l1();
  t.nu_bound_l2 = double(p.A) * double(M) * double(p.N) * a2;
  const double slack = 1 + 1e-12;
  t.nu_first_ok = t.nu_sum <= t.nu_bound_l1 * slack && t.nu_bound_l1 <= t.nu_bound_l2 * slack;

  std::vector<std::pair<std::uint64_t, double>> entries(nu.begin(), nu.end());
  std::sort(entries.begin(), entries.end());
  CompensatedSum nu_sq;
  for (const auto& [k, w] : entries) nu_sq += w * w;
  t.nu_square_sum = nu_sq.value();
  for (const auto& [r, c] : ratio_count) t.nu_pair_count += c * c;
  t.nu_square_bound = a2 * a2 * double(t.nu_pair_count);
  t.nu_second_ok = t.nu_square_sum <= t.nu_square_bound * slack;
  t.nu_second_ratio = a2 > 0 ? t.nu_square_sum / (double(p.A) * double(p.N) * a2 * a2) : 0.0;

  // g(r, s1, s2) = sum_{b ~ B} K(s1 (r + b)) conj K(s2 (r + b))
  auto g = [&](Elem r, Elem s1, Elem s2) {
    Complex acc = 0;
    for (std::uint64_t b = p.B; b < 2 * p.B; ++b) {
      const Elem x = f.add(r, static_cast<Elem>(b % q));
      acc += table(f.mul(s1, x)) * std::conj(table(f.mul(s2, x)));
    }
    return acc;
  };
  CompensatedSum holder;
  for (const auto& [k, w] : entries) {
    const Elem s2 = static_cast<Elem>(k % q);
    const Elem s1 = static_cast<Elem>(k / q % q);
    const Elem r = static_cast<Elem>(k / q / q);
    holder += w * std::abs(g(r, s1, s2));
  }
  t.holder_lhs = holder.value();

  const int two_l = static_cast<int>(2 * p.l);
  auto parts = parallel_chunks<CompensatedSum>(q, p.threads, [&](std::size_t begin, std::size_t end) {
    CompensatedSum acc;
    for (std::size_t r = begin; r < end; ++r)
      for (Elem s1 = 1; s1 < q; ++s1)
        for (Elem s2 = 1; s2 < q; ++s2)
          if (s1 != s2) acc += std::pow(std::abs(g(static_cast<Elem>(r), s1, s2)), two_l);
    return acc;
  });
  CompensatedSum moment;
  for (const auto& part : parts) moment.merge(part);
  t.moment_2l = moment.value();
  const double L = double(p.l);
  t.holder_rhs = std::pow(t.nu_sum, 1 - 1 / L) * std::pow(t.nu_square_sum, 1 / (2 * L)) *
                 std::pow(t.moment_2l, 1 / (2 * L));
  t.holder_ok = t.holder_lhs <= t.holder_rhs * (1 + 1e-9) + 1e-9;

  // The box [B, 2B)^{2l}.
  const std::size_t dim = 2 * p.l;
  std::uint64_t box = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    box *= p.B;
    if (box > 1'000'000) throw ResourceError("shift_reduction_trace: B^{2l} exceeds 10^6");
  }
  if (double(box) * double(q) * double(q) > 1e11)
    throw ResourceError("shift_reduction_trace: B^{2l} q^2 exceeds 10^11");
  t.box_size = box;

  std::vector<ParamTuple> tuples;
  tuples.reserve(box);
  std::vector<Elem> cur(dim, static_cast<Elem>(p.B));
  for (std::uint64_t c = 0; c < box; ++c) {
    tuples.emplace_back(cur);
    for (std::size_t i = 0; i < dim; ++i) {
      if (++cur[i] < 2 * p.B) break;
      cur[i] = static_cast<Elem>(p.B);
    }
  }
  CompensatedSum box_signed, box_abs;
  std::vector<double> box_values;
  box_values.reserve(box);
  for (const auto& b : tuples) {
    const double s = sigma_II(table, b, {.with_direct = false, .threads = p.threads}).sigma_II;
    box_values.push_back(s);
    box_signed += s;
    box_abs += std::abs(s);
  }
  t.box_sigma_II = box_signed.value();
  t.box_abs_sigma_II = box_abs.value();
  t.expansion_diff = std::abs(t.box_sigma_II - t.moment_2l);

  const std::uint32_t k = static_cast<std::uint32_t>(table.k());
  try {
    std::vector<StratumReport> reports;
    reports.reserve(tuples.size());
    for (const auto& b : tuples) reports.push_back(stratum_report(f, k, b));
    const StratumScan scan = stratum_scan(f, k, p.l, Sampler{false, 200, 0});
    int generic = scan.generic;
    for (const auto& r : reports)
      if (!r.degenerate) generic = std::max(generic, r.z_count);
    t.generic = generic;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      const auto& r = reports[i];
      if (r.on_diagonal)
        ++t.box_diagonal;
      else if (r.degenerate || r.z_count < generic)
        ++t.box_subgeneric;
    }
    t.strata_available = true;
  } catch (const DomainError&) {
    t.strata_available = false;
  } catch (const ResourceError&) {
    t.strata_available = false;
  }
  if (!t.strata_available) {
    for (const auto& b : tuples) t.box_diagonal += is_diagonal(b);
  }
  const double qd = double(q);
  t.shape = qd * qd * qd * double(t.box_diagonal) + qd * qd * double(t.box_subgeneric) +
            std::pow(qd, 1.5) * double(box);
  t.shape_ratio = t.shape > 0 ? t.box_abs_sigma_II / t.shape : 0.0;
  return t;
}

// --------------------------------------------------------- moment identity

MomentCheck moment_identity_check(const MultChar& xi, Elem n) {
  const PrimeField& f = xi.field();
  if (!xi.is_even()) throw DomainError("moment_identity_check: xi must be even");
  if (n % f.q() == 0) throw DomainError("moment_identity_check: n must be nonzero mod q");
  const std::uint32_t order = f.order();

  CompensatedComplexSum sum;
  for (std::uint32_t a = 0; a < order; a += 2) {
    const MultChar chi(xi.field_ptr(), a);
    const Complex e = normalized_gauss_sum(chi);
    sum += e * e * normalized_gauss_sum(chi * xi) * std::conj(chi(n));
  }
  const KlTable kl3 = kl_table_fast(CharTuple(xi.field_ptr(), {0, 0, static_cast<std::int64_t>(xi.index())}));
  MomentCheck out;
  out.lhs = 2.0 * sum.value() / double(order);
  out.lhs_half = sum.value() / double(order);
  out.rhs = (kl3(n) + kl3(f.neg(n))) / std::sqrt(double(f.q()));
  out.diff = std::abs(out.lhs - out.rhs);
  return out;
}

// ---------------------------------------------------- averaged comparison

namespace {

struct PairSums {
  CompensatedSum lhs;
  CompensatedSum rhs;
};

AveragedComparison full_sample(const KlTable& table, std::size_t l, const FullSampleFamily& fam, unsigned threads) {
  const PrimeField& f = table.field();
  const double q = f.q();
  Rng rng(fam.seed);
  std::vector<ParamTuple> tuples;
  tuples.reserve(fam.samples);
  for (std::size_t i = 0; i < fam.samples; ++i) tuples.emplace_back(rng.tuple(2 * l, f.q()));

  auto parts = parallel_chunks<PairSums>(tuples.size(), threads, [&](std::size_t begin, std::size_t end) {
    PairSums acc;
    std::vector<Complex> v;
    for (std::size_t i = begin; i < end; ++i)
      for (Elem r = 1; r < f.q(); ++r) {
        bold_k_row(table, r, tuples[i], v);
        CompensatedComplexSum R;
        CompensatedSum diag;
        for (Elem s = 1; s < f.q(); ++s) {
          R += v[s];
          diag += std::norm(v[s]);
        }
        acc.lhs += std::norm(R.value());
        acc.rhs += diag.value();
      }
    return acc;
  });
  PairSums total;
  for (const auto& part : parts) {
    total.lhs.merge(part.lhs);
    total.rhs.merge(part.rhs);
  }

  AveragedComparison out;
  out.family_size = tuples.size();
  out.lhs = total.lhs.value();
  out.rhs = total.rhs.value();
  out.normalizer = double(tuples.size()) * std::pow(q, 1.5);
  out.gap = out.normalizer > 0 ? std::abs(out.lhs - out.rhs) / out.normalizer : 0.0;

  if (!tuples.empty()) {
    std::vector<Elem> paired(2 * l);
    for (std::size_t i = 0; i < l; ++i) paired[i] = paired[i + l] = tuples[0][i];
    const ParamTuple pb(paired);
    std::vector<Complex> v;
    for (Elem r = 1; r < f.q(); ++r) {
      bold_k_row(table, r, pb, v);
      Complex R = 0;
      double diag = 0;
      for (Elem s = 1; s < f.q(); ++s) {
        R += v[s];
        diag += std::norm(v[s]);
      }
      if (std::norm(R) < diag * (1 - 1e-12) - 1e-12) out.paired_sign_ok = false;
    }
  }
  return out;
}

AveragedComparison power_sum(const KlTable& table, const PowerSumFamily& fam, unsigned threads) {
  const PrimeField& f = table.field();
  if (fam.n == 0 || fam.n > 4 || fam.m > 1 || f.q() > 31)
    throw ResourceError("averaged_comparison: power-sum family limited to n <= 4, m <= 1, q <= 31");
  const Elem q = f.q();
  const std::size_t n = fam.n;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= (q - 1);

  struct Part {
    PairSums sums;
    std::size_t count = 0;
  };
  auto parts = parallel_chunks<Part>(total, threads, [&](std::size_t begin, std::size_t end) {
    Part acc;
    std::vector<Elem> b(n);
    for (std::size_t c = begin; c < end; ++c) {
      std::size_t m = c;
      Elem s1 = 0;
      for (std::size_t i = 0; i < n; ++i, m /= (q - 1)) {
        b[i] = static_cast<Elem>(1 + m % (q - 1));
        s1 = f.add(s1, b[i]);
      }
      if (fam.m >= 1 && s1 != 0) continue;
      ++acc.count;
      CompensatedComplexSum inner;
      CompensatedSum diag;
      for (Elem s = 1; s < q; ++s) {
        Complex w = 1;
        for (std::size_t i = 0; i < n; ++i) w *= table(f.mul(b[i], s));
        inner += w;
        diag += std::norm(w);
      }
      acc.sums.lhs += std::norm(inner.value());
      acc.sums.rhs += diag.value();
    }
    return acc;
  });
  AveragedComparison out;
  PairSums sums;
  for (const auto& part : parts) {
    sums.lhs.merge(part.sums.lhs);
    sums.rhs.merge(part.sums.rhs);
    out.family_size += part.count;
  }
  out.lhs = sums.lhs.value();
  out.rhs = sums.rhs.value();
  out.normalizer = std::pow(double(q), double(n) - double(fam.m) + 0.5);
  out.gap = std::abs(out.lhs - out.rhs) / out.normalizer;
  return out;
}

}  // namespace

AveragedComparison averaged_comparison(const KlTable& table, std::size_t l, const Family& family,
                                       unsigned threads) {
  if (std::holds_alternative<EmptyFamily>(family)) return {};
  if (const auto* fs = std::get_if<FullSampleFamily>(&family)) {
    if (l == 0) throw DomainError("averaged_comparison: l must be positive");
    return full_sample(table, l, *fs, threads);
  }
  return power_sum(table, std::get<PowerSumFamily>(family), threads);
}

}  // namespace klsum

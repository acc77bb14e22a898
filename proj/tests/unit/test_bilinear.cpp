#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "klsum/bilinear.hpp"
#include "klsum/error.hpp"
#include "klsum/random.hpp"

using namespace klsum;

namespace {

// Classical Kl_2 from its definition.
double classical(std::uint64_t q, std::uint64_t x) {
  x %= q;
  if (x == 0) return 0.0;
  double s = 0;
  for (std::uint64_t y = 1; y < q; ++y) {
    std::uint64_t yinv = 1;
    while (y * yinv % q != 1) ++yinv;
    s += std::cos(2 * std::numbers::pi * double((y + x * yinv) % q) / double(q));
  }
  return s / std::sqrt(double(q));
}

CoeffSeq random_coeffs(std::mt19937_64& rng, std::uint64_t count, std::uint64_t max_index) {
  std::vector<std::uint64_t> idx;
  std::vector<Complex> val;
  std::uniform_real_distribution<double> u(-1, 1);
  while (idx.size() < count) {
    const std::uint64_t m = 1 + rng() % max_index;
    if (std::find(idx.begin(), idx.end(), m) != idx.end()) continue;
    idx.push_back(m);
    val.emplace_back(u(rng), u(rng));
  }
  return CoeffSeq(idx, val);
}

}  // namespace

TEST_CASE("coefficient sequences") {
  const CoeffSeq c({2, 5, 7}, {Complex(3, 4), Complex(-1, 0), Complex(0, 2)});
  CHECK(c.l1() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(c.l2() == doctest::Approx(std::sqrt(30.0)).epsilon(1e-12));
  CHECK(c.max_index() == 7);
  CHECK_THROWS_AS(CoeffSeq({0}, {1.0}), DomainError);
  CHECK_THROWS_AS(CoeffSeq({1, 1}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(CoeffSeq({1}, {}), DomainError);
  const CoeffSeq ones = CoeffSeq::interval_ones(9);
  CHECK(ones.l1() == 9.0);
  CHECK(ones.l2() == doctest::Approx(3.0));
}

TEST_CASE("bilinear form") {
  auto F = build_field(101);
  const KlTable K = kl_table_fast(CharTuple::trivial(F, 2));
  const CoeffSeq one({1}, {1.0});
  CHECK(std::abs(bilinear_form(K, one, one) - K(1)) < 1e-15);

  const CoeffSeq a = CoeffSeq::interval_ones(10), b = CoeffSeq::interval_ones(10);
  double oracle = 0;
  for (std::uint64_t m = 1; m <= 10; ++m)
    for (std::uint64_t n = 1; n <= 10; ++n) oracle += classical(101, m * n);
  CHECK(std::abs(bilinear_form(K, a, b) - oracle) < 1e-9);

  std::mt19937_64 rng(3);
  const KlTable K3 = kl_table_fast(CharTuple(F, {1, 4, 9}));
  for (int i = 0; i < 20; ++i) {
    const CoeffSeq x = random_coeffs(rng, 1 + rng() % 20, 100), y = random_coeffs(rng, 1 + rng() % 20, 100);
    Complex brute = 0;
    for (std::size_t s = 0; s < x.size(); ++s)
      for (std::size_t t = 0; t < y.size(); ++t)
        brute += x.values()[s] * y.values()[t] * K3(static_cast<Elem>(x.support()[s] * y.support()[t] % 101));
    const Complex B = bilinear_form(K3, x, y);
    CHECK(std::abs(B - brute) < 1e-9);
    CHECK(std::abs(B) <= 3 * x.l1() * y.l1() + 1e-9);
  }
  CHECK_THROWS_AS(bilinear_form(K, CoeffSeq({101}, {1.0}), one), DomainError);
}

TEST_CASE("range conditions, pinned cases") {
  // Hand evaluation (q^{3/2l}, q^{1/2-3/4l}/2, ... given in the comments).
  // q=10007 l=9: q^{1/6}=4.64, q^{5/12}/2=23.2, q^{5/6}/(2*40)=26.9, q^{1/9}=2.78, q^{5/9}/2=83.4
  CHECK(type_ii_range_first(10007, 15, 9));
  CHECK(type_ii_range_second(10007, 15, 40, 9));
  CHECK(type_i_range_first(10007, 15, 9));
  // N = 4 < q^{1/6}
  CHECK_FALSE(type_ii_range_first(10007, 4, 9));
  CHECK_FALSE(type_ii_range_second(10007, 4, 40, 9));
  CHECK(type_i_range_first(10007, 4, 9));
  // q=10007 l=9 N=50: 50 > 23.2 but 50*3 < q^{5/6}/2 = 1077.8
  CHECK_FALSE(type_ii_range_first(10007, 50, 9));
  CHECK(type_ii_range_second(10007, 50, 3, 9));
  // q=101 l=2: q^{1/4-}... the upper end q^{1/8}/2 = 0.89 < 1, empty
  CHECK_FALSE(type_ii_range_first(101, 11, 2));
  CHECK(type_i_range_first(101, 11, 2));   // 10.05 <= 11 <= 15.9
  CHECK_FALSE(type_i_range_first(101, 16, 2));
  // l = 1, on the edge: (2 N M^+)^2 <= q^3 with 2*101*5 = 1010, 1010^2 = 1020100 <= 1030301
  CHECK(type_i_range_second(101, 101, 5, 1));
  CHECK_FALSE(type_i_range_second(101, 101, 6, 1));
  CHECK_FALSE(type_i_range_first(101, 101, 1));

  const BoundReport r = theorem_bounds({.q = 10007, .M = 40, .N = 15, .M_plus = 40, .l = 9, .alpha_l1 = 40,
                                        .alpha_l2 = std::sqrt(40.0), .beta_l2 = std::sqrt(15.0), .sup_K = 2},
                                       BilinearType::kTypeII);
  CHECK(r.range_first);
  CHECK(r.in_range);
  CHECK_FALSE(r.computed.has_value());
}

TEST_CASE("bound formulas") {
  const BoundReport unit = theorem_bounds(
      {.q = 101, .M = 1, .N = 1, .M_plus = 1, .l = 2, .alpha_l1 = 0.5, .alpha_l2 = 0.5, .beta_l2 = 3.0, .sup_K = 1.7},
      BilinearType::kTypeII);
  CHECK(unit.trivial == doctest::Approx(1.7 * 0.5 * 3.0));

  const double q = 1e6 + 3, l = 4;
  auto type_ii = [&](std::uint64_t M, std::uint64_t N) {
    return theorem_bounds({.q = 1000003, .M = M, .N = N, .M_plus = M, .l = 4, .alpha_l1 = double(M),
                           .alpha_l2 = std::sqrt(double(M)), .beta_l2 = std::sqrt(double(N)), .sup_K = 2},
                          BilinearType::kTypeII);
  };
  // Direct formula at one point.
  {
    const double M = 300, N = 500;
    const double expect = std::sqrt(M) * std::sqrt(N) * std::sqrt(M * N) *
                          std::sqrt(1 / M + std::pow(std::pow(q, 0.75 + 0.75 / l) / (M * N), 1 / l));
    CHECK(type_ii(300, 500).theorem == doctest::Approx(expect).epsilon(1e-12));
  }
  // Normalized by ||alpha|| ||beta|| (MN)^{1/2}, the bound decreases in MN past q^{3/4+3/4l}.
  const double threshold = std::pow(q, 0.75 + 0.75 / l);
  double prev = 1e300;
  for (std::uint64_t N : {400, 800, 1600}) {
    const std::uint64_t M = 2000;
    CHECK(double(M) * double(N) > threshold);
    const BoundReport r = type_ii(M, N);
    const double normalized = r.theorem / (std::sqrt(double(M)) * std::sqrt(double(N)) * std::sqrt(double(M * N)));
    CHECK(normalized < prev);
    prev = normalized;
  }

  // Type I formula.
  const BoundReport t1 = theorem_bounds({.q = 1000003, .M = 100, .N = 2000, .M_plus = 150, .l = 3, .alpha_l1 = 80,
                                         .alpha_l2 = 9, .beta_l2 = 0, .sup_K = 3, .computed = 1234.0},
                                        BilinearType::kTypeI);
  const double expect = std::pow(80.0, 2.0 / 3) * std::pow(9.0, 1.0 / 3) * std::pow(100.0, 1.0 / 6) * 2000 *
                        std::pow(std::pow(q, 4.0 / 3) / (100.0 * 2000 * 2000), 1.0 / 6);
  CHECK(t1.theorem == doctest::Approx(expect).epsilon(1e-12));
  CHECK(t1.trivial == doctest::Approx(3 * 9 * std::sqrt(2000.0) * std::sqrt(100.0 * 2000)));
  REQUIRE(t1.ratio_theorem.has_value());
  CHECK(*t1.ratio_theorem == doctest::Approx(1234.0 / expect));

  CHECK_THROWS_AS(theorem_bounds({.q = 101, .M = 0, .N = 1, .M_plus = 1}, BilinearType::kTypeI), DomainError);
}

TEST_CASE("shift reduction trace") {
  std::mt19937_64 rng(10);
  struct Cfg {
    std::uint64_t q;
    std::vector<std::int64_t> chars;
    ShiftParams p;
    std::uint64_t M;
  };
  const std::vector<Cfg> cfgs = {
      {199, {0, 0}, {.N = 20, .A = 2, .B = 3, .l = 2}, 8},
      {101, {1, 5, 7}, {.N = 12, .A = 1, .B = 2, .l = 2}, 5},
      {131, {0, 0}, {.N = 30, .A = 2, .B = 2, .l = 3}, 6},
      {97, {0, 48}, {.N = 10, .A = 3, .B = 3, .l = 1}, 9},
  };
  for (const auto& c : cfgs) {
    const KlTable K = kl_table_fast(CharTuple(build_field(c.q), c.chars));
    const CoeffSeq alpha = random_coeffs(rng, c.M, 20);
    const ShiftTrace t = shift_reduction_trace(K, alpha, c.p);
    CAPTURE(c.q);
    CHECK(t.shift_identity_diff <= 1e-9 * std::max(1.0, std::abs(t.s_neq)));
    CHECK(t.square_identity_diff <= 1e-9 * std::max(1.0, t.square_sum));
    CHECK(t.cauchy_ok);
    CHECK(t.nu_first_ok);
    CHECK(t.nu_second_ok);
    CHECK(t.nu_sum <= t.nu_bound_l1 * (1 + 1e-12));
    CHECK(t.holder_ok);
    CHECK(t.expansion_diff <= 1e-8 * std::max(1.0, t.moment_2l));
    CHECK(t.box_size == std::uint64_t(std::pow(double(c.p.B), 2.0 * double(c.p.l))));
    CHECK(t.box_abs_sigma_II >= std::abs(t.box_sigma_II) - 1e-6);
    CHECK(t.shape > 0);
  }
}

TEST_CASE("shift trace with A = B = 1") {
  auto F = build_field(199);
  const KlTable K = kl_table_fast(CharTuple::trivial(F, 2));
  const CoeffSeq alpha({1, 2, 3, 5}, {1.0, Complex(0, 1), -0.5, 2.0});
  const ShiftTrace t = shift_reduction_trace(K, alpha, {.N = 9, .A = 1, .B = 1, .l = 2});
  CHECK(std::abs(t.s_shift - t.s_neq) < 1e-12);
  // With A = 1 and 2N < q the ratios n / a are distinct, so the pair count is N.
  CHECK(t.nu_pair_count == 9);
  CHECK(t.strata_available);
  // The single box point b = (1, 1, 1, 1) is diagonal.
  CHECK(t.box_diagonal == 1);
}

TEST_CASE("shift trace preconditions") {
  auto F = build_field(101);
  const KlTable K = kl_table_fast(CharTuple::trivial(F, 2));
  const CoeffSeq alpha({1, 2}, {1.0, 1.0});
  CHECK_THROWS_AS(shift_reduction_trace(K, alpha, {.N = 5, .A = 2, .B = 3, .l = 2}), DomainError);
  CHECK_THROWS_AS(shift_reduction_trace(K, alpha, {.N = 101, .A = 1, .B = 1, .l = 2}), DomainError);
  // 2AN = 120 >= q but 2AM^+ = 12 < q: allowed.
  CHECK_NOTHROW(shift_reduction_trace(K, alpha, {.N = 20, .A = 3, .B = 2, .l = 1}));
  const CoeffSeq wide({1, 60}, {1.0, 1.0});
  CHECK_THROWS_AS(shift_reduction_trace(K, wide, {.N = 20, .A = 3, .B = 2, .l = 1}), DomainError);
}

TEST_CASE("moment identity") {
  double worst = 0;
  for (std::uint64_t q : {13, 17, 29, 37, 41}) {
    auto F = build_field(q);
    for (std::uint32_t a = 0; a < q - 1; a += 2) {
      const MultChar xi(F, a);
      for (Elem n : {1u, 2u, 3u}) {
        const MomentCheck m = moment_identity_check(xi, n);
        worst = std::max(worst, m.diff);
        // The 1/(q-1) prefactor gives exactly half of the identity.
        CHECK(std::abs(2.0 * m.lhs_half - m.rhs) < 1e-10);
        const MomentCheck neg = moment_identity_check(xi, F->neg(n));
        CHECK(std::abs(neg.lhs - m.lhs) < 1e-10);
        CHECK(std::abs(neg.rhs - m.rhs) < 1e-10);
      }
    }
  }
  CHECK(worst <= 1e-8);

  // Independent oracle at q = 13, xi trivial, n = 1: Kl_3 by triple loop.
  const std::uint64_t q = 13;
  double kl = 0;
  for (std::uint64_t y1 = 1; y1 < q; ++y1)
    for (std::uint64_t y2 = 1; y2 < q; ++y2)
      for (std::uint64_t sgn : {std::uint64_t{1}, q - 1}) {
        std::uint64_t y3 = 1;
        while (y1 * y2 % q * y3 % q != sgn) ++y3;
        kl += std::cos(2 * std::numbers::pi * double((y1 + y2 + y3) % q) / double(q));
      }
  const double rhs = kl / q / std::sqrt(double(q));
  CHECK(std::abs(moment_identity_check(MultChar::trivial(build_field(13)), 1).lhs - rhs) < 1e-10);

  CHECK_THROWS_AS(moment_identity_check(MultChar(build_field(13), 1), 1), DomainError);
  CHECK_THROWS_AS(moment_identity_check(MultChar::trivial(build_field(13)), 0), DomainError);
}

TEST_CASE("averaged comparison") {
  auto F = build_field(29);
  const KlTable K = kl_table_fast(CharTuple::trivial(F, 2));

  const AveragedComparison empty = averaged_comparison(K, 2, EmptyFamily{});
  CHECK(empty.lhs == 0.0);
  CHECK(empty.rhs == 0.0);
  CHECK(empty.gap == 0.0);

  SUBCASE("full sample matches Sigma_II") {
    const AveragedComparison r = averaged_comparison(K, 2, FullSampleFamily{.samples = 6, .seed = 3});
    CHECK(r.family_size == 6);
    CHECK(r.paired_sign_ok);
    CHECK(r.lhs >= 0);
    CHECK(r.rhs >= 0);
    // lhs - rhs is the sum of Sigma_II without its r = 0 slice.
    Rng rng(3);
    double expect = 0;
    std::vector<Complex> v;
    for (int i = 0; i < 6; ++i) {
      const ParamTuple b(rng.tuple(4, 29));
      bold_k_row(K, 0, b, v);
      Complex R0 = 0;
      double d0 = 0;
      for (Elem s = 1; s < 29; ++s) R0 += v[s], d0 += std::norm(v[s]);
      expect += sigma_II(K, b).sigma_II - (std::norm(R0) - d0);
    }
    CHECK(std::abs((r.lhs - r.rhs) - expect) < 1e-6);
    CHECK(r.gap == doctest::Approx(std::abs(r.lhs - r.rhs) / (6 * std::pow(29.0, 1.5))));
  }

  SUBCASE("power-sum family against nested loops") {
    const std::uint64_t q = 13;
    const KlTable K13 = kl_table_fast(CharTuple::trivial(build_field(q), 2));
    double lhs = 0, rhs = 0;
    std::size_t count = 0;
    for (std::uint64_t b1 = 1; b1 < q; ++b1)
      for (std::uint64_t b2 = 1; b2 < q; ++b2)
        for (std::uint64_t b3 = 1; b3 < q; ++b3) {
          if ((b1 + b2 + b3) % q) continue;
          ++count;
          double inner = 0;
          for (std::uint64_t s = 1; s < q; ++s) {
            const double w = classical(q, b1 * s) * classical(q, b2 * s) * classical(q, b3 * s);
            inner += w;
            rhs += w * w;
          }
          lhs += inner * inner;
        }
    const AveragedComparison r = averaged_comparison(K13, 0, PowerSumFamily{.n = 3, .m = 1});
    CHECK(r.family_size == count);
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(r.normalizer == doctest::Approx(std::pow(13.0, 2.5)));
  }

  SUBCASE("power-sum without constraints") {
    const AveragedComparison r = averaged_comparison(K, 0, PowerSumFamily{.n = 2, .m = 0});
    CHECK(r.family_size == 28 * 28);
  }

  SUBCASE("limits") {
    CHECK_THROWS_AS(averaged_comparison(K, 0, PowerSumFamily{.n = 5, .m = 1}), ResourceError);
    CHECK_THROWS_AS(averaged_comparison(K, 0, PowerSumFamily{.n = 4, .m = 2}), ResourceError);
    const KlTable K37 = kl_table_fast(CharTuple::trivial(build_field(37), 2));
    CHECK_THROWS_AS(averaged_comparison(K37, 0, PowerSumFamily{.n = 4, .m = 1}), ResourceError);
  }
}

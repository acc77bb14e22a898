#pragma once

// Bilinear forms B(K, alpha, beta) = sum_{m, n} alpha_m beta_n K(mn), the
// type I / type II bound formulas with their exact range conditions, an
// empirical trace of the +ab-shift reduction to complete sums, the finite
// Gauss-sum identity for Kl_3, and averaged comparisons of squared sums.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "klsum/complete_sums.hpp"
#include "klsum/kloosterman.hpp"

namespace klsum {

// Complex weights on a set of integer indices in [1, q-1].
class CoeffSeq {
 public:
  // Throws DomainError on size mismatch, index 0, or repeated indices.
  CoeffSeq(std::vector<std::uint64_t> support, std::vector<Complex> values);

  // Weight 1 on each of 1..n.
  static CoeffSeq interval_ones(std::uint64_t n);

  std::size_t size() const { return support_.size(); }
  const std::vector<std::uint64_t>& support() const { return support_; }
  const std::vector<Complex>& values() const { return values_; }
  double l1() const { return l1_; }
  double l2() const { return l2_; }
  // M^+ = max index, 0 when empty.
  std::uint64_t max_index() const { return max_index_; }

 private:
  std::vector<std::uint64_t> support_;
  std::vector<Complex> values_;
  double l1_ = 0.0;
  double l2_ = 0.0;
  std::uint64_t max_index_ = 0;
};

// Throws DomainError when a support index is >= q.
Complex bilinear_form(const KlTable& table, const CoeffSeq& alpha, const CoeffSeq& beta);

enum class BilinearType { kTypeI, kTypeII };

struct BoundInput {
  std::uint64_t q = 0;
  std::uint64_t M = 0;       // |support of alpha|
  std::uint64_t N = 0;       // n runs over an interval of length N
  std::uint64_t M_plus = 0;  // max index of alpha
  unsigned l = 2;
  double alpha_l1 = 0.0;
  double alpha_l2 = 0.0;
  double beta_l2 = 0.0;      // type I uses beta = 1 on the interval, so sqrt(N)
  double sup_K = 0.0;
  std::optional<double> computed;  // |B| if it was evaluated
};

struct BoundReport {
  BilinearType type = BilinearType::kTypeII;
  double trivial = 0.0;
  double theorem = 0.0;  // q^epsilon factor set to 1
  bool range_first = false;
  bool range_second = false;
  bool in_range = false;
  std::optional<double> computed;
  std::optional<double> ratio_trivial;
  std::optional<double> ratio_theorem;
};

// Throws DomainError unless q, M, N, M_plus and l are positive.
BoundReport theorem_bounds(const BoundInput& in, BilinearType type);

// Range conditions, evaluated in exact integer arithmetic.
//   type II: q^{3/(2l)} <= N < q^{1/2 - 3/(4l)} / 2, or q^{3/(2l)} <= N and N M^+ < q^{1 - 3/(2l)} / 2
//   type I:  q^{1/l} <= N <= q^{1/2 + 1/(2l)} / 2, or q^{1/l} <= N and N M^+ <= q^{1 + 1/(2l)} / 2
bool type_ii_range_first(std::uint64_t q, std::uint64_t N, unsigned l);
bool type_ii_range_second(std::uint64_t q, std::uint64_t N, std::uint64_t M_plus, unsigned l);
bool type_i_range_first(std::uint64_t q, std::uint64_t N, unsigned l);
bool type_i_range_second(std::uint64_t q, std::uint64_t N, std::uint64_t M_plus, unsigned l);

struct ShiftParams {
  std::uint64_t N = 0;  // n in [1, N]
  std::uint64_t A = 1;  // a in [A, 2A)
  std::uint64_t B = 1;  // b in [B, 2B)
  std::size_t l = 2;
  unsigned threads = 1;
};

// Diagnostic record of the reduction from S^{!=} to complete sums. Every
// inequality below is checked on the computed numbers; nothing is asserted
// about implied constants.
struct ShiftTrace {
  // S^{!=} = sum_{m1 != m2} alpha_{m1} conj(alpha_{m2}) sum_{n<=N} K(m1 n) conj K(m2 n)
  Complex s_neq;
  // (1/AB) sum_{a ~ A, b ~ B} of the same sum with n + ab in [1, N]
  Complex s_shift;
  double shift_identity_diff = 0.0;

  // sum_n |sum_m alpha_m K(mn)|^2 = diagonal + S^{!=}
  double square_sum = 0.0;
  double square_diagonal = 0.0;
  double square_identity_diff = 0.0;
  // |B(K, alpha, 1_N)| <= sqrt(N) sqrt(square_sum)
  double type_i_form = 0.0;
  bool cauchy_ok = false;

  bool cond_2AN = false;     // 2AN < q
  bool cond_2AMplus = false; // 2AM^+ < q

  double nu_sum = 0.0;
  double nu_bound_l1 = 0.0;  // A N ||alpha||_1^2
  double nu_bound_l2 = 0.0;  // A M N ||alpha||_2^2
  bool nu_first_ok = false;
  double nu_square_sum = 0.0;
  // #{(a, n, a', n') : a n' = a' n mod q}; sum nu^2 <= ||alpha||_2^4 times this.
  std::uint64_t nu_pair_count = 0;
  double nu_square_bound = 0.0;
  bool nu_second_ok = false;
  double nu_second_ratio = 0.0;  // sum nu^2 / (A N ||alpha||_2^4)

  // sum nu |sum_b K(s1(r+b)) conj K(s2(r+b))|
  double holder_lhs = 0.0;
  // (sum nu)^{1-1/l} (sum nu^2)^{1/2l} (moment_2l)^{1/2l}
  double holder_rhs = 0.0;
  bool holder_ok = false;

  // sum_{r in F_q, s1 != s2} |sum_{b ~ B} K(s1(r+b)) conj K(s2(r+b))|^{2l}
  double moment_2l = 0.0;
  // sum_{b in [B,2B)^{2l}} Sigma_II(K, b); equals moment_2l
  double box_sigma_II = 0.0;
  double expansion_diff = 0.0;
  double box_abs_sigma_II = 0.0;

  // Stratum counts over the box, when the fibre computation applies.
  bool strata_available = false;
  std::uint64_t box_size = 0;
  std::uint64_t box_diagonal = 0;
  std::uint64_t box_subgeneric = 0;  // off the diagonal, z_count below generic
  int generic = -1;
  double shape = 0.0;        // q^3 |B^V| + q^2 |B^W| + q^{3/2} B^{2l}
  double shape_ratio = 0.0;  // box_abs_sigma_II / shape
};

// Preconditions (DomainError): A, B, N >= 1, AB <= N, N < q, 2B <= q,
// alpha supported in [1, q-1], and 2AN < q or 2AM^+ < q.
ShiftTrace shift_reduction_trace(const KlTable& table, const CoeffSeq& alpha, const ShiftParams& params);

struct MomentCheck {
  // (2/(q-1)) sum_{chi even} eps_chi^2 eps_{chi xi} conj(chi(n)), trivial chi included
  Complex lhs;
  // q^{-1/2} (Kl_3(n; 1, 1, xi) + Kl_3(-n; 1, 1, xi))
  Complex rhs;
  double diff = 0.0;
  // The same character sum with prefactor 1/(q-1); equals rhs / 2.
  Complex lhs_half;
};

// Throws DomainError for odd xi or n = 0.
MomentCheck moment_identity_check(const MultChar& xi, Elem n);

// b uniform in F_q^{2l}, `samples` draws.
struct FullSampleFamily {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};
// b in (F_q^x)^n with sum b_i^j = 0 for 1 <= j <= m. Limits: n <= 4, m <= 1, q <= 31.
struct PowerSumFamily {
  std::size_t n = 4;
  std::size_t m = 1;
};
struct EmptyFamily {};
using Family = std::variant<FullSampleFamily, PowerSumFamily, EmptyFamily>;

struct AveragedComparison {
  std::size_t family_size = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double normalizer = 0.0;  // q^{d + 3/2} or q^{n - m + 1/2}
  double gap = 0.0;         // |lhs - rhs| / normalizer
  // Cauchy-Schwarz sign check on paired tuples (full-sample family only):
  // for b with b_{i+l} = b_i every inner term is >= its diagonal part.
  bool paired_sign_ok = true;
};

// Full-sample: lhs = sum_b sum_{r != 0} |R(r, b)|^2,
//              rhs = sum_b sum_{r != 0} sum_s |bK(s r, s b)|^2.
// Power-sum:   lhs = sum_b |sum_s prod_i K(b_i s)|^2,
//              rhs = sum_b sum_s prod_i |K(b_i s)|^2.
// Throws ResourceError outside the power-sum limits.
AveragedComparison averaged_comparison(const KlTable& table, std::size_t l, const Family& family,
                                       unsigned threads = 1);

}  // namespace klsum

#pragma once

// Geometry of the parameter space of shift tuples b in F_q^{2l}: the diagonal
// variety, the singular-support polynomial P_b(r), the fibre count |Z_b|, the
// strata X_j, and lattice-point counts in boxes.
//
// P_b is the product, over zeta in mu_k^{2l}, of the linear forms
// sum_{i<=l} zeta_i x_i - sum_{i>l} zeta_i x_i computed in
// F_q[r][x_1..x_{2l}] / (x_i^k - (r + b_i)). The product is invariant under
// every x_i -> zeta x_i, so it lands in F_q[r]. Its roots are the r over which
// some choice of k-th roots x_i of r + b_i satisfies sum x_i = sum x_{i+l}.

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "klsum/complete_sums.hpp"
#include "klsum/field.hpp"

namespace klsum {

// Dense univariate polynomial over F_p, lowest degree first, no trailing zeros.
class UniPoly {
 public:
  explicit UniPoly(std::uint32_t p, std::vector<std::uint32_t> coeffs = {});
  // c0 + c1 r
  static UniPoly linear(std::uint32_t p, std::uint32_t c0, std::uint32_t c1);

  std::uint32_t modulus() const { return p_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::uint32_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  std::uint32_t leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  std::uint32_t eval(std::uint32_t x) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(std::uint32_t c) const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.p_ == b.p_ && a.c_ == b.c_;
  }

 private:
  void trim();
  std::uint32_t p_;
  std::vector<std::uint32_t> c_;
};

struct DivMod {
  UniPoly quotient;
  UniPoly remainder;
};

// Throws DomainError when dividing by zero.
DivMod divmod(const UniPoly& a, const UniPoly& b);
// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(UniPoly a, UniPoly b);
// F / gcd(F, F'). Its degree counts the distinct roots of F over the algebraic
// closure provided p > deg F.
UniPoly squarefree_part(const UniPoly& f);

// Element of F_p[r][x_1..x_n] / (x_i^k - (r + b_i)), stored densely: one
// r-polynomial per exponent vector in {0..k-1}^n (mixed radix k, x_1 lowest).
class ReducedPoly {
 public:
  ReducedPoly(const PrimeField& field, std::uint32_t k, std::vector<Elem> shifts);

  static ReducedPoly one(const PrimeField& field, std::uint32_t k, std::vector<Elem> shifts);

  std::size_t variables() const { return shifts_.size(); }
  std::size_t monomials() const { return terms_.size(); }
  const UniPoly& term(std::size_t monomial) const { return terms_[monomial]; }
  std::vector<std::uint32_t> exponents(std::size_t monomial) const;

  // *this times sum_i coeffs[i] x_i, re-reduced through x_i^k = r + b_i.
  void multiply_linear(const std::vector<Elem>& coeffs);

  // True when every monomial other than x^0 has a zero coefficient.
  bool is_pure_r() const;

 private:
  const PrimeField* field_;
  std::uint32_t k_;
  std::vector<Elem> shifts_;
  std::vector<std::size_t> stride_;
  std::vector<UniPoly> terms_;
};

// V^Delta: every coordinate value occurs at least twice.
bool is_diagonal(const ParamTuple& b);

// Preconditions (DomainError): k >= 1, k | q-1, q > 2l + k^{2l-1}.
// Budget (ResourceError): k^{2l} <= 10^4.
// Throws ConsistencyError if any x-dependence survives the reduction.
UniPoly singular_polynomial(const PrimeField& field, std::uint32_t k, const ParamTuple& b);

// Degree bound 2l + k^{2l-1} of P_b(r) prod (r + b_i).
std::uint64_t fibre_degree_bound(std::uint32_t k, std::size_t l);

struct StratumReport {
  bool on_diagonal = false;
  int deg_P = -1;       // -1 when P_b = 0
  bool degenerate = false;
  int z_count = -1;     // distinct roots of P_b(r) prod (r + b_i); -1 if degenerate
  bool generic = false; // set by stratum_scan
};

// Throws DomainError("degenerate fibre") when P_b = 0.
StratumReport z_fiber_count(const PrimeField& field, std::uint32_t k, const ParamTuple& b);

// Same as z_fiber_count but reports P_b = 0 through the degenerate flag.
StratumReport stratum_report(const PrimeField& field, std::uint32_t k, const ParamTuple& b);

struct Sampler {
  bool exhaustive = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct StratumScan {
  std::vector<ParamTuple> tuples;
  std::vector<StratumReport> reports;
  std::map<int, std::size_t> histogram;  // z_count -> multiplicity
  std::size_t degenerate = 0;
  int generic = -1;  // largest z_count observed
  double generic_fraction() const;
};

// Exhaustive mode needs q^{2l} <= 10^7 (ResourceError otherwise).
StratumScan stratum_scan(const PrimeField& field, std::uint32_t k, std::size_t l,
                         const Sampler& sampler, unsigned threads = 1);

// A polynomial in 2l variables over F_q, as a list of terms.
struct Monomial {
  Elem coeff = 0;
  std::vector<std::uint32_t> exponents;
};
using MultiPoly = std::vector<Monomial>;

struct DiagonalPredicate {};
struct PolynomialSystem {
  std::vector<MultiPoly> equations;
};
using BoxPredicate = std::variant<DiagonalPredicate, PolynomialSystem>;

struct Box {
  std::uint64_t B = 0;
  std::size_t l = 1;
  // [B, 2B) instead of [B, 2B].
  bool half_open = false;
};

// Lattice points x in the box (coordinates are integers reduced mod q) lying
// on the variety. Preconditions: 0 <= B < q/2. The diagonal predicate is
// counted by set partitions; polynomial systems are enumerated, with a budget
// of 10^8 points (ResourceError).
std::uint64_t box_count_variety(const PrimeField& field, const BoxPredicate& predicate,
                                const Box& box);

}  // namespace klsum

#pragma once

// Complete sum-product sums attached to a Kloosterman table K and a 2l-tuple
// b of shifts:
//
//   bK(r, b)   = prod_{i<=l} K(r + b_i) conj(K(r + b_{i+l}))
//   R(r, b)    = sum_{s != 0} bK(s r, s b)
//   Sigma_I    = sum_{r} R(r, b)
//   Sigma_II   = sum_{r} sum_{s1 != s2} bK(s1 r, s1 b) conj(bK(s2 r, s2 b))
//              = sum_r |R(r, b)|^2 - sum_r sum_s |bK(s r, s b)|^2
//
// K(0) = 0 throughout, so any factor whose argument vanishes kills the term.

#include <optional>
#include <vector>

#include "klsum/kloosterman.hpp"

namespace klsum {

class ParamTuple {
 public:
  // Throws DomainError unless b has even length >= 2.
  ParamTuple(const PrimeField& field, const std::vector<std::int64_t>& b);
  explicit ParamTuple(std::vector<Elem> b);

  std::size_t l() const { return b_.size() / 2; }
  std::size_t size() const { return b_.size(); }
  Elem operator[](std::size_t i) const { return b_[i]; }
  const std::vector<Elem>& values() const { return b_; }

  // b + (c, ..., c).
  ParamTuple translated(const PrimeField& field, Elem c) const;

 private:
  std::vector<Elem> b_;
};

struct KR {
  Complex K;
  Complex R;
};

Complex bold_k(const KlTable& table, Elem r, const ParamTuple& b);
KR eval_KR(const KlTable& table, Elem r, const ParamTuple& b);

// v[s] = bK(s r, s b) for s in F_q^x, v[0] = 0; v is resized to q.
void bold_k_row(const KlTable& table, Elem r, const ParamTuple& b, std::vector<Complex>& v);

struct SumOptions {
  // Also evaluate Sigma_II by the literal O(q^3) double sum over s1 != s2 and
  // check it against the difference form.
  bool with_direct = false;
  unsigned threads = 1;
};

struct SumReport {
  Complex sigma_I;
  double sigma_II = 0.0;       // difference form
  double sum_R2 = 0.0;         // sum_r |R(r, b)|^2
  double sum_K2 = 0.0;         // sum_r sum_s |bK(s r, s b)|^2
  std::optional<Complex> sigma_II_direct;
  double ratio_I = 0.0;        // |Sigma_I| / q
  double ratio_II = 0.0;       // |Sigma_II| / q^{3/2}
};

Complex sigma_I(const KlTable& table, const ParamTuple& b, unsigned threads = 1);

// Throws NumericalError when the direct and difference forms disagree by more
// than 1e-6 * max(q^{3/2}, |Sigma_II|).
SumReport sigma_II(const KlTable& table, const ParamTuple& b, const SumOptions& options = {});

// Literal double sum over s1 != s2; O(q^3 l).
Complex sigma_II_direct(const KlTable& table, const ParamTuple& b);

// Tolerance used when comparing the two Sigma_II routes.
double sigma_II_tolerance(std::uint32_t q, double magnitude);

}  // namespace klsum

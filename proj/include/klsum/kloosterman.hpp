#pragma once

// Generalized hyper-Kloosterman sums
//
//   Kl_k(x; chi, q) = q^{-(k-1)/2} sum_{y_1 ... y_k = x} chi_1(y_1) ... chi_k(y_k) e((y_1 + ... + y_k)/q)
//
// for x in F_q^x. This is the unsigned normalization; the trace function of
// the Kloosterman sheaf differs from it by trace_function_sign(k) = (-1)^{k-1},
// which is never applied here.

#include <cstdint>
#include <span>
#include <vector>

#include "klsum/char_props.hpp"
#include "klsum/field.hpp"

namespace klsum {

constexpr int trace_function_sign(std::size_t k) { return (k % 2 == 1) ? 1 : -1; }

// x -> Kl_k(a x; chi, q) on F_q^x. The value at 0 is stored as 0 (vanishing
// stalk), so lookups K(s (r + b)) need no special case.
class KlTable {
 public:
  // values has q entries; values[0] must be 0.
  KlTable(CharTuple tuple, Elem scale, std::vector<Complex> values);

  const CharTuple& tuple() const { return tuple_; }
  const PrimeField& field() const { return tuple_.field(); }
  std::size_t k() const { return tuple_.size(); }
  Elem scale() const { return scale_; }

  Complex operator()(Elem x) const { return values_[x]; }
  // Entries for x = 1 .. q-1.
  std::span<const Complex> values() const { return {values_.data() + 1, values_.size() - 1}; }
  // Entries for x = 0 .. q-1, with entry 0 equal to 0.
  std::span<const Complex> padded() const { return values_; }

  double max_abs() const;

 private:
  CharTuple tuple_;
  Elem scale_;
  std::vector<Complex> values_;
};

// Definitional sum at one point, O(q^{k-1}). Throws DomainError for x = 0.
Complex kl_naive(const CharTuple& t, Elem x);

// Whole table by k-1 direct multiplicative convolutions over F_q^x, O(k q^2).
KlTable kl_table_naive(const CharTuple& t, Elem scale = 1);

// Whole table by cyclic convolution of length q-1 in discrete-log
// coordinates, O(k q log q). Throws DomainError for scale = 0.
KlTable kl_table_fast(const CharTuple& t, Elem scale = 1);

struct FourierCheck {
  Complex lhs;   // sum_x Kl_k(x) lambda(x)
  Complex rhs;   // q^{-(k-1)/2} prod_i tau(chi_i lambda)
  double diff;   // |lhs - rhs|
};

// Requires a table built with scale 1.
FourierCheck fourier_identity_check(const KlTable& table, const MultChar& lambda);

}  // namespace klsum

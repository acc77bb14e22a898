#pragma once

// Prime-field arithmetic, discrete logarithms, additive and multiplicative
// characters of F_q, and Gauss sums.
//
// The additive character is fixed once and for all as psi(x) = exp(2 pi i x / q);
// psi_a(x) = psi(a x) covers the other nontrivial ones. Multiplicative characters
// are indexed by a in Z/(q-1) through chi(g^m) = exp(2 pi i a m / (q-1)), where g
// is the smallest primitive root, so tables are reproducible everywhere.
// chi(0) = 0 for every chi, including the trivial one: all sums in this library
// range over F_q^x.

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace klsum {

using Complex = std::complex<double>;
using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);

// Distinct prime divisors in increasing order.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

class PrimeField {
 public:
  static constexpr std::uint64_t kMinModulus = 3;
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

  // Throws DomainError when q is not an odd prime, ResourceError when q is
  // outside the table budget.
  explicit PrimeField(std::uint64_t q);

  std::uint32_t q() const { return q_; }
  std::uint32_t order() const { return q_ - 1; }
  Elem generator() const { return g_; }

  Elem reduce(std::int64_t x) const {
    const std::int64_t r = x % static_cast<std::int64_t>(q_);
    return static_cast<Elem>(r < 0 ? r + q_ : r);
  }
  Elem add(Elem a, Elem b) const {
    const std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>((std::uint64_t{a} * b) % q_);
  }
  Elem pow(Elem a, std::uint64_t e) const;
  // Throws DomainError for a = 0.
  Elem inv(Elem a) const;

  // m with g^m = x, 0 <= m < q-1. Throws DomainError for x = 0.
  std::uint32_t dlog(Elem x) const;
  // g^m for any m >= 0.
  Elem exp(std::uint64_t m) const { return exp_[m % order()]; }

  // exp(2 pi i j / q).
  Complex root_q(std::uint64_t j) const { return psi_[j % q_]; }
  // exp(2 pi i j / (q-1)).
  Complex root_order(std::uint64_t j) const { return unit_[j % order()]; }

  // psi_a(x) = exp(2 pi i a x / q).
  Complex additive(Elem a, Elem x) const { return psi_[mul(a, x)]; }

  // Elements of order dividing k in F_q^x, in the order g^{j (q-1)/k}. Requires
  // k | q-1.
  std::vector<Elem> roots_of_unity(std::uint32_t k) const;

 private:
  std::uint32_t q_;
  Elem g_;
  std::vector<std::uint32_t> dlog_;  // dlog_[0] unused
  std::vector<Elem> exp_;
  std::vector<Complex> psi_;
  std::vector<Complex> unit_;
};

using FieldPtr = std::shared_ptr<const PrimeField>;

FieldPtr build_field(std::uint64_t q);

// Smallest primitive root of the prime q.
Elem smallest_primitive_root(std::uint64_t q);

class MultChar {
 public:
  MultChar(FieldPtr field, std::int64_t index);

  static MultChar trivial(FieldPtr field) { return MultChar(std::move(field), 0); }
  // The real character chi_(2) of index (q-1)/2.
  static MultChar quadratic(FieldPtr field);

  std::uint32_t index() const { return index_; }
  const PrimeField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  bool is_trivial() const { return index_ == 0; }
  // chi(-1) = 1.
  bool is_even() const;
  // (q-1) / gcd(a, q-1).
  std::uint32_t order() const;

  // chi(x), with chi(0) = 0.
  Complex operator()(Elem x) const;

  MultChar operator*(const MultChar& other) const;
  MultChar inverse() const;
  MultChar pow(std::int64_t e) const;

  friend bool operator==(const MultChar& a, const MultChar& b) {
    return a.index_ == b.index_ && a.field_->q() == b.field_->q();
  }
  friend bool operator<(const MultChar& a, const MultChar& b) {
    return a.index_ < b.index_;
  }

 private:
  FieldPtr field_;
  std::uint32_t index_;
};

// tau(chi) = sum_{y in F_q^x} chi(y) psi(y), by direct summation.
Complex gauss_sum(const MultChar& chi);

// epsilon_chi = tau(chi) / sqrt(q). For trivial chi this is -1/sqrt(q).
Complex normalized_gauss_sum(const MultChar& chi);

}  // namespace klsum

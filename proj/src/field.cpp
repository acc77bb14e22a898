#include "klsum/field.hpp"

#include <cmath>
#include <new>
#include <numbers>
#include <numeric>
#include <string>

#include "klsum/error.hpp"
#include "klsum/summation.hpp"

namespace klsum {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

Elem smallest_primitive_root(std::uint64_t q) {
  const std::uint64_t n = q - 1;
  const auto divisors = prime_divisors(n);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool generates = true;
    for (auto p : divisors) {
      if (powmod(g, n / p, q) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return static_cast<Elem>(g);
  }
  // q = 3 lands here only through g = 2, which the loop already returns.
  throw ConsistencyError("no primitive root found for q=" + std::to_string(q));
}

PrimeField::PrimeField(std::uint64_t q) {
  if (q >= kMaxModulus) {
    throw ResourceError("modulus q=" + std::to_string(q) +
                        " exceeds the table budget (q < 2^31)");
  }
  if (q < kMinModulus || !is_prime(q)) {
    throw DomainError("modulus q=" + std::to_string(q) + " is not an odd prime");
  }
  q_ = static_cast<std::uint32_t>(q);
  g_ = smallest_primitive_root(q);

  try {
    dlog_.assign(q_, 0);
    exp_.assign(order(), 0);
    psi_.resize(q_);
    unit_.resize(order());
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate tables for q=" + std::to_string(q));
  }

  std::uint64_t x = 1;
  for (std::uint32_t m = 0; m < order(); ++m) {
    exp_[m] = static_cast<Elem>(x);
    dlog_[x] = m;
    x = x * g_ % q_;
  }
  if (x != 1) throw ConsistencyError("generator order mismatch");

  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (std::uint32_t j = 0; j < q_; ++j) {
    psi_[j] = std::polar(1.0, kTwoPi * j / q_);
  }
  for (std::uint32_t j = 0; j < order(); ++j) {
    unit_[j] = std::polar(1.0, kTwoPi * j / order());
  }
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const {
  return static_cast<Elem>(powmod(a, e, q_));
}

Elem PrimeField::inv(Elem a) const {
  if (a % q_ == 0) throw DomainError("0 has no inverse in F_q");
  return exp_[(order() - dlog_[a % q_]) % order()];
}

std::uint32_t PrimeField::dlog(Elem x) const {
  if (x % q_ == 0) throw DomainError("discrete log of 0");
  return dlog_[x % q_];
}

std::vector<Elem> PrimeField::roots_of_unity(std::uint32_t k) const {
  if (k == 0 || order() % k != 0) {
    throw DomainError("mu_" + std::to_string(k) + " is not contained in F_" +
                      std::to_string(q_));
  }
  std::vector<Elem> out(k);
  const std::uint32_t step = order() / k;
  for (std::uint32_t j = 0; j < k; ++j) out[j] = exp_[j * step];
  return out;
}

FieldPtr build_field(std::uint64_t q) { return std::make_shared<const PrimeField>(q); }

MultChar::MultChar(FieldPtr field, std::int64_t index) : field_(std::move(field)) {
  const std::int64_t n = field_->order();
  std::int64_t r = index % n;
  if (r < 0) r += n;
  index_ = static_cast<std::uint32_t>(r);
}

MultChar MultChar::quadratic(FieldPtr field) {
  const auto half = field->order() / 2;
  return MultChar(std::move(field), half);
}

bool MultChar::is_even() const {
  // chi(-1) = exp(2 pi i a (q-1)/2 / (q-1)) = (-1)^a.
  return index_ % 2 == 0;
}

std::uint32_t MultChar::order() const {
  const std::uint32_t n = field_->order();
  return n / std::gcd(index_, n);
}

Complex MultChar::operator()(Elem x) const {
  if (x % field_->q() == 0) return {0.0, 0.0};
  const std::uint64_t m = field_->dlog(x);
  return field_->root_order(m * index_);
}

MultChar MultChar::operator*(const MultChar& other) const {
  return MultChar(field_, std::int64_t{index_} + other.index_);
}

MultChar MultChar::inverse() const { return MultChar(field_, -std::int64_t{index_}); }

MultChar MultChar::pow(std::int64_t e) const {
  const std::int64_t n = field_->order();
  std::int64_t er = e % n;
  if (er < 0) er += n;
  return MultChar(field_, static_cast<std::int64_t>((std::uint64_t{index_} * er) % n));
}

Complex gauss_sum(const MultChar& chi) {
  const auto& f = chi.field();
  CompensatedComplexSum acc;
  for (Elem y = 1; y < f.q(); ++y) acc += chi(y) * f.root_q(y);
  return acc.value();
}

Complex normalized_gauss_sum(const MultChar& chi) {
  return gauss_sum(chi) / std::sqrt(static_cast<double>(chi.field().q()));
}

}  // namespace klsum

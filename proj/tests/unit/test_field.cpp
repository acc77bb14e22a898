#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "klsum/error.hpp"
#include "klsum/field.hpp"

using namespace klsum;

namespace {

const std::uint64_t kPrimes[] = {3, 5, 7, 11, 13, 17, 31, 97, 101, 499};

// Order of g in (Z/q)^x by repeated multiplication.
std::uint64_t naive_order(std::uint64_t g, std::uint64_t q) {
  std::uint64_t x = g % q, n = 1;
  while (x != 1) {
    x = x * g % q;
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("primality and primitive roots") {
  CHECK(is_prime(2));
  CHECK(is_prime(997));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
  CHECK(prime_divisors(360) == std::vector<std::uint64_t>{2, 3, 5});

  CHECK(build_field(5)->generator() == 2);
  CHECK(build_field(7)->generator() == 3);
  for (std::uint64_t q : kPrimes) {
    const Elem g = smallest_primitive_root(q);
    CHECK(naive_order(g, q) == q - 1);
    for (Elem h = 2; h < g; ++h) CHECK(naive_order(h, q) < q - 1);
  }
}

TEST_CASE("field construction errors") {
  CHECK_THROWS_AS(build_field(4), DomainError);
  CHECK_THROWS_AS(build_field(2), DomainError);
  CHECK_THROWS_AS(build_field(1), DomainError);
  CHECK_THROWS_AS(build_field(std::uint64_t{1} << 31), ResourceError);
}

TEST_CASE("dlog table for q = 5") {
  auto F = build_field(5);
  CHECK(F->dlog(1) == 0);
  CHECK(F->dlog(2) == 1);
  CHECK(F->dlog(4) == 2);
  CHECK(F->dlog(3) == 3);
  CHECK_THROWS_AS(F->dlog(0), DomainError);
}

TEST_CASE("dlog round trip and arithmetic") {
  for (std::uint64_t q : kPrimes) {
    auto F = build_field(q);
    for (Elem x = 1; x < q; ++x) {
      CHECK(F->exp(F->dlog(x)) == x);
      CHECK(F->mul(x, F->inv(x)) == 1);
    }
    CHECK(F->reduce(-1) == q - 1);
    CHECK(F->neg(0) == 0);
    CHECK_THROWS_AS(F->inv(0), DomainError);
  }
}

TEST_CASE("character values") {
  auto F = build_field(5);
  const MultChar triv = MultChar::trivial(F);
  const MultChar quad = MultChar::quadratic(F);
  for (Elem x = 1; x < 5; ++x) CHECK(std::abs(triv(x) - 1.0) < 1e-15);
  CHECK(std::abs(triv(0)) == 0.0);
  CHECK(std::abs(quad(2) + 1.0) < 1e-12);
  CHECK(std::abs(F->additive(1, 0) - 1.0) < 1e-15);
  CHECK(quad.order() == 2);
  CHECK(quad.is_even());  // 5 = 1 mod 4
  CHECK_FALSE(MultChar::quadratic(build_field(7)).is_even());

  // Legendre symbol oracle: x is a square iff some y has y^2 = x.
  for (std::uint64_t q : {7, 11, 13, 31}) {
    auto G = build_field(q);
    const MultChar leg = MultChar::quadratic(G);
    for (Elem x = 1; x < q; ++x) {
      bool square = false;
      for (Elem y = 1; y < q; ++y) square |= G->mul(y, y) == x;
      CHECK(std::abs(leg(x) - (square ? 1.0 : -1.0)) < 1e-12);
    }
  }
}

TEST_CASE("multiplicativity and orthogonality") {
  std::mt19937_64 rng(7);
  for (std::uint64_t q : kPrimes) {
    auto F = build_field(q);
    for (std::uint32_t a = 0; a < q - 1; a += std::max<std::uint32_t>(1, (q - 1) / 7)) {
      const MultChar chi(F, a);
      for (int i = 0; i < 100; ++i) {
        const Elem x = 1 + rng() % (q - 1), y = 1 + rng() % (q - 1);
        CHECK(std::abs(chi(F->mul(x, y)) - chi(x) * chi(y)) < 1e-12);
      }
      Complex s = 0;
      for (Elem x = 1; x < q; ++x) s += chi(x);
      if (a == 0)
        CHECK(std::abs(s - double(q - 1)) < 1e-9);
      else
        CHECK(std::abs(s) < 1e-9);
      CHECK(chi.order() == (q - 1) / std::gcd<std::uint64_t>(a, q - 1));
      CHECK(chi.is_even() == (std::abs(chi(q - 1) - 1.0) < 1e-9));
    }
  }
}

TEST_CASE("character group operations") {
  auto F = build_field(13);
  const MultChar a(F, 5), b(F, 9);
  CHECK((a * b).index() == 2);
  CHECK(a.inverse().index() == 7);
  CHECK(a.pow(3).index() == 3);
  CHECK(a.pow(-1) == a.inverse());
  CHECK(MultChar(F, -1).index() == 11);
}

TEST_CASE("gauss sums") {
  auto F5 = build_field(5);
  CHECK(std::abs(gauss_sum(MultChar::trivial(F5)) + 1.0) < 1e-12);
  const Complex tau = gauss_sum(MultChar::quadratic(F5));
  CHECK(std::abs(tau - std::sqrt(5.0)) < 1e-10);
  CHECK(std::abs(normalized_gauss_sum(MultChar::trivial(F5)) + 1.0 / std::sqrt(5.0)) < 1e-12);

  for (std::uint64_t q : {13, 97, 499}) {
    auto F = build_field(q);
    for (std::uint32_t a = 1; a < q - 1; ++a)
      CHECK(std::abs(std::abs(gauss_sum(MultChar(F, a))) - std::sqrt(double(q))) < 1e-9);
  }

  // tau(chi) tau(conj chi) = chi(-1) q.
  auto F = build_field(31);
  for (std::uint32_t a = 1; a < 30; ++a) {
    const MultChar chi(F, a);
    CHECK(std::abs(gauss_sum(chi) * gauss_sum(chi.inverse()) - chi(30) * 31.0) < 1e-9);
  }
}

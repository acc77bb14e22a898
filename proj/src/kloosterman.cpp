#include "klsum/kloosterman.hpp"

#include <cmath>
#include <string>

#include "klsum/convolution.hpp"
#include "klsum/error.hpp"
#include "klsum/summation.hpp"

namespace klsum {

KlTable::KlTable(CharTuple tuple, Elem scale, std::vector<Complex> values)
    : tuple_(std::move(tuple)), scale_(scale), values_(std::move(values)) {
  if (values_.size() != tuple_.field().q()) {
    throw ConsistencyError("Kloosterman table must have q entries");
  }
  if (values_[0] != Complex{}) throw ConsistencyError("Kloosterman table entry at 0 must be 0");
}

double KlTable::max_abs() const {
  double m = 0.0;
  for (auto v : values()) m = std::max(m, std::abs(v));
  return m;
}

namespace {

double normalization(const PrimeField& f, std::size_t k) {
  return std::pow(static_cast<double>(f.q()), -0.5 * static_cast<double>(k - 1));
}

// f_i(y) = chi_i(y) e(y/q)
Complex twisted_phase(const MultChar& chi, Elem y) { return chi(y) * chi.field().root_q(y); }

void accumulate_naive(const CharTuple& t, std::size_t depth, Elem prod, Elem sum, Complex weight,
                      Elem x, CompensatedComplexSum& acc) {
  const auto& f = t.field();
  const std::size_t k = t.size();
  if (depth + 1 == k) {
    const Elem y = f.mul(x, f.inv(prod));
    acc += weight * t[depth](y) * f.root_q(f.add(sum, y));
    return;
  }
  for (Elem y = 1; y < f.q(); ++y) {
    accumulate_naive(t, depth + 1, f.mul(prod, y), f.add(sum, y), weight * t[depth](y), x, acc);
  }
}

std::vector<Complex> rescale(const PrimeField& f, const std::vector<Complex>& base, Elem scale) {
  std::vector<Complex> out(f.q());
  for (Elem x = 1; x < f.q(); ++x) out[x] = base[f.mul(scale, x)];
  return out;
}

Elem checked_scale(const PrimeField& f, Elem scale) {
  const Elem a = scale % f.q();
  if (a == 0) throw DomainError("Kloosterman table scale must be nonzero mod q");
  return a;
}

}  // namespace

Complex kl_naive(const CharTuple& t, Elem x) {
  const auto& f = t.field();
  x %= f.q();
  if (x == 0) throw DomainError("Kl_k(x) is defined for x in F_q^x only");
  CompensatedComplexSum acc;
  accumulate_naive(t, 0, 1, 0, Complex{1.0, 0.0}, x, acc);
  return acc.value() * normalization(f, t.size());
}

KlTable kl_table_naive(const CharTuple& t, Elem scale) {
  const auto& f = t.field();
  const Elem a = checked_scale(f, scale);
  std::vector<Complex> cur(f.q());
  for (Elem y = 1; y < f.q(); ++y) cur[y] = twisted_phase(t[0], y);
  for (std::size_t i = 1; i < t.size(); ++i) {
    std::vector<Complex> fi(f.q());
    for (Elem y = 1; y < f.q(); ++y) fi[y] = twisted_phase(t[i], y);
    std::vector<Complex> next(f.q());
    for (Elem x = 1; x < f.q(); ++x) {
      CompensatedComplexSum acc;
      for (Elem y = 1; y < f.q(); ++y) acc += cur[y] * fi[f.mul(x, f.inv(y))];
      next[x] = acc.value();
    }
    cur = std::move(next);
  }
  const double norm = normalization(f, t.size());
  for (auto& v : cur) v *= norm;
  return KlTable(t, a, rescale(f, cur, a));
}

KlTable kl_table_fast(const CharTuple& t, Elem scale) {
  const auto& f = t.field();
  const Elem a = checked_scale(f, scale);
  const std::uint32_t n = f.order();
  auto in_dlog = [&](const MultChar& chi) {
    std::vector<Complex> v(n);
    for (std::uint32_t m = 0; m < n; ++m) {
      const Elem y = f.exp(m);
      v[m] = f.root_order(std::uint64_t{m} * chi.index()) * f.root_q(y);
    }
    return v;
  };
  std::vector<Complex> acc = in_dlog(t[0]);
  for (std::size_t i = 1; i < t.size(); ++i) acc = cyclic_convolution(acc, in_dlog(t[i]));

  const double norm = normalization(f, t.size());
  std::vector<Complex> base(f.q());
  for (std::uint32_t m = 0; m < n; ++m) base[f.exp(m)] = acc[m] * norm;
  return KlTable(t, a, rescale(f, base, a));
}

FourierCheck fourier_identity_check(const KlTable& table, const MultChar& lambda) {
  if (table.scale() != 1) throw DomainError("Fourier identity check needs a table with scale 1");
  const auto& f = table.field();
  CompensatedComplexSum lhs;
  for (Elem x = 1; x < f.q(); ++x) lhs += table(x) * lambda(x);
  Complex rhs = normalization(f, table.k());
  for (const auto& chi : table.tuple().chars()) rhs *= gauss_sum(chi * lambda);
  const Complex l = lhs.value();
  return {l, rhs, std::abs(l - rhs)};
}

}  // namespace klsum

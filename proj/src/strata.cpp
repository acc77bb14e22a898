#include "klsum/strata.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "klsum/error.hpp"
#include "klsum/parallel.hpp"
#include "klsum/random.hpp"

namespace klsum {

namespace {

std::uint32_t mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
}

std::uint32_t addmod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  const std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<std::uint32_t>(s >= p ? s - p : s);
}

std::uint32_t submod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : static_cast<std::uint32_t>(std::uint64_t{a} + p - b);
}

std::uint32_t powmod(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p, x = a % p;
  while (e) {
    if (e & 1) r = r * x % p;
    x = x * x % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t invmod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw DomainError("polynomial arithmetic: inverse of zero");
  return powmod(a, p - 2, p);
}

std::uint64_t checked_power(std::uint64_t base, std::size_t e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::uint32_t p, std::vector<std::uint32_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= p_;
  trim();
}

UniPoly UniPoly::linear(std::uint32_t p, std::uint32_t c0, std::uint32_t c1) {
  return UniPoly(p, {c0, c1});
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint32_t UniPoly::eval(std::uint32_t x) const {
  std::uint32_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = addmod(mulmod(acc, x, p_), *it, p_);
  return acc;
}

UniPoly UniPoly::derivative() const {
  std::vector<std::uint32_t> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(mulmod(c_[i], static_cast<std::uint32_t>(i % p_), p_));
  return UniPoly(p_, std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(invmod(leading(), p_));
}

UniPoly UniPoly::scaled(std::uint32_t c) const {
  std::vector<std::uint32_t> out(c_);
  for (auto& v : out) v = mulmod(v, c % p_, p_);
  return UniPoly(p_, std::move(out));
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<std::uint32_t> out(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = addmod(coeff(i), o.coeff(i), p_);
  return UniPoly(p_, std::move(out));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  std::vector<std::uint32_t> out(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = submod(coeff(i), o.coeff(i), p_);
  return UniPoly(p_, std::move(out));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return UniPoly(p_);
  std::vector<std::uint32_t> out(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      out[i + j] = addmod(out[i + j], mulmod(c_[i], o.c_[j], p_), p_);
  }
  return UniPoly(p_, std::move(out));
}

DivMod divmod(const UniPoly& a, const UniPoly& b) {
  const std::uint32_t p = a.modulus();
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<std::uint32_t> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {UniPoly(p), a};
  std::vector<std::uint32_t> quo(a.degree() - db + 1, 0);
  const std::uint32_t lead_inv = invmod(b.leading(), p);
  for (int i = a.degree(); i >= db; --i) {
    const std::uint32_t c = mulmod(rem[i], lead_inv, p);
    if (c == 0) continue;
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] = submod(rem[i - db + j], mulmod(c, b.coeff(j), p), p);
  }
  return {UniPoly(p, std::move(quo)), UniPoly(p, std::move(rem))};
}

UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UniPoly squarefree_part(const UniPoly& f) {
  if (f.is_zero()) return f;
  const UniPoly g = gcd(f, f.derivative());
  return divmod(f, g).quotient.monic();
}

// ------------------------------------------------------------ ReducedPoly

ReducedPoly::ReducedPoly(const PrimeField& field, std::uint32_t k, std::vector<Elem> shifts)
    : field_(&field), k_(k), shifts_(std::move(shifts)) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    stride_.push_back(size);
    size *= k_;
  }
  terms_.assign(size, UniPoly(field.q()));
}

ReducedPoly ReducedPoly::one(const PrimeField& field, std::uint32_t k, std::vector<Elem> shifts) {
  ReducedPoly out(field, k, std::move(shifts));
  out.terms_[0] = UniPoly(field.q(), {1});
  return out;
}

std::vector<std::uint32_t> ReducedPoly::exponents(std::size_t monomial) const {
  std::vector<std::uint32_t> e(shifts_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint32_t>(monomial / stride_[i] % k_);
  return e;
}

void ReducedPoly::multiply_linear(const std::vector<Elem>& coeffs) {
  const std::uint32_t p = field_->q();
  std::vector<UniPoly> next(terms_.size(), UniPoly(p));
  for (std::size_t m = 0; m < terms_.size(); ++m) {
    const UniPoly& t = terms_[m];
    if (t.is_zero()) continue;
    for (std::size_t i = 0; i < shifts_.size(); ++i) {
      if (coeffs[i] == 0) continue;
      const std::uint32_t e = static_cast<std::uint32_t>(m / stride_[i] % k_);
      if (e + 1 < k_) {
        next[m + stride_[i]] = next[m + stride_[i]] + t.scaled(coeffs[i]);
      } else {
        // x_i^k = r + b_i
        const std::size_t target = m - static_cast<std::size_t>(k_ - 1) * stride_[i];
        next[target] = next[target] + t.scaled(coeffs[i]) * UniPoly::linear(p, shifts_[i], 1);
      }
    }
  }
  terms_ = std::move(next);
}

bool ReducedPoly::is_pure_r() const {
  for (std::size_t m = 1; m < terms_.size(); ++m)
    if (!terms_[m].is_zero()) return false;
  return true;
}

// ------------------------------------------------------------------ strata

bool is_diagonal(const ParamTuple& b) {
  std::unordered_map<Elem, std::size_t> mult;
  for (Elem v : b.values()) ++mult[v];
  return std::all_of(mult.begin(), mult.end(), [](const auto& kv) { return kv.second >= 2; });
}

std::uint64_t fibre_degree_bound(std::uint32_t k, std::size_t l) {
  return 2 * l + checked_power(k, 2 * l - 1, std::uint64_t{1} << 62);
}

UniPoly singular_polynomial(const PrimeField& field, std::uint32_t k, const ParamTuple& b) {
  const std::size_t n = b.size();
  const std::size_t l = b.l();
  if (k == 0) throw DomainError("singular_polynomial: k must be positive");
  if (field.order() % k != 0)
    throw DomainError("singular_polynomial: need q = 1 mod k, got q=" + std::to_string(field.q()) +
                      " k=" + std::to_string(k));
  const std::uint64_t monomials = checked_power(k, n, 10000);
  if (monomials > 10000)
    throw ResourceError("singular_polynomial: k^{2l} exceeds 10^4 (k=" + std::to_string(k) +
                        ", l=" + std::to_string(l) + ")");
  if (field.q() <= fibre_degree_bound(k, l))
    throw DomainError("singular_polynomial: q must exceed 2l + k^{2l-1} = " +
                      std::to_string(fibre_degree_bound(k, l)));

  const std::vector<Elem> mu = field.roots_of_unity(k);
  ReducedPoly acc = ReducedPoly::one(field, k, b.values());
  std::vector<std::size_t> idx(n, 0);
  std::vector<Elem> coeffs(n);
  for (std::uint64_t count = 0; count < monomials; ++count) {
    for (std::size_t i = 0; i < n; ++i) coeffs[i] = i < l ? mu[idx[i]] : field.neg(mu[idx[i]]);
    acc.multiply_linear(coeffs);
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < k) break;
      idx[i] = 0;
    }
  }
  if (!acc.is_pure_r())
    throw ConsistencyError("singular_polynomial: x-dependence survived the resolvent product");
  return acc.term(0);
}

namespace {

StratumReport fibre_report(const PrimeField& field, std::uint32_t k, const ParamTuple& b, bool throw_on_degenerate) {
  StratumReport rep;
  rep.on_diagonal = is_diagonal(b);
  const UniPoly P = singular_polynomial(field, k, b);
  rep.deg_P = P.degree();
  if (P.is_zero()) {
    if (throw_on_degenerate) throw DomainError("degenerate fibre: P_b vanishes identically");
    rep.degenerate = true;
    return rep;
  }
  UniPoly F = P;
  for (Elem bi : b.values()) F = F * UniPoly::linear(field.q(), bi, 1);
  rep.z_count = squarefree_part(F).degree();
  return rep;
}

}  // namespace

StratumReport z_fiber_count(const PrimeField& field, std::uint32_t k, const ParamTuple& b) {
  return fibre_report(field, k, b, true);
}

StratumReport stratum_report(const PrimeField& field, std::uint32_t k, const ParamTuple& b) {
  return fibre_report(field, k, b, false);
}

double StratumScan::generic_fraction() const {
  if (reports.empty() || generic < 0) return 0.0;
  const auto it = histogram.find(generic);
  return it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(reports.size());
}

StratumScan stratum_scan(const PrimeField& field, std::uint32_t k, std::size_t l, const Sampler& sampler,
                         unsigned threads) {
  if (l == 0) throw DomainError("stratum_scan: l must be positive");
  const std::size_t n = 2 * l;
  StratumScan scan;
  if (sampler.exhaustive) {
    const std::uint64_t total = checked_power(field.q(), n, 10'000'000);
    if (total > 10'000'000)
      throw ResourceError("stratum_scan: exhaustive mode needs q^{2l} <= 10^7; use --samples");
    scan.tuples.reserve(total);
    std::vector<Elem> b(n, 0);
    for (std::uint64_t c = 0; c < total; ++c) {
      scan.tuples.emplace_back(b);
      for (std::size_t i = n; i-- > 0;) {
        if (++b[i] < field.q()) break;
        b[i] = 0;
      }
    }
  } else {
    Rng rng(sampler.seed);
    scan.tuples.reserve(sampler.samples);
    for (std::size_t s = 0; s < sampler.samples; ++s) scan.tuples.emplace_back(rng.tuple(n, field.q()));
  }

  auto chunks = parallel_chunks<std::vector<StratumReport>>(
      scan.tuples.size(), threads, [&](std::size_t begin, std::size_t end) {
        std::vector<StratumReport> out;
        out.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) out.push_back(stratum_report(field, k, scan.tuples[i]));
        return out;
      });
  for (auto& c : chunks)
    for (auto& r : c) scan.reports.push_back(r);

  for (const auto& r : scan.reports) {
    if (r.degenerate) {
      ++scan.degenerate;
      continue;
    }
    ++scan.histogram[r.z_count];
    scan.generic = std::max(scan.generic, r.z_count);
  }
  for (auto& r : scan.reports) r.generic = !r.degenerate && r.z_count == scan.generic;
  return scan;
}

// ---------------------------------------------------------------- box counts

namespace {

// Number of words of length n over an alphabet of size m in which every letter
// used occurs at least twice: sum_j a(n, j) m (m-1) ... (m-j+1), where a(n, j)
// counts set partitions of n points into j blocks of size >= 2.
std::uint64_t repeated_words(std::size_t n, std::uint64_t m) {
  std::vector<std::vector<std::uint64_t>> a(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  a[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      a[i][j] = j * a[i - 1][j];
      if (i >= 2) a[i][j] += (i - 1) * a[i - 2][j - 1];
    }
  std::uint64_t total = 0;
  std::uint64_t falling = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    if (m < j) break;
    falling *= (m - j + 1);
    total += a[n][j] * falling;
  }
  return n == 0 ? 1 : total;
}

Elem eval_multi(const PrimeField& field, const MultiPoly& poly, const std::vector<Elem>& x) {
  Elem acc = 0;
  for (const auto& term : poly) {
    Elem t = term.coeff % field.q();
    for (std::size_t i = 0; i < term.exponents.size() && t != 0; ++i)
      if (term.exponents[i]) t = field.mul(t, field.pow(x.at(i), term.exponents[i]));
    acc = field.add(acc, t);
  }
  return acc;
}

}  // namespace

std::uint64_t box_count_variety(const PrimeField& field, const BoxPredicate& predicate, const Box& box) {
  if (box.l == 0) throw DomainError("box_count_variety: l must be positive");
  if (2 * box.B >= field.q()) throw DomainError("box_count_variety: need B < q/2");
  const std::size_t n = 2 * box.l;
  const std::uint64_t side = box.half_open ? box.B : box.B + 1;

  // Box coordinates are distinct mod q because 2B < q, so the diagonal count
  // is the same as over the integers.
  if (std::holds_alternative<DiagonalPredicate>(predicate)) return repeated_words(n, side);

  const auto& system = std::get<PolynomialSystem>(predicate);
  for (const auto& eq : system.equations)
    for (const auto& term : eq)
      if (term.exponents.size() > n)
        throw DomainError("box_count_variety: monomial has more than 2l variables");
  const std::uint64_t total = checked_power(side, n, 100'000'000);
  if (total > 100'000'000)
    throw ResourceError("box_count_variety: (B+1)^{2l} exceeds 10^8; use the diagonal (pruned) predicate");
  if (side == 0) return 0;

  std::vector<Elem> x(n, field.reduce(static_cast<std::int64_t>(box.B)));
  const Elem lo = x[0];
  const Elem hi = field.reduce(static_cast<std::int64_t>(box.B + side - 1));
  std::uint64_t count = 0;
  for (std::uint64_t c = 0; c < total; ++c) {
    bool on = true;
    for (const auto& eq : system.equations)
      if (eval_multi(field, eq, x) != 0) {
        on = false;
        break;
      }
    if (on) ++count;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] != hi) {
        x[i] = field.add(x[i], 1);
        break;
      }
      x[i] = lo;
    }
  }
  return count;
}

}  // namespace klsum

#include "klsum/char_props.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "klsum/error.hpp"

namespace klsum {

CharTuple::CharTuple(std::vector<MultChar> chars) : chars_(std::move(chars)) {
  if (chars_.empty()) throw DomainError("character tuple must have k >= 1");
  const auto q = chars_.front().field().q();
  for (const auto& c : chars_) {
    if (c.field().q() != q) throw DomainError("characters of a tuple must share one field");
  }
}

namespace {

std::vector<MultChar> make_chars(const FieldPtr& field, const std::vector<std::int64_t>& idx) {
  std::vector<MultChar> out;
  out.reserve(idx.size());
  for (auto a : idx) out.emplace_back(field, a);
  return out;
}

using Multiset = std::map<std::uint32_t, std::uint32_t>;

Multiset counts(const CharTuple& t) {
  Multiset m;
  for (const auto& c : t.chars()) ++m[c.index()];
  return m;
}

}  // namespace

CharTuple::CharTuple(FieldPtr field, const std::vector<std::int64_t>& indices)
    : CharTuple(make_chars(field, indices)) {}

CharTuple CharTuple::trivial(FieldPtr field, std::size_t k) {
  return CharTuple(std::move(field), std::vector<std::int64_t>(k, 0));
}

std::vector<std::uint32_t> CharTuple::indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(chars_.size());
  for (const auto& c : chars_) out.push_back(c.index());
  return out;
}

std::vector<std::uint32_t> CharTuple::sorted_indices() const {
  auto out = indices();
  std::sort(out.begin(), out.end());
  return out;
}

MultChar CharTuple::product() const {
  MultChar acc = MultChar::trivial(field_ptr());
  for (const auto& c : chars_) acc = acc * c;
  return acc;
}

CharTuple CharTuple::twisted(const MultChar& chi0) const {
  std::vector<MultChar> out;
  out.reserve(chars_.size());
  for (const auto& c : chars_) out.push_back(chi0 * c);
  return CharTuple(std::move(out));
}

bool witness_reproduces(const CharTuple& t, const KummerWitness& w) {
  const std::uint32_t n = t.field().order();
  if (w.d < 2 || n % w.d != 0 || w.xis.size() * w.d != t.size()) return false;
  Multiset rebuilt;
  const std::uint32_t step = n / w.d;
  for (const auto& xi : w.xis) {
    // Roots of a -> d a = xi form a coset of the step subgroup, or nothing.
    std::uint32_t base = n;
    for (std::uint32_t a = 0; a < step; ++a) {
      if ((std::uint64_t{a} * w.d) % n == xi.index()) {
        base = a;
        break;
      }
    }
    if (base == n) return false;
    for (std::uint32_t j = 0; j < w.d; ++j) ++rebuilt[base + j * step];
  }
  return rebuilt == counts(t);
}

std::optional<KummerWitness> is_kummer_induced(const CharTuple& t) {
  const auto k = static_cast<std::uint32_t>(t.size());
  const std::uint32_t n = t.field().order();
  const Multiset cnt = counts(t);
  for (std::uint32_t d = 2; d <= k; ++d) {
    // A fibre of the d-th power map has gcd(d, q-1) elements, so full fibres
    // of size d need d | q-1.
    if (k % d != 0 || n % d != 0) continue;
    const std::uint32_t step = n / d;
    bool ok = true;
    for (const auto& [a, c] : cnt) {
      for (std::uint32_t j = 1; j < d && ok; ++j) {
        const auto it = cnt.find((a + j * step) % n);
        ok = it != cnt.end() && it->second == c;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    KummerWitness w;
    w.d = d;
    for (const auto& [a, c] : cnt) {
      if (a >= step) continue;  // one representative per coset
      const MultChar xi(t.field_ptr(), static_cast<std::int64_t>((std::uint64_t{a} * d) % n));
      for (std::uint32_t r = 0; r < c; ++r) w.xis.push_back(xi);
    }
    return w;
  }
  return std::nullopt;
}

std::vector<DualizingChar> dualizing_characters(const CharTuple& t) {
  const std::uint32_t n = t.field().order();
  const Multiset cnt = counts(t);
  const auto k = t.size();
  const MultChar lambda = t.product();

  // xi chi_1^{-1} must be some chi_j, so xi = chi_1 chi_j.
  std::vector<std::uint32_t> candidates;
  for (const auto& c : t.chars()) candidates.push_back((t[0].index() + c.index()) % n);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<DualizingChar> out;
  for (auto x : candidates) {
    Multiset image;
    for (const auto& [a, c] : cnt) image[(x + n - a) % n] += c;
    if (image != cnt) continue;
    const MultChar xi(t.field_ptr(), x);
    const bool alternating = k % 2 == 0 && xi.pow(static_cast<std::int64_t>(k / 2)) == lambda;
    out.push_back({xi, alternating ? DualityTag::kAlternating : DualityTag::kSymmetric});
  }
  return out;
}

ClassificationReport classify_tuple(const CharTuple& t) {
  ClassificationReport r{t.product(), false, std::nullopt, {}, false, false, false};
  r.witness = is_kummer_induced(t);
  r.kummer_induced = r.witness.has_value();
  r.dualizing = dualizing_characters(t);

  const bool k_odd = t.size() % 2 == 1;
  const bool self_dual = !r.dualizing.empty();
  bool any_symmetric = false;
  bool any_alternating = false;
  bool trivial_alternating = false;
  for (const auto& d : r.dualizing) {
    if (d.tag == DualityTag::kSymmetric) {
      any_symmetric = true;
    } else {
      any_alternating = true;
      if (d.xi.is_trivial()) trivial_alternating = true;
    }
  }
  r.mixed_duality_tags = any_symmetric && any_alternating;
  r.nio = !r.kummer_induced && (k_odd || !any_symmetric);
  r.cgm = !r.kummer_induced && r.lambda.is_trivial() &&
          (k_odd || !self_dual || trivial_alternating);
  return r;
}

namespace {

// Smallest a in Z/n with m a = target, if any.
std::optional<std::uint32_t> solve_linear(std::uint64_t m, std::uint64_t target, std::uint32_t n) {
  const std::uint64_t g = std::gcd(m % n, std::uint64_t{n});
  if (target % g != 0) return std::nullopt;
  for (std::uint32_t a = 0; a < n; ++a) {
    if ((m * a) % n == target % n) return a;
  }
  return std::nullopt;
}

}  // namespace

TwistResult twist_to_cgm(const CharTuple& t) {
  const ClassificationReport c = classify_tuple(t);
  TwistResult out;
  if (!c.nio) {
    out.status = TwistStatus::kNotNio;
    return out;
  }
  const std::uint32_t n = t.field().order();
  const bool alternating_case = t.size() % 2 == 0 && !c.dualizing.empty();
  std::optional<std::uint32_t> root;
  if (alternating_case) {
    // NIO with even k and self-dual means every dualizing xi is alternating.
    for (const auto& d : c.dualizing) {
      root = solve_linear(2, (n - d.xi.index()) % n, n);
      if (root) break;
    }
  } else {
    root = solve_linear(t.size(), (n - c.lambda.index()) % n, n);
  }
  if (!root) {
    out.status = TwistStatus::kNeedsExtension;
    return out;
  }
  const MultChar chi0(t.field_ptr(), *root);
  out.status = TwistStatus::kOk;
  out.chi0 = chi0;
  out.twisted = t.twisted(chi0);
  return out;
}

const char* to_string(DualityTag tag) {
  return tag == DualityTag::kAlternating ? "alternating" : "symmetric";
}

const char* to_string(TwistStatus status) {
  switch (status) {
    case TwistStatus::kOk:
      return "ok";
    case TwistStatus::kNeedsExtension:
      return "needs-extension";
    case TwistStatus::kNotNio:
      return "not-nio";
  }
  return "unknown";
}

}  // namespace klsum

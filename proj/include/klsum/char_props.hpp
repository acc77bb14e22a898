#pragma once

// Combinatorial classification of tuples of multiplicative characters:
// Kummer induction, self-duality (all dualizing characters, each tagged
// symmetric or alternating), and the properties NIO and CGM.
//
// Tuples are multisets: every predicate here is invariant under permutation.

#include <cstdint>
#include <optional>
#include <vector>

#include "klsum/field.hpp"

namespace klsum {

class CharTuple {
 public:
  // Throws DomainError when chars is empty or mixes fields.
  explicit CharTuple(std::vector<MultChar> chars);
  CharTuple(FieldPtr field, const std::vector<std::int64_t>& indices);
  // (1, ..., 1) of length k.
  static CharTuple trivial(FieldPtr field, std::size_t k);

  std::size_t size() const { return chars_.size(); }
  const std::vector<MultChar>& chars() const { return chars_; }
  const MultChar& operator[](std::size_t i) const { return chars_[i]; }
  const PrimeField& field() const { return chars_.front().field(); }
  const FieldPtr& field_ptr() const { return chars_.front().field_ptr(); }

  std::vector<std::uint32_t> indices() const;
  // Indices in increasing order; equal tuples as multisets have equal keys.
  std::vector<std::uint32_t> sorted_indices() const;

  // Lambda = chi_1 ... chi_k.
  MultChar product() const;

  // (chi0 chi_1, ..., chi0 chi_k).
  CharTuple twisted(const MultChar& chi0) const;

 private:
  std::vector<MultChar> chars_;
};

// The multiset is the union, with multiplicity, of the full fibres
// {chi : chi^d = xi_j} for j = 1..k/d.
struct KummerWitness {
  std::uint32_t d = 0;
  std::vector<MultChar> xis;
};

// Rebuilds the fibre union described by the witness and compares multisets.
bool witness_reproduces(const CharTuple& t, const KummerWitness& w);

// Exhaustive over divisors d of k (d != 1). Returns the witness of the
// smallest admissible d.
std::optional<KummerWitness> is_kummer_induced(const CharTuple& t);

enum class DualityTag { kSymmetric, kAlternating };

struct DualizingChar {
  MultChar xi;
  DualityTag tag;
};

// Every xi such that the multiset is stable under chi -> xi chi^{-1}, sorted
// by index.
std::vector<DualizingChar> dualizing_characters(const CharTuple& t);

struct ClassificationReport {
  MultChar lambda;
  bool kummer_induced = false;
  std::optional<KummerWitness> witness;
  std::vector<DualizingChar> dualizing;
  // NIO is false as soon as one dualizing character is symmetric; this flag
  // marks tuples whose dualizing characters carry both tags.
  bool mixed_duality_tags = false;
  bool nio = false;
  bool cgm = false;
};

ClassificationReport classify_tuple(const CharTuple& t);

enum class TwistStatus { kOk, kNeedsExtension, kNotNio };

struct TwistResult {
  TwistStatus status = TwistStatus::kNotNio;
  std::optional<MultChar> chi0;
  std::optional<CharTuple> twisted;
};

// For an NIO tuple, looks for chi0 over F_q itself such that chi0 * t has CGM:
// chi0 is an inverse square root of a dualizing character in the self-dual
// alternating case and an inverse k-th root of Lambda otherwise. Reports
// kNeedsExtension when the root only exists over an extension of F_q.
TwistResult twist_to_cgm(const CharTuple& t);

const char* to_string(DualityTag tag);
const char* to_string(TwistStatus status);

}  // namespace klsum

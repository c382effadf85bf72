#pragma once

// Finite measurable spaces and exact signed measures.
//
// An AtomSpace is an ordered list of labelled atoms; its ordering fixes the
// bit position of every atom for the lifetime of the space. Every
// MeasurableSet, SignedMeasure and FiniteAlgebra holds a shared handle to
// its space, and binary operations reject operands from different spaces
// (spaces with identical label lists are treated as the same space).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rnforge/rational.hpp"

namespace rnforge {

class AtomSpace {
 public:
  /// Throws InputError on an empty list, an empty label or a duplicate.
  explicit AtomSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t atom) const { return labels_.at(atom); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Like find, but throws InputError for an unknown label.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const AtomSpace& a, const AtomSpace& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpaceHandle = std::shared_ptr<const AtomSpace>;

SpaceHandle make_space(std::vector<std::string> labels);

bool same_space(const SpaceHandle& a, const SpaceHandle& b) noexcept;
/// Throws SpaceMismatch unless same_space(a, b).
void require_same_space(const SpaceHandle& a, const SpaceHandle& b);

class MeasurableSet {
 public:
  /// The empty set of `space`.
  explicit MeasurableSet(SpaceHandle space);

  static MeasurableSet full(SpaceHandle space);
  static MeasurableSet of(SpaceHandle space, std::initializer_list<std::size_t> atoms);
  static MeasurableSet of(SpaceHandle space, const std::vector<std::size_t>& atoms);
  static MeasurableSet from_labels(SpaceHandle space, const std::vector<std::string>& labels);
  /// Bit i of `mask` selects atom i; requires |space| <= 64.
  static MeasurableSet from_mask(SpaceHandle space, std::uint64_t mask);

  const SpaceHandle& space() const noexcept { return space_; }

  bool contains(std::size_t atom) const { return bits_.test(atom); }
  void insert(std::size_t atom);
  void erase(std::size_t atom);

  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  bool is_subset_of(const MeasurableSet& other) const;

  /// Member atom indices in increasing order.
  std::vector<std::size_t> members() const;
  /// Member labels sorted lexicographically (the report ordering).
  std::vector<std::string> sorted_labels() const;

  MeasurableSet complement() const;

  friend MeasurableSet operator|(const MeasurableSet& a, const MeasurableSet& b);
  friend MeasurableSet operator&(const MeasurableSet& a, const MeasurableSet& b);
  friend MeasurableSet operator-(const MeasurableSet& a, const MeasurableSet& b);
  /// Symmetric difference (a - b) | (b - a).
  friend MeasurableSet operator^(const MeasurableSet& a, const MeasurableSet& b);
  friend bool operator==(const MeasurableSet& a, const MeasurableSet& b);

 private:
  SpaceHandle space_;
  boost::dynamic_bitset<> bits_;
};

MeasurableSet symmetric_difference(const MeasurableSet& a, const MeasurableSet& b);

/// Finitely additive set function given by one exact weight per atom.
class SignedMeasure {
 public:
  SignedMeasure(SpaceHandle space, std::vector<Rational> weights);

  static SignedMeasure zero(SpaceHandle space);

  const SpaceHandle& space() const noexcept { return space_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const Rational& weight(std::size_t atom) const { return weights_.at(atom); }

  /// Sum of member weights; throws SpaceMismatch for a foreign set.
  Rational operator()(const MeasurableSet& set) const;
  Rational total() const;

  friend bool operator==(const SignedMeasure& a, const SignedMeasure& b);

 private:
  SpaceHandle space_;
  std::vector<Rational> weights_;
};

/// A SignedMeasure whose weights are all nonnegative.
class Measure : public SignedMeasure {
 public:
  /// Throws PreconditionError if any weight is negative.
  Measure(SpaceHandle space, std::vector<Rational> weights);
  explicit Measure(SignedMeasure mu);

  static Measure zero(SpaceHandle space);
  /// Every atom weighs 1.
  static Measure counting(SpaceHandle space);
};

Rational measure_of(const SignedMeasure& mu, const MeasurableSet& set);

/// A partition of the space into nonempty disjoint blocks; the blocks are
/// the atoms of the generated algebra.
class FiniteAlgebra {
 public:
  /// Throws InputError if the blocks are empty, overlap or fail to cover.
  FiniteAlgebra(SpaceHandle space, std::vector<MeasurableSet> blocks);

  static FiniteAlgebra atomic(SpaceHandle space);
  static FiniteAlgebra trivial(SpaceHandle space);

  const SpaceHandle& space() const noexcept { return space_; }
  const std::vector<MeasurableSet>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t block_of(std::size_t atom) const { return block_of_.at(atom); }

  bool is_atomic() const noexcept { return blocks_.size() == space_->size(); }
  /// True iff `set` is a union of blocks.
  bool contains(const MeasurableSet& set) const;
  /// True iff every block of `coarser` is a union of blocks of this algebra.
  bool refines(const FiniteAlgebra& coarser) const;

 private:
  SpaceHandle space_;
  std::vector<MeasurableSet> blocks_;
  std::vector<std::size_t> block_of_;
};

/// prefix followed by `cycle` repeated forever; F_1 is the first element.
class SetSequenceSpec {
 public:
  /// Throws PreconditionError on an empty cycle or mixed spaces.
  SetSequenceSpec(std::vector<MeasurableSet> prefix, std::vector<MeasurableSet> cycle);

  const std::vector<MeasurableSet>& prefix() const noexcept { return prefix_; }
  const std::vector<MeasurableSet>& cycle() const noexcept { return cycle_; }
  const SpaceHandle& space() const noexcept { return cycle_.front().space(); }

  /// F_k for k >= 1.
  const MeasurableSet& at(std::size_t k) const;

 private:
  std::vector<MeasurableSet> prefix_;
  std::vector<MeasurableSet> cycle_;
};

struct HahnDecomposition {
  MeasurableSet positive;
  MeasurableSet negative;
};

struct JordanDecomposition {
  Measure positive;
  Measure negative;
};

struct AbsoluteContinuity {
  bool holds = true;
  /// An atom with nu = 0 and lambda != 0 when !holds.
  std::optional<std::size_t> witness;
};

/// One removal of the positive-subset procedure.
struct RemovalStep {
  MeasurableSet removed;
  /// Least n0 with mu(removed) <= -1/n0.
  Integer n0;
};

/// Positive subset of p0 by iterated removal of deficient subsets: each
/// round finds the least n0 for which some remaining subset Q has
/// mu(Q) <= -1/n0, removes the smallest such Q built from the most negative
/// atoms, and repeats until no remaining subset is negative. Throws
/// PreconditionError unless mu(p0) > 0.
MeasurableSet construct_positive_subset(const SignedMeasure& mu, const MeasurableSet& p0,
                                        std::vector<RemovalStep>* trace = nullptr);

/// Direct route: p0 without its strictly negative atoms. Same contract.
MeasurableSet drop_negative_atoms(const SignedMeasure& mu, const MeasurableSet& p0);

/// M+ is every atom with mu(atom) >= 0: it maximizes mu and, among the
/// maximizers, nu. M- is its complement.
HahnDecomposition hahn_decomposition(const SignedMeasure& mu, const Measure& nu);

/// mu = positive - negative, each concentrated on its Hahn half.
JordanDecomposition jordan_decomposition(const SignedMeasure& mu, const Measure& nu);

/// Atomwise lambda - a * nu.
SignedMeasure affine_combine(const SignedMeasure& lambda, const Rational& a, const Measure& nu);

AbsoluteContinuity is_absolutely_continuous(const Measure& lambda, const Measure& nu);

/// Atoms lying in infinitely many F_k: the union of the cycle.
MeasurableSet limsup_sets(const SetSequenceSpec& spec);

}  // namespace rnforge

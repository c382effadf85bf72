#include "rnforge/measure.hpp"

#include <algorithm>
#include <numeric>

#include "rnforge/error.hpp"

namespace rnforge {

AtomSpace::AtomSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw InputError("atom space needs at least one atom");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw InputError("atom labels must be nonempty");
    if (!index_.emplace(labels_[i], i).second) {
      throw InputError("duplicate atom label \"" + labels_[i] + "\"");
    }
  }
}

std::optional<std::size_t> AtomSpace::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t AtomSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw InputError("unknown atom label \"" + std::string(label) + "\"");
}

SpaceHandle make_space(std::vector<std::string> labels) {
  return std::make_shared<const AtomSpace>(std::move(labels));
}

bool same_space(const SpaceHandle& a, const SpaceHandle& b) noexcept {
  return a == b || (a && b && *a == *b);
}

void require_same_space(const SpaceHandle& a, const SpaceHandle& b) {
  if (!same_space(a, b)) throw SpaceMismatch();
}

// --- MeasurableSet ---------------------------------------------------------

MeasurableSet::MeasurableSet(SpaceHandle space) : space_(std::move(space)) {
  if (!space_) throw PreconditionError("measurable set needs a space");
  bits_.resize(space_->size());
}

MeasurableSet MeasurableSet::full(SpaceHandle space) {
  MeasurableSet s(std::move(space));
  s.bits_.set();
  return s;
}

MeasurableSet MeasurableSet::of(SpaceHandle space, std::initializer_list<std::size_t> atoms) {
  return of(std::move(space), std::vector<std::size_t>(atoms));
}

MeasurableSet MeasurableSet::of(SpaceHandle space, const std::vector<std::size_t>& atoms) {
  MeasurableSet s(std::move(space));
  for (std::size_t a : atoms) s.insert(a);
  return s;
}

MeasurableSet MeasurableSet::from_labels(SpaceHandle space, const std::vector<std::string>& labels) {
  MeasurableSet s(std::move(space));
  for (const auto& l : labels) s.insert(s.space_->index_of(l));
  return s;
}

MeasurableSet MeasurableSet::from_mask(SpaceHandle space, std::uint64_t mask) {
  MeasurableSet s(std::move(space));
  if (s.space_->size() > 64) throw PreconditionError("from_mask needs at most 64 atoms");
  for (std::size_t i = 0; i < s.space_->size(); ++i) {
    if ((mask >> i) & 1U) s.bits_.set(i);
  }
  return s;
}

void MeasurableSet::insert(std::size_t atom) {
  if (atom >= bits_.size()) throw PreconditionError("atom index out of range");
  bits_.set(atom);
}

void MeasurableSet::erase(std::size_t atom) {
  if (atom >= bits_.size()) throw PreconditionError("atom index out of range");
  bits_.reset(atom);
}

bool MeasurableSet::is_subset_of(const MeasurableSet& other) const {
  require_same_space(space_, other.space_);
  return bits_.is_subset_of(other.bits_);
}

std::vector<std::size_t> MeasurableSet::members() const {
  std::vector<std::size_t> out;
  out.reserve(bits_.count());
  for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i)) {
    out.push_back(i);
  }
  return out;
}

std::vector<std::string> MeasurableSet::sorted_labels() const {
  std::vector<std::string> out;
  for (std::size_t i : members()) out.push_back(space_->label(i));
  std::sort(out.begin(), out.end());
  return out;
}

MeasurableSet MeasurableSet::complement() const {
  MeasurableSet s(*this);
  s.bits_.flip();
  return s;
}

MeasurableSet operator|(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a.space_, b.space_);
  MeasurableSet s(a);
  s.bits_ |= b.bits_;
  return s;
}

MeasurableSet operator&(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a.space_, b.space_);
  MeasurableSet s(a);
  s.bits_ &= b.bits_;
  return s;
}

MeasurableSet operator-(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a.space_, b.space_);
  MeasurableSet s(a);
  s.bits_ -= b.bits_;
  return s;
}

MeasurableSet operator^(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a.space_, b.space_);
  MeasurableSet s(a);
  s.bits_ ^= b.bits_;
  return s;
}

bool operator==(const MeasurableSet& a, const MeasurableSet& b) {
  return same_space(a.space_, b.space_) && a.bits_ == b.bits_;
}

MeasurableSet symmetric_difference(const MeasurableSet& a, const MeasurableSet& b) {
  return (a - b) | (b - a);
}

// --- measures --------------------------------------------------------------

SignedMeasure::SignedMeasure(SpaceHandle space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw PreconditionError("measure needs a space");
  if (weights_.size() != space_->size()) {
    throw PreconditionError("measure needs exactly one weight per atom");
  }
}

SignedMeasure SignedMeasure::zero(SpaceHandle space) {
  const auto n = space->size();
  return SignedMeasure(std::move(space), std::vector<Rational>(n));
}

Rational SignedMeasure::operator()(const MeasurableSet& set) const {
  require_same_space(space_, set.space());
  Rational sum = 0;
  for (std::size_t i : set.members()) sum += weights_[i];
  return sum;
}

Rational SignedMeasure::total() const {
  return std::accumulate(weights_.begin(), weights_.end(), Rational(0));
}

bool operator==(const SignedMeasure& a, const SignedMeasure& b) {
  return same_space(a.space_, b.space_) && a.weights_ == b.weights_;
}

Measure::Measure(SpaceHandle space, std::vector<Rational> weights)
    : Measure(SignedMeasure(std::move(space), std::move(weights))) {}

Measure::Measure(SignedMeasure mu) : SignedMeasure(std::move(mu)) {
  for (std::size_t i = 0; i < weights().size(); ++i) {
    if (weights()[i] < 0) {
      throw PreconditionError("measure weight of \"" + space()->label(i) + "\" is negative");
    }
  }
}

Measure Measure::zero(SpaceHandle space) { return Measure(SignedMeasure::zero(std::move(space))); }

Measure Measure::counting(SpaceHandle space) {
  const auto n = space->size();
  return Measure(std::move(space), std::vector<Rational>(n, Rational(1)));
}

Rational measure_of(const SignedMeasure& mu, const MeasurableSet& set) { return mu(set); }

// --- FiniteAlgebra ---------------------------------------------------------

FiniteAlgebra::FiniteAlgebra(SpaceHandle space, std::vector<MeasurableSet> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
  constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
  block_of_.assign(space_->size(), unassigned);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    require_same_space(space_, blocks_[b].space());
    if (blocks_[b].empty()) throw InputError("algebra blocks must be nonempty");
    for (std::size_t atom : blocks_[b].members()) {
      if (block_of_[atom] != unassigned) {
        throw InputError("atom \"" + space_->label(atom) + "\" lies in two blocks");
      }
      block_of_[atom] = b;
    }
  }
  for (std::size_t atom = 0; atom < block_of_.size(); ++atom) {
    if (block_of_[atom] == unassigned) {
      throw InputError("atom \"" + space_->label(atom) + "\" is not covered by any block");
    }
  }
}

FiniteAlgebra FiniteAlgebra::atomic(SpaceHandle space) {
  std::vector<MeasurableSet> blocks;
  for (std::size_t i = 0; i < space->size(); ++i) blocks.push_back(MeasurableSet::of(space, {i}));
  return FiniteAlgebra(std::move(space), std::move(blocks));
}

FiniteAlgebra FiniteAlgebra::trivial(SpaceHandle space) {
  auto all = MeasurableSet::full(space);
  return FiniteAlgebra(std::move(space), {std::move(all)});
}

bool FiniteAlgebra::contains(const MeasurableSet& set) const {
  require_same_space(space_, set.space());
  for (const auto& block : blocks_) {
    const auto overlap = (block & set).size();
    if (overlap != 0 && overlap != block.size()) return false;
  }
  return true;
}

bool FiniteAlgebra::refines(const FiniteAlgebra& coarser) const {
  require_same_space(space_, coarser.space_);
  return std::all_of(coarser.blocks_.begin(), coarser.blocks_.end(),
                     [this](const MeasurableSet& b) { return contains(b); });
}

// --- SetSequenceSpec -------------------------------------------------------

SetSequenceSpec::SetSequenceSpec(std::vector<MeasurableSet> prefix, std::vector<MeasurableSet> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw PreconditionError("set sequence needs a nonempty cycle");
  for (const auto& s : prefix_) require_same_space(space(), s.space());
  for (const auto& s : cycle_) require_same_space(space(), s.space());
}

const MeasurableSet& SetSequenceSpec::at(std::size_t k) const {
  if (k == 0) throw PreconditionError("set sequences are indexed from 1");
  if (k <= prefix_.size()) return prefix_[k - 1];
  return cycle_[(k - 1 - prefix_.size()) % cycle_.size()];
}

// --- operations ------------------------------------------------------------

MeasurableSet construct_positive_subset(const SignedMeasure& mu, const MeasurableSet& p0,
                                        std::vector<RemovalStep>* trace) {
  require_same_space(mu.space(), p0.space());
  if (mu(p0) <= 0) throw PreconditionError("positive subset needs mu(P0) > 0");

  MeasurableSet remaining = p0;
  for (;;) {
    // The most negative subset of what remains is its set of negative atoms.
    std::vector<std::size_t> negative;
    Rational deficiency = 0;
    for (std::size_t i : remaining.members()) {
      if (mu.weight(i) < 0) {
        negative.push_back(i);
        deficiency += mu.weight(i);
      }
    }
    if (negative.empty()) break;

    // Least n0 with -1/n0 >= deficiency, i.e. n0 = ceil(1 / -deficiency).
    const Rational inverse = 1 / Rational(-deficiency);
    Integer n0 = floor(inverse);
    if (Rational(n0) < inverse) n0 += 1;
    const Rational threshold = Rational(-1) / Rational(n0);

    std::stable_sort(negative.begin(), negative.end(),
                     [&](std::size_t a, std::size_t b) { return mu.weight(a) < mu.weight(b); });
    MeasurableSet removed(mu.space());
    Rational removed_mass = 0;
    for (std::size_t i : negative) {
      removed.insert(i);
      removed_mass += mu.weight(i);
      if (removed_mass <= threshold) break;
    }
    remaining = remaining - removed;
    if (trace) trace->push_back({std::move(removed), n0});
  }
  return remaining;
}

MeasurableSet drop_negative_atoms(const SignedMeasure& mu, const MeasurableSet& p0) {
  require_same_space(mu.space(), p0.space());
  if (mu(p0) <= 0) throw PreconditionError("positive subset needs mu(P0) > 0");
  MeasurableSet out = p0;
  for (std::size_t i : p0.members()) {
    if (mu.weight(i) < 0) out.erase(i);
  }
  return out;
}

HahnDecomposition hahn_decomposition(const SignedMeasure& mu, const Measure& nu) {
  require_same_space(mu.space(), nu.space());
  MeasurableSet positive(mu.space());
  for (std::size_t i = 0; i < mu.weights().size(); ++i) {
    if (mu.weight(i) >= 0) positive.insert(i);
  }
  auto negative = positive.complement();
  return {std::move(positive), std::move(negative)};
}

JordanDecomposition jordan_decomposition(const SignedMeasure& mu, const Measure& nu) {
  const auto hahn = hahn_decomposition(mu, nu);
  const auto n = mu.weights().size();
  std::vector<Rational> plus(n), minus(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (hahn.positive.contains(i)) {
      plus[i] = mu.weight(i);
    } else {
      minus[i] = -mu.weight(i);
    }
  }
  return {Measure(mu.space(), std::move(plus)), Measure(mu.space(), std::move(minus))};
}

SignedMeasure affine_combine(const SignedMeasure& lambda, const Rational& a, const Measure& nu) {
  require_same_space(lambda.space(), nu.space());
  std::vector<Rational> w(lambda.weights().size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = lambda.weight(i) - a * nu.weight(i);
  return SignedMeasure(lambda.space(), std::move(w));
}

AbsoluteContinuity is_absolutely_continuous(const Measure& lambda, const Measure& nu) {
  require_same_space(lambda.space(), nu.space());
  for (std::size_t i = 0; i < nu.weights().size(); ++i) {
    if (nu.weight(i) == 0 && lambda.weight(i) != 0) return {false, i};
  }
  return {true, std::nullopt};
}

MeasurableSet limsup_sets(const SetSequenceSpec& spec) {
  MeasurableSet out(spec.space());
  for (const auto& s : spec.cycle()) out = out | s;
  return out;
}

}  // namespace rnforge

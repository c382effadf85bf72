#pragma once

// Density construction on finite algebras: atom-ratio densities, level sets,
// dyadic approximants with their L1 error bound, refinement-chain traversal
// and exhaustive verification of lambda(S) = integral over S of f dnu.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rnforge/measure.hpp"
#include "rnforge/rational.hpp"

namespace rnforge {

/// Nonnegative function constant on each block of an algebra.
class SimpleDensity {
 public:
  /// Throws PreconditionError unless there is one nonnegative value per block.
  SimpleDensity(FiniteAlgebra algebra, std::vector<Rational> values);

  static SimpleDensity constant(FiniteAlgebra algebra, const Rational& value);

  const FiniteAlgebra& algebra() const noexcept { return algebra_; }
  const SpaceHandle& space() const noexcept { return algebra_.space(); }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const Rational& value(std::size_t block) const { return values_.at(block); }
  /// Value on the block containing `atom`.
  const Rational& at_atom(std::size_t atom) const { return values_[algebra_.block_of(atom)]; }

 private:
  FiniteAlgebra algebra_;
  std::vector<Rational> values_;
};

/// Successively finer algebras over one space, ending at the atomic one.
class RefinementChain {
 public:
  /// Throws InputError if empty, if a level does not refine its
  /// predecessor, or if the last level is not atomic.
  explicit RefinementChain(std::vector<FiniteAlgebra> levels);

  const std::vector<FiniteAlgebra>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const FiniteAlgebra& finest() const noexcept { return levels_.back(); }
  const SpaceHandle& space() const noexcept { return levels_.front().space(); }

 private:
  std::vector<FiniteAlgebra> levels_;
};

/// Dyadic approximation quality at level n. Invariant: l1_error <= bound.
struct ApproximationReport {
  unsigned level = 0;
  Rational l1_error;
  /// Integral of f over {f >= n}.
  Rational tail_mass;
  /// tail_mass + nu(M) / 2^n.
  Rational bound;
  /// True once {f >= n} is empty, so only the dyadic gap remains.
  bool converged = false;
};

struct LevelReport {
  std::size_t level = 0;
  std::size_t block_count = 0;
  /// Integral of |f_level - f_final| dnu.
  Rational l1_to_final;
};

struct RnDerivation {
  /// Density on the finest (atomic) level.
  SimpleDensity density;
  /// One density per chain level, coarsest first.
  std::vector<SimpleDensity> level_densities;
  std::vector<LevelReport> levels;
  /// nu is identically zero, which forces lambda = 0 and f = 0.
  bool degenerate = false;
};

struct LevelCorrespondence {
  /// level_set(f, a) symmetric-difference M+(lambda - a nu).
  MeasurableSet difference;
  Rational nu_mass;
  Rational mu_mass;
};

struct Discrepancy {
  /// max |lambda(S) - integral_S f dnu| over the sets examined.
  Rational max;
  /// A set attaining `max` (empty when max == 0).
  MeasurableSet witness;
  std::uint64_t sets_examined = 0;
  bool exhaustive = true;
};

/// Largest space verify_density sweeps exhaustively.
inline constexpr std::size_t kExhaustiveAtomLimit = 20;

/// Per block A: lambda(A)/nu(A) when nu(A) > 0, else 0. Throws
/// NotAbsolutelyContinuous (with the witness atom) unless lambda << nu.
SimpleDensity atom_density(const Measure& lambda, const Measure& nu, const FiniteAlgebra& algebra);

/// Sum over blocks B inside `set` of f(B) nu(B). Throws PreconditionError
/// when `set` is not a union of blocks.
Rational integrate(const SimpleDensity& f, const Measure& nu, const MeasurableSet& set);

/// Union of blocks with value >= a.
MeasurableSet level_set(const SimpleDensity& f, const Rational& a);

/// {a <= f < b}; throws PreconditionError unless a < b.
MeasurableSet level_band(const SimpleDensity& f, const Rational& a, const Rational& b);

/// nu- and (lambda - a nu)-mass of level_set(f, a) symmetric-difference
/// M+(lambda - a nu). Both vanish when f is the atomic density of lambda.
LevelCorrespondence hahn_level_correspondence(const Measure& lambda, const Measure& nu,
                                              const SimpleDensity& f, const Rational& a);

/// Block value v becomes floor(v 2^n) / 2^n if v < n and 0 otherwise.
SimpleDensity dyadic_approximation(const SimpleDensity& f, unsigned n);

ApproximationReport approximation_report(const SimpleDensity& f, const Measure& nu, unsigned n);

RnDerivation rn_derive(const Measure& lambda, const Measure& nu, const RefinementChain& chain);

/// Exhaustive sweep over all 2^n subsets (Gray-code order). Requires an
/// atomic f; throws SizeGuardError beyond kExhaustiveAtomLimit atoms.
Discrepancy verify_density(const Measure& lambda, const Measure& nu, const SimpleDensity& f);

/// Non-exhaustive check over `samples` uniformly random subsets.
Discrepancy verify_density_sampled(const Measure& lambda, const Measure& nu, const SimpleDensity& f,
                                   std::uint64_t samples, std::uint64_t seed);

}  // namespace rnforge

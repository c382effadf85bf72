#pragma once

// Brute-force reference implementations. Everything here enumerates subsets
// directly from the atom weights and never calls the construction code in
// radon_nikodym.hpp or the decompositions in measure.hpp.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rnforge/measure.hpp"
#include "rnforge/radon_nikodym.hpp"

namespace rnforge::oracle {

inline constexpr std::size_t kMaxAtoms = 20;

/// Calls visit(mask) for every mask in [0, 2^n). Throws SizeGuardError
/// beyond kMaxAtoms.
void for_each_subset(std::size_t n, const std::function<void(std::uint64_t)>& visit);

/// Sum of weights selected by `mask`, recomputed from scratch.
Rational subset_sum(const std::vector<Rational>& weights, std::uint64_t mask);

struct MaxSubset {
  MeasurableSet set;
  Rational value;
};

/// Maximizes mu over all subsets. Ties are broken by larger nu (when given),
/// then by larger cardinality, then by larger mask.
MaxSubset max_measure_subset(const SignedMeasure& mu, const std::optional<Measure>& nu = std::nullopt);

/// Every subset attaining the maximum of mu.
std::vector<MeasurableSet> all_maximizers(const SignedMeasure& mu);

/// Minimum of mu over all subsets of `set`.
Rational min_subset_measure(const SignedMeasure& mu, const MeasurableSet& set);

/// lambda(atom) / nu(atom) per atom, 0 on nu-null atoms. Throws
/// NotAbsolutelyContinuous unless lambda << nu.
SimpleDensity direct_density(const Measure& lambda, const Measure& nu);

/// lambda(S) == sum over S of f nu, checked on every subset.
bool exhaustive_identity_check(const Measure& lambda, const Measure& nu, const SimpleDensity& f);

/// nu(S) == 0 implies lambda(S) == 0, checked on every subset.
bool exhaustive_absolute_continuity(const Measure& lambda, const Measure& nu);

}  // namespace rnforge::oracle

#include "rnforge/oracle.hpp"

#include <bit>

#include "rnforge/error.hpp"

namespace rnforge::oracle {

void for_each_subset(std::size_t n, const std::function<void(std::uint64_t)>& visit) {
  if (n > kMaxAtoms) {
    throw SizeGuardError("exhaustive enumeration is limited to " + std::to_string(kMaxAtoms) + " atoms");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) visit(mask);
}

Rational subset_sum(const std::vector<Rational>& weights, std::uint64_t mask) {
  Rational sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if ((mask >> i) & 1U) sum += weights[i];
  }
  return sum;
}

MaxSubset max_measure_subset(const SignedMeasure& mu, const std::optional<Measure>& nu) {
  if (nu) require_same_space(mu.space(), nu->space());
  std::uint64_t best_mask = 0;
  Rational best = 0;
  Rational best_nu = 0;
  bool first = true;
  for_each_subset(mu.weights().size(), [&](std::uint64_t mask) {
    const Rational value = subset_sum(mu.weights(), mask);
    const Rational tie = nu ? subset_sum(nu->weights(), mask) : Rational(0);
    bool better = first || value > best;
    if (!better && value == best) {
      if (tie != best_nu) {
        better = tie > best_nu;
      } else if (std::popcount(mask) != std::popcount(best_mask)) {
        better = std::popcount(mask) > std::popcount(best_mask);
      } else {
        better = mask > best_mask;
      }
    }
    if (better) {
      best = value;
      best_nu = tie;
      best_mask = mask;
      first = false;
    }
  });
  return {MeasurableSet::from_mask(mu.space(), best_mask), best};
}

std::vector<MeasurableSet> all_maximizers(const SignedMeasure& mu) {
  std::vector<std::uint64_t> masks;
  Rational best = 0;
  for_each_subset(mu.weights().size(), [&](std::uint64_t mask) {
    const Rational value = subset_sum(mu.weights(), mask);
    if (masks.empty() || value > best) {
      best = value;
      masks.assign(1, mask);
    } else if (value == best) {
      masks.push_back(mask);
    }
  });
  std::vector<MeasurableSet> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(MeasurableSet::from_mask(mu.space(), m));
  return out;
}

Rational min_subset_measure(const SignedMeasure& mu, const MeasurableSet& set) {
  require_same_space(mu.space(), set.space());
  std::uint64_t allowed = 0;
  for (std::size_t i : set.members()) allowed |= std::uint64_t{1} << i;
  Rational lowest = 0;
  for_each_subset(mu.weights().size(), [&](std::uint64_t mask) {
    if ((mask & ~allowed) != 0) return;
    const Rational value = subset_sum(mu.weights(), mask);
    if (value < lowest) lowest = value;
  });
  return lowest;
}

SimpleDensity direct_density(const Measure& lambda, const Measure& nu) {
  require_same_space(lambda.space(), nu.space());
  std::vector<Rational> values(nu.weights().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (nu.weight(i) > 0) {
      values[i] = lambda.weight(i) / nu.weight(i);
    } else if (lambda.weight(i) != 0) {
      throw NotAbsolutelyContinuous(i, lambda.space()->label(i));
    }
  }
  return SimpleDensity(FiniteAlgebra::atomic(lambda.space()), std::move(values));
}

bool exhaustive_identity_check(const Measure& lambda, const Measure& nu, const SimpleDensity& f) {
  require_same_space(lambda.space(), nu.space());
  require_same_space(lambda.space(), f.space());
  if (!f.algebra().is_atomic()) throw PreconditionError("identity check needs an atomic density");
  const std::size_t n = nu.weights().size();
  bool ok = true;
  for_each_subset(n, [&](std::uint64_t mask) {
    if (!ok) return;
    Rational integral = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) integral += f.at_atom(i) * nu.weight(i);
    }
    if (integral != subset_sum(lambda.weights(), mask)) ok = false;
  });
  return ok;
}

bool exhaustive_absolute_continuity(const Measure& lambda, const Measure& nu) {
  require_same_space(lambda.space(), nu.space());
  bool ok = true;
  for_each_subset(nu.weights().size(), [&](std::uint64_t mask) {
    if (ok && subset_sum(nu.weights(), mask) == 0 && subset_sum(lambda.weights(), mask) != 0) ok = false;
  });
  return ok;
}

}  // namespace rnforge::oracle

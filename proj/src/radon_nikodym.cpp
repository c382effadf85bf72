#include "rnforge/radon_nikodym.hpp"

#include <bit>
#include <random>
#include <utility>

#include "rnforge/error.hpp"

namespace rnforge {

SimpleDensity::SimpleDensity(FiniteAlgebra algebra, std::vector<Rational> values)
    : algebra_(std::move(algebra)), values_(std::move(values)) {
  if (values_.size() != algebra_.block_count()) {
    throw PreconditionError("density needs exactly one value per block");
  }
  for (const auto& v : values_) {
    if (v < 0) throw PreconditionError("density values must be nonnegative");
  }
}

SimpleDensity SimpleDensity::constant(FiniteAlgebra algebra, const Rational& value) {
  const auto n = algebra.block_count();
  return SimpleDensity(std::move(algebra), std::vector<Rational>(n, value));
}

RefinementChain::RefinementChain(std::vector<FiniteAlgebra> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InputError("refinement chain needs at least one level");
  for (std::size_t k = 1; k < levels_.size(); ++k) {
    require_same_space(levels_[0].space(), levels_[k].space());
    if (!levels_[k].refines(levels_[k - 1])) {
      throw InputError("chain level " + std::to_string(k) + " does not refine level " +
                       std::to_string(k - 1));
    }
  }
  if (!levels_.back().is_atomic()) throw InputError("the last chain level must be atomic");
}

SimpleDensity atom_density(const Measure& lambda, const Measure& nu, const FiniteAlgebra& algebra) {
  require_same_space(lambda.space(), nu.space());
  require_same_space(lambda.space(), algebra.space());
  if (const auto ac = is_absolutely_continuous(lambda, nu); !ac.holds) {
    throw NotAbsolutelyContinuous(*ac.witness, lambda.space()->label(*ac.witness));
  }
  std::vector<Rational> values;
  values.reserve(algebra.block_count());
  for (const auto& block : algebra.blocks()) {
    const Rational mass = nu(block);
    values.push_back(mass > 0 ? Rational(lambda(block) / mass) : Rational(0));
  }
  return SimpleDensity(algebra, std::move(values));
}

Rational integrate(const SimpleDensity& f, const Measure& nu, const MeasurableSet& set) {
  require_same_space(f.space(), nu.space());
  if (!f.algebra().contains(set)) {
    throw PreconditionError("set is not measurable with respect to the density's algebra");
  }
  Rational sum = 0;
  const auto& blocks = f.algebra().blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].is_subset_of(set)) sum += f.value(b) * nu(blocks[b]);
  }
  return sum;
}

MeasurableSet level_set(const SimpleDensity& f, const Rational& a) {
  MeasurableSet out(f.space());
  const auto& blocks = f.algebra().blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (f.value(b) >= a) out = out | blocks[b];
  }
  return out;
}

MeasurableSet level_band(const SimpleDensity& f, const Rational& a, const Rational& b) {
  if (!(a < b)) throw PreconditionError("level band needs a < b");
  return level_set(f, a) - level_set(f, b);
}

LevelCorrespondence hahn_level_correspondence(const Measure& lambda, const Measure& nu,
                                              const SimpleDensity& f, const Rational& a) {
  const SignedMeasure mu = affine_combine(lambda, a, nu);
  const auto hahn = hahn_decomposition(mu, nu);
  auto diff = symmetric_difference(level_set(f, a), hahn.positive);
  Rational nu_mass = nu(diff);
  Rational mu_mass = mu(diff);
  return {std::move(diff), std::move(nu_mass), std::move(mu_mass)};
}

SimpleDensity dyadic_approximation(const SimpleDensity& f, unsigned n) {
  if (n == 0) throw PreconditionError("dyadic approximation needs n >= 1");
  const Rational scale = pow2(n);
  const Rational cutoff(n);
  std::vector<Rational> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) {
    if (v >= cutoff) {
      values.emplace_back(0);
    } else {
      values.push_back(Rational(floor(v * scale)) / scale);
    }
  }
  return SimpleDensity(f.algebra(), std::move(values));
}

ApproximationReport approximation_report(const SimpleDensity& f, const Measure& nu, unsigned n) {
  require_same_space(f.space(), nu.space());
  const auto fn = dyadic_approximation(f, n);
  const Rational cutoff(n);
  ApproximationReport r;
  r.level = n;
  r.l1_error = 0;
  r.tail_mass = 0;
  const auto& blocks = f.algebra().blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Rational mass = nu(blocks[b]);
    r.l1_error += abs(f.value(b) - fn.value(b)) * mass;
    if (f.value(b) >= cutoff) r.tail_mass += f.value(b) * mass;
  }
  r.bound = r.tail_mass + nu.total() / pow2(n);
  r.converged = r.tail_mass == 0;
  if (r.l1_error > r.bound) {
    // Unreachable for a valid density; kept as a hard check on the bound.
    throw Error("dyadic L1 error exceeds its bound at level " + std::to_string(n));
  }
  return r;
}

RnDerivation rn_derive(const Measure& lambda, const Measure& nu, const RefinementChain& chain) {
  require_same_space(lambda.space(), chain.space());
  std::vector<SimpleDensity> per_level;
  per_level.reserve(chain.size());
  for (const auto& algebra : chain.levels()) per_level.push_back(atom_density(lambda, nu, algebra));

  const SimpleDensity& final_density = per_level.back();
  std::vector<LevelReport> reports;
  for (std::size_t k = 0; k < per_level.size(); ++k) {
    Rational l1 = 0;
    for (std::size_t atom = 0; atom < nu.weights().size(); ++atom) {
      l1 += abs(per_level[k].at_atom(atom) - final_density.at_atom(atom)) * nu.weight(atom);
    }
    reports.push_back({k, chain.levels()[k].block_count(), std::move(l1)});
  }
  SimpleDensity density = final_density;
  return {std::move(density), std::move(per_level), std::move(reports), nu.total() == 0};
}

namespace {

// lambda(atom) - f(atom) nu(atom): the pointwise defect whose subset sums
// are the discrepancies.
std::vector<Rational> atom_defects(const Measure& lambda, const Measure& nu, const SimpleDensity& f) {
  require_same_space(lambda.space(), nu.space());
  require_same_space(lambda.space(), f.space());
  if (!f.algebra().is_atomic()) throw PreconditionError("verification needs an atomic density");
  std::vector<Rational> d(nu.weights().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = lambda.weight(i) - f.at_atom(i) * nu.weight(i);
  return d;
}

int cmp_abs(const Rational& x, const Rational& nonnegative) {
  const Rational a = abs(x);
  return a > nonnegative ? 1 : (a < nonnegative ? -1 : 0);
}

}  // namespace

Discrepancy verify_density(const Measure& lambda, const Measure& nu, const SimpleDensity& f) {
  const auto defects = atom_defects(lambda, nu, f);
  const std::size_t n = defects.size();
  if (n > kExhaustiveAtomLimit) {
    throw SizeGuardError("space has " + std::to_string(n) + " atoms; exhaustive verification is limited to " +
                         std::to_string(kExhaustiveAtomLimit) + ", use sampled verification");
  }
  Rational current = 0;
  Rational best = 0;
  std::uint64_t gray = 0;
  std::uint64_t best_mask = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    gray ^= std::uint64_t{1} << bit;
    if ((gray >> bit) & 1U) {
      current += defects[bit];
    } else {
      current -= defects[bit];
    }
    // Ties go to the smallest set, then the lowest mask.
    const int cmp = cmp_abs(current, best);
    if (cmp > 0 || (cmp == 0 && best_mask != 0 &&
                    std::make_pair(std::popcount(gray), gray) < std::make_pair(std::popcount(best_mask), best_mask))) {
      best = abs(current);
      best_mask = gray;
    }
  }
  return {best, MeasurableSet::from_mask(f.space(), best_mask), count, true};
}

Discrepancy verify_density_sampled(const Measure& lambda, const Measure& nu, const SimpleDensity& f,
                                   std::uint64_t samples, std::uint64_t seed) {
  const auto defects = atom_defects(lambda, nu, f);
  std::mt19937_64 rng(seed);
  Rational best = 0;
  MeasurableSet witness(f.space());
  for (std::uint64_t s = 0; s < samples; ++s) {
    MeasurableSet set(f.space());
    Rational sum = 0;
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < defects.size(); ++i) {
      if (i % 64 == 0) word = rng();
      if ((word >> (i % 64)) & 1U) {
        set.insert(i);
        sum += defects[i];
      }
    }
    if (abs(sum) > best) {
      best = abs(sum);
      witness = std::move(set);
    }
  }
  return {best, std::move(witness), samples, false};
}

}  // namespace rnforge

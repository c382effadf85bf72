#pragma once

// Random instances and small reference computations shared by the test
// programs. The reference code here works on plain weight vectors and masks
// and never calls into the library it checks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rnforge/measure.hpp"
#include "rnforge/radon_nikodym.hpp"

namespace rnforge::testing {

using Weights = std::vector<Rational>;

inline SpaceHandle space_of(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return make_space(labels);
}

inline SpaceHandle abc() { return make_space({"a", "b", "c"}); }

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_); }
  long between(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool chance(unsigned percent) { return below(100) < percent; }

  Rational rational(long lo, long hi, long max_den) {
    Rational q(between(lo, hi), between(1, max_den));
    q.canonicalize();
    return q;
  }

  Weights signed_weights(std::size_t n) {
    Weights w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(chance(10) ? Rational(0) : rational(-6, 6, 5));
    return w;
  }

  // Roughly one atom in five is null.
  Weights nu_weights(std::size_t n) {
    Weights w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(chance(20) ? Rational(0) : rational(1, 9, 8));
    return w;
  }

  // Zero wherever nu is zero.
  Weights dominated_weights(const Weights& nu) {
    Weights w;
    for (const auto& v : nu) w.push_back(v == 0 ? Rational(0) : rational(0, 9, 6));
    return w;
  }

  std::uint64_t mask(std::size_t n) { return n == 0 ? 0 : below(std::uint64_t{1} << n); }

  // Groups consecutive entries of `items` into a random number of runs.
  template <typename T>
  std::vector<std::vector<T>> group(const std::vector<T>& items) {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (out.empty() || chance(40)) out.emplace_back();
      out.back().push_back(items[i]);
    }
    return out;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// --- reference computations -------------------------------------------------

inline Rational mask_sum(const Weights& w, std::uint64_t mask) {
  Rational s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (mask >> i & 1) s += w[i];
  }
  return s;
}

inline Rational brute_max(const Weights& w) {
  Rational best = 0;  // the empty set
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << w.size()); ++m) {
    const Rational s = mask_sum(w, m);
    if (s > best) best = s;
  }
  return best;
}

inline std::vector<std::uint64_t> brute_maximizers(const Weights& w) {
  const Rational best = brute_max(w);
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << w.size()); ++m) {
    if (mask_sum(w, m) == best) out.push_back(m);
  }
  return out;
}

inline Weights ratio(const Weights& lambda, const Weights& nu) {
  Weights f;
  for (std::size_t i = 0; i < nu.size(); ++i) f.push_back(nu[i] == 0 ? Rational(0) : Rational(lambda[i] / nu[i]));
  return f;
}

inline std::uint64_t mask_of(const MeasurableSet& s) {
  std::uint64_t m = 0;
  for (auto i : s.members()) m |= std::uint64_t{1} << i;
  return m;
}

inline std::vector<MeasurableSet> blocks_from(const SpaceHandle& space,
                                              const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<MeasurableSet> out;
  for (const auto& g : groups) out.push_back(MeasurableSet::of(space, g));
  return out;
}

// Three levels: coarse, middle, atomic. Blocks are runs of a shuffled atom order.
inline RefinementChain random_chain(Random& rng, const SpaceHandle& space) {
  std::vector<std::size_t> order(space->size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto middle = rng.group(order);
  const auto coarse_runs = rng.group(middle);
  std::vector<std::vector<std::size_t>> coarse;
  for (const auto& run : coarse_runs) {
    coarse.emplace_back();
    for (const auto& block : run) coarse.back().insert(coarse.back().end(), block.begin(), block.end());
  }
  return RefinementChain({FiniteAlgebra(space, blocks_from(space, coarse)),
                          FiniteAlgebra(space, blocks_from(space, middle)), FiniteAlgebra::atomic(space)});
}

}  // namespace rnforge::testing

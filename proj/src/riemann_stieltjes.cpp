#include "rnforge/riemann_stieltjes.hpp"

#include <algorithm>

#include "rnforge/error.hpp"

namespace rnforge::hyper {
namespace {

// Level counts grow at least geometrically for every sequence we build; this
// only stops a runaway loop on a sequence that never refines.
constexpr Index kMaxLevels = 64;

Rational evaluate(const RealRule& rule, const char* name, const Rational& x) {
  try {
    return rule(x);
  } catch (const std::exception& e) {
    throw EvaluationError(std::string(name) + " is not evaluable at " + to_string(x) + ": " + e.what());
  }
}

Index power(Index base, Index exp) {
  Index out = 1;
  for (Index i = 0; i < exp; ++i) {
    if (out > (Index{1} << 62) / base) return Index{1} << 62;
    out *= base;
  }
  return out;
}

}  // namespace

PartitionSequence::PartitionSequence(std::string name, Rule rule, MeshBound mesh_bound,
                                     IntervalCount intervals)
    : name_(std::move(name)),
      rule_(std::move(rule)),
      mesh_bound_(std::move(mesh_bound)),
      intervals_(std::move(intervals)) {
  if (!rule_ || !mesh_bound_ || !intervals_) {
    throw PreconditionError("partition sequence needs a rule, a mesh bound and an interval count");
  }
}

PartitionSequence PartitionSequence::uniform(unsigned base) {
  if (base < 2) throw PreconditionError("uniform partitions need base >= 2");
  auto rule = [base](Index n) {
    const Index count = power(base, n);
    const Rational denom = from_index(count);
    Partition p;
    p.reserve(count + 1);
    for (Index i = 0; i <= count; ++i) p.push_back(from_index(i) / denom);
    return p;
  };
  auto mesh = [base](Index n) { return Rational(1 / from_index(power(base, n))); };
  auto count = [base](Index n) { return power(base, n); };
  const std::string name = base == 2 ? "dyadic" : base == 3 ? "thirds" : "uniform-" + std::to_string(base);
  return PartitionSequence(name, rule, mesh, count);
}

Partition PartitionSequence::at(Index n) const {
  if (n == 0) throw PreconditionError("partition levels start at 1");
  Partition p = rule_(n);
  if (p.size() < 2 || p.front() != 0 || p.back() != 1) {
    throw PreconditionError(name_ + " level " + std::to_string(n) + " is not a partition of [0, 1]");
  }
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i - 1] < p[i])) {
      throw PreconditionError(name_ + " level " + std::to_string(n) + " is not strictly increasing");
    }
  }
  if (mesh_of(p) > mesh_bound_(n)) {
    throw PreconditionError(name_ + " level " + std::to_string(n) + " exceeds its mesh bound");
  }
  return p;
}

Partition merge_partitions(const Partition& a, const Partition& b) {
  Partition out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational mesh_of(const Partition& p) {
  Rational widest = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const Rational w = p[i] - p[i - 1];
    if (w > widest) widest = w;
  }
  return widest;
}

Rational rs_sum(const RealRule& f, const RealRule& g, const Partition& p) {
  Rational sum = 0;
  if (p.empty()) return sum;
  Rational g_prev = evaluate(g, "g", p.front());
  for (std::size_t k = 1; k < p.size(); ++k) {
    const Rational g_next = evaluate(g, "g", p[k]);
    if (g_next < g_prev) {
      throw PreconditionError("g decreases between " + to_string(p[k - 1]) + " and " + to_string(p[k]));
    }
    sum += evaluate(f, "f", p[k - 1]) * (g_next - g_prev);
    g_prev = g_next;
  }
  return sum;
}

std::vector<RsLevel> rs_levels(const RealRule& f, const RealRule& g, const PartitionSequence& parts,
                               Index horizon) {
  std::vector<RsLevel> levels;
  for (Index n = 1; n <= kMaxLevels && parts.intervals(n) <= horizon; ++n) {
    const Partition p = parts.at(n);
    levels.push_back({n, static_cast<Index>(p.size() - 1), mesh_of(p), rs_sum(f, g, p), std::nullopt});
  }
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const Rational& h0 = levels[i].mesh;
    const Rational& h1 = levels[i + 1].mesh;
    if (h0 == h1) {
      levels[i].extrapolated = levels[i + 1].sum;
    } else {
      levels[i].extrapolated = (h0 * levels[i + 1].sum - h1 * levels[i].sum) / (h0 - h1);
    }
  }
  return levels;
}

RsEstimate rs_estimate(const RealRule& f, const RealRule& g, const PartitionSequence& parts,
                       const Rational& tolerance, Index horizon) {
  if (tolerance <= 0) throw PreconditionError("rs_integral needs a positive tolerance");
  RsEstimate est;
  est.levels = rs_levels(f, g, parts, horizon);
  // Three extrapolated values need four levels.
  if (est.levels.size() < 4) return est;
  const std::size_t last = est.levels.size() - 2;
  Rational lo = *est.levels[last].extrapolated;
  Rational hi = lo;
  for (std::size_t i = last - 2; i <= last; ++i) {
    const Rational& t = *est.levels[i].extrapolated;
    if (t < lo) lo = t;
    if (t > hi) hi = t;
  }
  est.oscillation = hi - lo;
  if (*est.oscillation < tolerance) est.value = *est.levels[last].extrapolated;
  return est;
}

std::optional<Rational> rs_integral(const RealRule& f, const RealRule& g, const PartitionSequence& parts,
                                    const Rational& tolerance, Index horizon) {
  return rs_estimate(f, g, parts, tolerance, horizon).value;
}

Agreement partition_agreement(const RealRule& f, const RealRule& g, const PartitionSequence& p1,
                              const PartitionSequence& p2, const Rational& tolerance, Index horizon,
                              const std::optional<OscillationBound>& oscillation) {
  Agreement out;
  const auto e1 = rs_estimate(f, g, p1, tolerance, horizon);
  const auto e2 = rs_estimate(f, g, p2, tolerance, horizon);
  out.first_value = e1.value;
  out.second_value = e2.value;

  for (Index n = 1; n <= kMaxLevels && p1.intervals(n) <= horizon && p2.intervals(n) <= horizon; ++n) {
    const Partition a = p1.at(n);
    const Partition b = p2.at(n);
    out.levels.push_back({n, rs_sum(f, g, a), rs_sum(f, g, b), rs_sum(f, g, merge_partitions(a, b))});
  }

  if (oscillation && !out.levels.empty()) {
    const Rational spread = evaluate(g, "g", Rational(1)) - evaluate(g, "g", Rational(0));
    for (const auto& lv : out.levels) {
      const Rational w1 = (*oscillation)(mesh_of(p1.at(lv.level))) * spread;
      const Rational w2 = (*oscillation)(mesh_of(p2.at(lv.level))) * spread;
      if (abs(lv.first - lv.merged) > w1 || abs(lv.second - lv.merged) > w2) {
        throw HintViolation("declared oscillation bound violated at level " + std::to_string(lv.level));
      }
    }
    const auto& lv = out.levels.back();
    const Rational bound = ((*oscillation)(mesh_of(p1.at(lv.level))) + (*oscillation)(mesh_of(p2.at(lv.level)))) * spread;
    if (bound < tolerance) {
      out.verdict = {Outcome::holds, std::pair<Index, Index>{lv.level, lv.level}, std::nullopt,
                     "oscillation bound " + to_string(bound) + " below tolerance"};
      return out;
    }
  }

  if (e1.value && e2.value) {
    const Rational gap = abs(*e1.value - *e2.value);
    if (gap < tolerance) {
      out.verdict = {Outcome::holds, std::nullopt, std::nullopt,
                     "certified standard parts agree within " + to_string(tolerance)};
      return out;
    }
    if (gap > 2 * tolerance) {
      out.verdict = {Outcome::fails, std::nullopt, std::nullopt,
                     "certified standard parts differ by " + to_string(gap)};
      return out;
    }
  }

  if (out.levels.size() >= 3) {
    Rational smallest = -1;
    Rational largest = 0;
    for (std::size_t i = out.levels.size() - 3; i < out.levels.size(); ++i) {
      const auto& lv = out.levels[i];
      const Rational gap = std::max(abs(lv.first - lv.merged), abs(lv.second - lv.merged));
      if (gap > largest) largest = gap;
      if (smallest < 0 || gap < smallest) smallest = gap;
    }
    if (largest > 0 && 4 * smallest >= 3 * largest) {
      const Index last = out.levels.back().level;
      out.verdict = {Outcome::fails, std::pair<Index, Index>{last - 2, last}, std::nullopt,
                     "a sum stays " + to_string(smallest) + " away from the merged-partition sum"};
      return out;
    }
  }

  out.verdict = {Outcome::unknown, std::nullopt, std::nullopt, "no certificate within the horizon"};
  return out;
}

}  // namespace rnforge::hyper

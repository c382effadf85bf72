#pragma once

// Riemann-Stieltjes sums S(p) = sum f(a_{k-1}) (g(a_k) - g(a_{k-1})) over a
// sequence of ever finer partitions of [0, 1], read as the hyperreal
// n -> S(p(n)).
//
// Left sums converge at rate O(mesh), too slowly to resolve 1e-6 within a
// few tens of thousands of points, so the standard part is taken of the
// extrapolated sequence
//
//   T_n = (h_n S_{n+1} - h_{n+1} S_n) / (h_n - h_{n+1}),   h_n = mesh(p(n)),
//
// which is infinitely close to S whenever S converges (T_n - S_{n+1} is a
// bounded multiple of S_{n+1} - S_n). T is exact when S is affine in the
// mesh, as for f(x) = x against g(x) = x on uniform partitions. The Cauchy
// certificate is the oscillation of the last three T values.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rnforge/hyperreal.hpp"

namespace rnforge::hyper {

/// 0 = a_0 < a_1 < ... < a_N = 1.
using Partition = std::vector<Rational>;

class PartitionSequence {
 public:
  using Rule = std::function<Partition(Index)>;
  using MeshBound = std::function<Rational(Index)>;
  using IntervalCount = std::function<Index(Index)>;

  /// `intervals` must report the size of rule(n) without building it, so a
  /// point horizon can be applied cheaply.
  PartitionSequence(std::string name, Rule rule, MeshBound mesh_bound, IntervalCount intervals);

  /// Level n splits [0, 1] into base^n equal intervals.
  static PartitionSequence uniform(unsigned base);

  const std::string& name() const noexcept { return name_; }
  /// p(n) for n >= 1; throws PreconditionError if it is not a partition of
  /// [0, 1] or its mesh exceeds mesh_bound(n).
  Partition at(Index n) const;
  Rational mesh_bound(Index n) const { return mesh_bound_(n); }
  Index intervals(Index n) const { return intervals_(n); }

 private:
  std::string name_;
  Rule rule_;
  MeshBound mesh_bound_;
  IntervalCount intervals_;
};

Partition merge_partitions(const Partition& a, const Partition& b);
Rational mesh_of(const Partition& p);

/// Left Riemann-Stieltjes sum. Throws PreconditionError when g decreases
/// between two consecutive points and EvaluationError if f or g throws.
Rational rs_sum(const RealRule& f, const RealRule& g, const Partition& p);

struct RsLevel {
  Index level = 0;
  Index intervals = 0;
  Rational mesh;
  Rational sum;
  /// T_level; absent on the last level.
  std::optional<Rational> extrapolated;
};

struct RsEstimate {
  /// The certified standard part, or nullopt (unknown).
  std::optional<Rational> value;
  /// max - min of the last three extrapolated values (when available).
  std::optional<Rational> oscillation;
  std::vector<RsLevel> levels;
};

/// Levels n = 1, 2, ... while p(n) has at most `horizon` intervals.
std::vector<RsLevel> rs_levels(const RealRule& f, const RealRule& g, const PartitionSequence& parts,
                               Index horizon);

RsEstimate rs_estimate(const RealRule& f, const RealRule& g, const PartitionSequence& parts,
                       const Rational& tolerance, Index horizon);

/// Standard part of n -> S(p(n)); nullopt when no certificate is reached
/// within the horizon. Throws PreconditionError unless tolerance > 0.
std::optional<Rational> rs_integral(const RealRule& f, const RealRule& g, const PartitionSequence& parts,
                                    const Rational& tolerance, Index horizon);

struct AgreementLevel {
  Index level = 0;
  Rational first;
  Rational second;
  /// Sum over the merged partition p1(n) U p2(n).
  Rational merged;
};

struct Agreement {
  Verdict verdict;
  std::optional<Rational> first_value;
  std::optional<Rational> second_value;
  /// Levels where both partitions fit in the horizon.
  std::vector<AgreementLevel> levels;
};

/// mesh -> bound on |f(x) - f(y)| for |x - y| <= mesh.
using OscillationBound = std::function<Rational(const Rational&)>;

/// Does S(p1(n)) - S(p2(n)) tend to 0? Holds when both extrapolated standard
/// parts are certified and within `tolerance` of each other, or when a
/// declared oscillation bound w gives (w(mesh1) + w(mesh2)) (g(1) - g(0)) <
/// tolerance at the last common level. Fails when both are certified and
/// further than 2 tolerance apart, or when over the last three common levels
/// one of the sums keeps a non-shrinking gap to the merged-partition sum.
Agreement partition_agreement(const RealRule& f, const RealRule& g, const PartitionSequence& p1,
                              const PartitionSequence& p2, const Rational& tolerance, Index horizon,
                              const std::optional<OscillationBound>& oscillation = std::nullopt);

}  // namespace rnforge::hyper

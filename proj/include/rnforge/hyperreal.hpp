#pragma once

// Sequence model of the hyperreals.
//
// A HyperReal is a deterministic rule n -> x_n over indices n >= 1 together
// with optional hints. Truth is eventual truth: a property of x holds when it
// holds for all but finitely many indices (the Frechet filter). That is not
// decidable from samples, so every judgement is three-valued:
//
//   holds    needs a certificate: a monotonicity hint plus a declared limit
//            (a monotone sequence approaches its limit from one side, so the
//            distance at index N bounds the distance at every later index);
//   fails    needs a certificate or a concrete witness window on which the
//            quantity stays on one side of zero at a gap that does not shrink;
//   unknown  otherwise. Pure sampling never produces holds.
//
// Horizons are always explicit. Hints are validated against sampled values up
// to the horizon and a mismatch throws HintViolation.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rnforge/rational.hpp"

namespace rnforge::hyper {

using Index = std::uint64_t;
using Generator = std::function<Rational(Index)>;
using RealRule = std::function<Rational(const Rational&)>;

/// Nonstrict monotonicity from index 1 onwards.
enum class Monotonicity { none, constant, increasing, decreasing };

class Limit {
 public:
  enum class Kind { finite, plus_infinity, minus_infinity };

  static Limit finite(Rational value) { return Limit(Kind::finite, std::move(value)); }
  static Limit plus_infinity() { return Limit(Kind::plus_infinity, 0); }
  static Limit minus_infinity() { return Limit(Kind::minus_infinity, 0); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  /// Only meaningful for finite limits.
  const Rational& value() const noexcept { return value_; }
  /// -1, 0 or +1.
  int sign() const;

  friend bool operator==(const Limit& a, const Limit& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }

 private:
  Limit(Kind kind, Rational value) : kind_(kind), value_(std::move(value)) {}
  Kind kind_;
  Rational value_;
};

struct Hints {
  Monotonicity monotone = Monotonicity::none;
  std::optional<Limit> limit;
  /// x_n != 0 for every n >= nonzero_from.
  std::optional<Index> nonzero_from;
};

class HyperReal {
 public:
  explicit HyperReal(Generator generator, Hints hints = {});

  static HyperReal constant(const Rational& value);
  /// n -> n, increasing to +infinity.
  static HyperReal omega();

  /// x_n; throws PreconditionError for n == 0 and EvaluationError if the
  /// rule throws.
  Rational at(Index n) const;

  const Hints& hints() const noexcept { return hints_; }
  /// Monotone with a declared limit.
  bool certified() const noexcept;

  /// Checks the hints on the sampled indices up to `horizon`.
  void validate(Index horizon) const;

  HyperReal operator-() const;
  friend HyperReal operator+(const HyperReal& x, const HyperReal& y);
  friend HyperReal operator-(const HyperReal& x, const HyperReal& y);
  friend HyperReal operator*(const HyperReal& x, const HyperReal& y);
  /// Throws PreconditionError unless y is justified to be eventually
  /// nonzero (nonzero_from hint, or a certified nonzero limit).
  friend HyperReal operator/(const HyperReal& x, const HyperReal& y);

  HyperReal reciprocal() const;

 private:
  Generator generator_;
  Hints hints_;
};

enum class Op { add, subtract, multiply, divide };

HyperReal arith(const HyperReal& x, const HyperReal& y, Op op);

enum class Outcome { holds, fails, unknown };

struct Verdict {
  Outcome outcome = Outcome::unknown;
  /// Index range supporting the outcome.
  std::optional<std::pair<Index, Index>> window;
  /// Witness points for continuity checks.
  std::optional<std::pair<Rational, Rational>> points;
  std::string reason;
};

enum class Magnitude { infinitesimal, finite, infinite, unknown };

std::string to_string(Outcome outcome);
std::string to_string(Magnitude magnitude);
using rnforge::to_string;

/// Deterministic sample of [lo, hi]: every index when the range is small,
/// otherwise both ends plus pseudorandom indices seeded by the range, at
/// most kMaxSamples in total.
std::vector<Index> sample_indices(Index lo, Index hi);
inline constexpr std::size_t kMaxSamples = 4096;

Magnitude classify(const HyperReal& x, Index horizon);

/// nullopt means unknown. Throws InfiniteValue when x is certified infinite
/// and PreconditionError unless tolerance > 0.
std::optional<Rational> standard_part(const HyperReal& x, const Rational& tolerance, Index horizon);

/// Is x - y infinitesimal?
Verdict infinitely_close(const HyperReal& x, const HyperReal& y, Index horizon);

/// lim seq = a, judged as seq ~ a at every horizon: fails if any horizon
/// fails, holds only if every horizon holds.
Verdict check_limit(const HyperReal& seq, const Rational& a, const std::vector<Index>& horizons);
Verdict check_limit(const Generator& seq, const Rational& a, const std::vector<Index>& horizons);

/// epsilon -> delta with |x - y| <= delta(epsilon) implying |f(x) - f(y)| <= epsilon.
using DeltaModulus = std::function<Rational(const Rational&)>;

/// Uniform continuity of f on [0, 1]. Level k samples the grid i / (grid * 2^k)
/// for every 2^k <= horizon. With a modulus the answer is holds once the
/// modulus survives epsilon = 2^-(k+1) on level k; without one, a jump that
/// stays above 3/4 of its largest size across all levels gives fails with the
/// straddling pair, and anything else is unknown.
Verdict check_uniform_continuity(const RealRule& f, unsigned grid, Index horizon,
                                 const std::optional<DeltaModulus>& modulus = std::nullopt);

}  // namespace rnforge::hyper

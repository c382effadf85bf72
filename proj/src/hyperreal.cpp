#include "rnforge/hyperreal.hpp"

#include <algorithm>

#include "rnforge/error.hpp"

namespace rnforge::hyper {
namespace {

std::optional<Limit> add_limits(const std::optional<Limit>& a, const std::optional<Limit>& b) {
  if (!a || !b) return std::nullopt;
  if (a->is_finite() && b->is_finite()) return Limit::finite(a->value() + b->value());
  if (a->is_finite()) return b;
  if (b->is_finite()) return a;
  if (a->kind() == b->kind()) return a;
  return std::nullopt;
}

std::optional<Limit> negate_limit(const std::optional<Limit>& a) {
  if (!a) return std::nullopt;
  switch (a->kind()) {
    case Limit::Kind::finite:
      return Limit::finite(-a->value());
    case Limit::Kind::plus_infinity:
      return Limit::minus_infinity();
    case Limit::Kind::minus_infinity:
      return Limit::plus_infinity();
  }
  return std::nullopt;
}

Limit infinity_with_sign(int sign) { return sign > 0 ? Limit::plus_infinity() : Limit::minus_infinity(); }

std::optional<Limit> multiply_limits(const std::optional<Limit>& a, const std::optional<Limit>& b) {
  if (!a || !b) return std::nullopt;
  if (a->is_finite() && b->is_finite()) return Limit::finite(a->value() * b->value());
  const int sign = a->sign() * b->sign();
  if (sign == 0) return std::nullopt;  // 0 * infinity
  return infinity_with_sign(sign);
}

Monotonicity flip(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing:
      return Monotonicity::decreasing;
    case Monotonicity::decreasing:
      return Monotonicity::increasing;
    default:
      return m;
  }
}

Monotonicity add_monotone(Monotonicity a, Monotonicity b) {
  if (a == Monotonicity::constant) return b;
  if (b == Monotonicity::constant) return a;
  if (a == b) return a;
  return Monotonicity::none;
}

std::optional<Index> later_of(const std::optional<Index>& a, const std::optional<Index>& b) {
  if (!a || !b) return std::nullopt;
  return std::max(*a, *b);
}

// splitmix64, used only to pick deterministic sample positions.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Index ceil_div(Index a, Index b) { return a / b + (a % b != 0 ? 1 : 0); }

}  // namespace

int Limit::sign() const {
  switch (kind_) {
    case Kind::plus_infinity:
      return 1;
    case Kind::minus_infinity:
      return -1;
    case Kind::finite:
      return sgn(value_);
  }
  return 0;
}

HyperReal::HyperReal(Generator generator, Hints hints)
    : generator_(std::move(generator)), hints_(std::move(hints)) {
  if (!generator_) throw PreconditionError("hyperreal needs a generator");
}

HyperReal HyperReal::constant(const Rational& value) {
  Hints h;
  h.monotone = Monotonicity::constant;
  h.limit = Limit::finite(value);
  if (value != 0) h.nonzero_from = 1;
  return HyperReal([value](Index) { return value; }, std::move(h));
}

HyperReal HyperReal::omega() {
  Hints h;
  h.monotone = Monotonicity::increasing;
  h.limit = Limit::plus_infinity();
  h.nonzero_from = 1;
  return HyperReal([](Index n) { return from_index(n); }, std::move(h));
}

Rational HyperReal::at(Index n) const {
  if (n == 0) throw PreconditionError("hyperreal indices start at 1");
  try {
    return generator_(n);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError("generator failed at index " + std::to_string(n) + ": " + e.what());
  }
}

bool HyperReal::certified() const noexcept {
  return hints_.monotone != Monotonicity::none && hints_.limit.has_value();
}

void HyperReal::validate(Index horizon) const {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  const auto indices = sample_indices(1, horizon);
  std::vector<Rational> values;
  values.reserve(indices.size());
  for (Index n : indices) values.push_back(at(n));

  auto violation = [](const std::string& what, Index n) {
    throw HintViolation(what + " hint contradicted at index " + std::to_string(n));
  };
  for (std::size_t i = 1; i < values.size(); ++i) {
    switch (hints_.monotone) {
      case Monotonicity::constant:
        if (values[i] != values[0]) violation("constant", indices[i]);
        break;
      case Monotonicity::increasing:
        if (values[i] < values[i - 1]) violation("increasing", indices[i]);
        break;
      case Monotonicity::decreasing:
        if (values[i] > values[i - 1]) violation("decreasing", indices[i]);
        break;
      case Monotonicity::none:
        break;
    }
  }
  if (hints_.limit && hints_.monotone != Monotonicity::none) {
    const Limit& lim = *hints_.limit;
    const bool up = hints_.monotone == Monotonicity::increasing;
    const bool down = hints_.monotone == Monotonicity::decreasing;
    if ((up && lim.kind() == Limit::Kind::minus_infinity) ||
        (down && lim.kind() == Limit::Kind::plus_infinity) ||
        (hints_.monotone == Monotonicity::constant && !lim.is_finite())) {
      violation("limit", 1);
    }
    if (lim.is_finite()) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        if ((up && values[i] > lim.value()) || (down && values[i] < lim.value()) ||
            (hints_.monotone == Monotonicity::constant && values[i] != lim.value())) {
          violation("limit", indices[i]);
        }
      }
    }
  }
  if (hints_.nonzero_from) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (indices[i] >= *hints_.nonzero_from && values[i] == 0) violation("nonzero", indices[i]);
    }
  }
}

HyperReal HyperReal::operator-() const {
  Hints h;
  h.monotone = flip(hints_.monotone);
  h.limit = negate_limit(hints_.limit);
  h.nonzero_from = hints_.nonzero_from;
  auto g = generator_;
  return HyperReal([g](Index n) { return Rational(-g(n)); }, std::move(h));
}

HyperReal operator+(const HyperReal& x, const HyperReal& y) {
  Hints h;
  h.monotone = add_monotone(x.hints_.monotone, y.hints_.monotone);
  h.limit = add_limits(x.hints_.limit, y.hints_.limit);
  auto gx = x.generator_;
  auto gy = y.generator_;
  return HyperReal([gx, gy](Index n) { return Rational(gx(n) + gy(n)); }, std::move(h));
}

HyperReal operator-(const HyperReal& x, const HyperReal& y) { return x + (-y); }

HyperReal operator*(const HyperReal& x, const HyperReal& y) {
  Hints h;
  h.limit = multiply_limits(x.hints_.limit, y.hints_.limit);
  h.nonzero_from = later_of(x.hints_.nonzero_from, y.hints_.nonzero_from);

  const auto mx = x.hints_.monotone;
  const auto my = y.hints_.monotone;
  if (mx == Monotonicity::constant || my == Monotonicity::constant) {
    const bool x_const = mx == Monotonicity::constant;
    const int c = sgn(x_const ? x.at(1) : y.at(1));
    const auto other = x_const ? my : mx;
    if (c == 0) {
      h.monotone = Monotonicity::constant;
      h.limit = Limit::finite(0);
    } else {
      h.monotone = c > 0 ? other : flip(other);
    }
  } else if (mx == Monotonicity::increasing && my == Monotonicity::increasing && x.at(1) >= 0 &&
             y.at(1) >= 0) {
    h.monotone = Monotonicity::increasing;
  } else if (mx == Monotonicity::decreasing && my == Monotonicity::decreasing && x.hints_.limit &&
             y.hints_.limit && x.hints_.limit->is_finite() && y.hints_.limit->is_finite() &&
             x.hints_.limit->value() >= 0 && y.hints_.limit->value() >= 0) {
    h.monotone = Monotonicity::decreasing;
  }
  auto gx = x.generator_;
  auto gy = y.generator_;
  return HyperReal([gx, gy](Index n) { return Rational(gx(n) * gy(n)); }, std::move(h));
}

HyperReal HyperReal::reciprocal() const {
  const bool limit_nonzero = certified() && hints_.limit->sign() != 0;
  if (!hints_.nonzero_from && !limit_nonzero) {
    throw PreconditionError("division needs a divisor that is certified eventually nonzero");
  }
  Hints h;
  if (hints_.limit) {
    if (!hints_.limit->is_finite()) {
      h.limit = Limit::finite(0);
    } else if (hints_.limit->value() != 0) {
      h.limit = Limit::finite(1 / hints_.limit->value());
    }
  }
  h.nonzero_from = hints_.nonzero_from;

  // Monotonicity survives inversion when every term has the limit's sign.
  if (hints_.monotone == Monotonicity::constant) {
    h.monotone = Monotonicity::constant;
  } else if (limit_nonzero) {
    const int s = hints_.limit->sign();
    const bool finite = hints_.limit->is_finite();
    const int first = sgn(at(1));
    const bool up = hints_.monotone == Monotonicity::increasing;
    const bool down = hints_.monotone == Monotonicity::decreasing;
    bool same_sign = false;
    if (s > 0) same_sign = (up && first > 0) || (down && finite);
    if (s < 0) same_sign = (down && first < 0) || (up && finite);
    if (same_sign) {
      h.monotone = flip(hints_.monotone);
      h.nonzero_from = 1;
    }
  }
  auto g = generator_;
  return HyperReal(
      [g](Index n) {
        const Rational v = g(n);
        return v == 0 ? Rational(0) : Rational(1 / v);
      },
      std::move(h));
}

HyperReal operator/(const HyperReal& x, const HyperReal& y) { return x * y.reciprocal(); }

HyperReal arith(const HyperReal& x, const HyperReal& y, Op op) {
  switch (op) {
    case Op::add:
      return x + y;
    case Op::subtract:
      return x - y;
    case Op::multiply:
      return x * y;
    case Op::divide:
      return x / y;
  }
  throw PreconditionError("unknown operation");
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::holds:
      return "holds";
    case Outcome::fails:
      return "fails";
    case Outcome::unknown:
      return "unknown";
  }
  return "unknown";
}

std::string to_string(Magnitude magnitude) {
  switch (magnitude) {
    case Magnitude::infinitesimal:
      return "infinitesimal";
    case Magnitude::finite:
      return "finite";
    case Magnitude::infinite:
      return "infinite";
    case Magnitude::unknown:
      return "unknown";
  }
  return "unknown";
}

std::vector<Index> sample_indices(Index lo, Index hi) {
  std::vector<Index> out;
  if (lo == 0) lo = 1;
  if (hi < lo) return out;
  const Index span = hi - lo + 1;
  if (span <= kMaxSamples) {
    out.reserve(span);
    for (Index n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  // Pseudo-random positions defeat periodic sign patterns that an evenly
  // spaced stride could alias with.
  out.reserve(kMaxSamples);
  out.push_back(lo);
  out.push_back(hi);
  std::uint64_t state = mix(lo ^ mix(hi));
  while (out.size() < kMaxSamples) {
    state = mix(state);
    out.push_back(lo + state % span);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Magnitude classify(const HyperReal& x, Index horizon) {
  x.validate(horizon);
  if (!x.certified()) return Magnitude::unknown;
  const Limit& lim = *x.hints().limit;
  if (!lim.is_finite()) return Magnitude::infinite;
  return lim.value() == 0 ? Magnitude::infinitesimal : Magnitude::finite;
}

std::optional<Rational> standard_part(const HyperReal& x, const Rational& tolerance, Index horizon) {
  if (tolerance <= 0) throw PreconditionError("standard part needs a positive tolerance");
  if (classify(x, horizon) == Magnitude::infinite) {
    throw InfiniteValue("infinite hyperreal has no standard part");
  }
  if (x.certified()) {
    const Rational& limit = x.hints().limit->value();
    if (abs(x.at(horizon) - limit) < tolerance) return limit;
    return std::nullopt;
  }
  if (horizon < 2) return std::nullopt;
  const auto window = sample_indices(ceil_div(horizon, 2), horizon);
  Rational lo = x.at(window.front());
  Rational hi = lo;
  for (Index n : window) {
    const Rational v = x.at(n);
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (hi - lo < tolerance) return x.at(horizon);
  return std::nullopt;
}

Verdict infinitely_close(const HyperReal& x, const HyperReal& y, Index horizon) {
  x.validate(horizon);
  y.validate(horizon);
  const HyperReal d = x - y;
  d.validate(horizon);

  if (d.certified()) {
    const Limit& lim = *d.hints().limit;
    if (lim.is_finite() && lim.value() == 0) {
      return {Outcome::holds, std::pair<Index, Index>{1, horizon}, std::nullopt,
              "difference is monotone with limit 0"};
    }
    // From the first index where d is past half its limit (or past 1 for an
    // infinite limit), monotonicity keeps it there.
    Verdict v{Outcome::fails, std::nullopt, std::nullopt,
              lim.is_finite() ? "difference is monotone with limit " + to_string(lim.value())
                              : std::string("difference is monotone and unbounded")};
    const Rational gap = lim.is_finite() ? Rational(abs(lim.value()) / 2) : Rational(1);
    for (Index n : sample_indices(1, horizon)) {
      const Rational dn = d.at(n);
      const bool past = lim.is_finite() ? abs(dn - lim.value()) <= gap
                                        : (abs(dn) >= gap && sgn(dn) == lim.sign());
      if (past) {
        v.window = std::pair<Index, Index>{n, horizon};
        break;
      }
    }
    return v;
  }

  if (horizon < 4) return {Outcome::unknown, std::nullopt, std::nullopt, "horizon too short to sample"};
  const Index quarter = ceil_div(horizon, 4);
  const Index half = ceil_div(horizon, 2);
  int sign = 0;
  bool stable = true;
  auto scan = [&](Index lo, Index hi) {
    Rational gap = -1;
    for (Index n : sample_indices(lo, hi)) {
      const Rational v = d.at(n);
      const int s = sgn(v);
      if (s == 0 || (sign != 0 && s != sign)) {
        stable = false;
        return gap;
      }
      sign = s;
      if (gap < 0 || abs(v) < gap) gap = abs(v);
    }
    return gap;
  };
  const Rational early = scan(quarter, half);
  const Rational late = stable ? scan(half, horizon) : Rational(-1);
  if (stable && late > 0 && 4 * late >= 3 * early) {
    return {Outcome::fails, std::pair<Index, Index>{quarter, horizon}, std::nullopt,
            "difference keeps one sign with gap at least " + to_string(late)};
  }
  return {Outcome::unknown, std::nullopt, std::nullopt, "no certificate and no stable gap"};
}

Verdict check_limit(const HyperReal& seq, const Rational& a, const std::vector<Index>& horizons) {
  if (horizons.empty()) throw PreconditionError("check_limit needs at least one horizon");
  const HyperReal target = HyperReal::constant(a);
  bool all_hold = true;
  Verdict last;
  for (Index h : horizons) {
    Verdict v = infinitely_close(seq, target, h);
    if (v.outcome == Outcome::fails) return v;
    if (v.outcome != Outcome::holds) all_hold = false;
    last = std::move(v);
  }
  if (all_hold) return last;
  return {Outcome::unknown, std::nullopt, std::nullopt, "not certified at every horizon"};
}

Verdict check_limit(const Generator& seq, const Rational& a, const std::vector<Index>& horizons) {
  return check_limit(HyperReal(seq), a, horizons);
}

Verdict check_uniform_continuity(const RealRule& f, unsigned grid, Index horizon,
                                 const std::optional<DeltaModulus>& modulus) {
  if (grid < 2) throw PreconditionError("uniform continuity check needs grid >= 2");
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");

  auto eval = [&f](const Rational& x) {
    try {
      return f(x);
    } catch (const std::exception& e) {
      throw EvaluationError("f is not evaluable at " + to_string(x) + ": " + e.what());
    }
  };

  // Levels stop at the horizon or where grid * 2^k would overflow.
  std::vector<Index> sizes;
  for (Index step = 1; step <= horizon && step <= (Index{1} << 40); step *= 2) sizes.push_back(grid * step);

  if (modulus) {
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const Index m = sizes[k];
      const Rational eps = 1 / pow2(static_cast<unsigned>(k + 1));
      const Rational delta = (*modulus)(eps);
      if (delta <= 0) throw HintViolation("modulus returned a nonpositive delta");
      for (Index i = 0; i <= m; ++i) {
        const Rational x = from_index(i) / from_index(m);
        const Rational fx = eval(x);
        for (const Rational& y : {Rational(x + delta), Rational(x - delta)}) {
          if (y < 0 || y > 1) continue;
          if (abs(eval(y) - fx) > eps) {
            throw HintViolation("declared modulus violated at " + to_string(x) + ", " + to_string(y));
          }
        }
      }
    }
    return {Outcome::holds, std::pair<Index, Index>{1, horizon}, std::nullopt,
            "declared modulus validated on the sample grid"};
  }

  Rational largest = 0;
  Rational smallest = -1;
  std::pair<Rational, Rational> pair;
  for (const Index m : sizes) {
    Rational jump = 0;
    std::pair<Rational, Rational> where;
    Rational prev = eval(Rational(0));
    for (Index i = 1; i <= m; ++i) {
      const Rational x = from_index(i) / from_index(m);
      const Rational fx = eval(x);
      if (abs(fx - prev) > jump) {
        jump = abs(fx - prev);
        where = {from_index(i - 1) / from_index(m), x};
      }
      prev = fx;
    }
    if (jump > largest) largest = jump;
    if (smallest < 0 || jump < smallest) smallest = jump;
    pair = where;
  }
  if (sizes.size() >= 2 && largest > 0 && 4 * smallest >= 3 * largest) {
    return {Outcome::fails, std::pair<Index, Index>{1, horizon}, pair,
            "adjacent samples stay " + to_string(smallest) + " apart as the spacing shrinks"};
  }
  return {Outcome::unknown, std::nullopt, std::nullopt, "sampling cannot certify continuity"};
}

}  // namespace rnforge::hyper

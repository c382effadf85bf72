#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rnforge {

/// Exact rational number. Every measure, density value and hyperreal sample
/// in this library is one of these; nothing is ever rounded.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" or "p" (optional leading '-', decimal digits, q > 0).
/// The result is canonicalized. Throws InputError on anything else,
/// including decimal points and exponents.
Rational parse_rational(std::string_view text);

/// Like parse_rational, but also accepts exact decimal and scientific
/// notation ("0.25", "1e-6", "-3.5E2"). Used for tolerances, never for
/// measure weights.
Rational parse_rational_or_decimal(std::string_view text);

/// Canonical "p/q" form; the denominator is always printed ("4/1").
std::string to_string(const Rational& value);

Rational abs(const Rational& value);

/// floor(value) as an integer.
Integer floor(const Rational& value);

/// 2^n as an exact rational.
Rational pow2(unsigned n);

/// Rational from an index without going through a double.
inline Rational from_index(std::uint64_t n) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
  return Rational(z);
}

/// Nearest double, for human-facing diagnostics only.
inline double approx(const Rational& value) { return value.get_d(); }

}  // namespace rnforge

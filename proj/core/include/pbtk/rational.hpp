#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace pbtk {

/// Exact rational number. All budget, score, payment and metric arithmetic
/// in the library runs on this type; conversion to decimal happens only at
/// report emission.
using Rational = mpq_class;

/// Builds num/den in canonical form. `den` must be non-zero.
Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Parses a plain decimal literal ("12", "-3", "2.50", ".5") exactly.
/// Throws pbtk::Error(InvalidNumber) on anything else.
Rational parse_decimal(std::string_view text);

/// Parses a non-negative integer literal. A fractional part consisting only
/// of zeros ("1000.00") is accepted; any other fractional value is rejected.
std::int64_t parse_integer(std::string_view text);

/// Fixed-point rendering with `places` decimals, rounding half away from zero.
std::string to_fixed(const Rational& value, int places = 6);

/// Shortest exact decimal rendering of a value whose denominator has only the
/// prime factors 2 and 5 (every value produced by parse_decimal). Falls back to
/// "num/den" for other values.
std::string to_decimal_string(const Rational& value);

double to_double(const Rational& value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace pbtk

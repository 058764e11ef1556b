#include "pbtk/rational.hpp"

#include "pbtk/errors.hpp"

#include <cctype>
#include <limits>

namespace pbtk {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational out(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  out.canonicalize();
  return out;
}

Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  std::size_t fraction_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      throw Error(ErrorCode::InvalidNumber, "not a decimal number: '" + original + "'");
    }
  }
  if (digits.empty()) {
    throw Error(ErrorCode::InvalidNumber, "not a decimal number: '" + original + "'");
  }
  mpz_class numerator(digits, 10);
  mpz_class denominator;
  mpz_ui_pow_ui(denominator.get_mpz_t(), 10, fraction_digits);
  Rational out(numerator, denominator);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::int64_t parse_integer(std::string_view text) {
  const Rational value = parse_decimal(text);
  if (value.get_den() != 1) {
    throw Error(ErrorCode::InvalidNumber,
                "expected an integer, got fractional value '" + std::string(text) + "'");
  }
  if (value < 0) {
    throw Error(ErrorCode::InvalidNumber, "expected a non-negative integer, got '" +
                                              std::string(text) + "'");
  }
  const mpz_class& num = value.get_num();
  if (!num.fits_slong_p()) {
    throw Error(ErrorCode::InvalidNumber, "integer out of range: '" + std::string(text) + "'");
  }
  return static_cast<std::int64_t>(num.get_si());
}

std::string to_fixed(const Rational& value, int places) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  const Rational magnitude = abs(value) * scale;
  // floor(magnitude + 1/2)
  mpz_class rounded = (2 * magnitude.get_num() + magnitude.get_den()) / (2 * magnitude.get_den());
  std::string digits = rounded.get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  const bool negative = value < 0 && rounded != 0;
  return negative ? "-" + digits : digits;
}

std::string to_decimal_string(const Rational& value) {
  mpz_class den = value.get_den();
  std::size_t twos = 0;
  std::size_t fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return value.get_str();
  const int places = static_cast<int>(std::max(twos, fives));
  std::string out = to_fixed(value, places);
  if (places > 0) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return out;
}

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace pbtk

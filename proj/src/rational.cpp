#include "pcsmaa/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "pcsmaa/error.hpp"

namespace pcsmaa {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(Errc::Schema, "not a number: '" + std::string(text) + "'");
}

// Parses an optionally signed decimal (digits, optional fraction, optional
// exponent) into an exact fraction.
Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  __int128 mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool in_fraction = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (in_fraction) bad_number(text);
      in_fraction = true;
      continue;
    }
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') bad_number(text);
    any_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (in_fraction) --scale;
    if (mantissa > (static_cast<__int128>(1) << 100)) {
      throw Error(Errc::Overflow, "number has too many digits: '" +
                                      std::string(text) + "'");
    }
  }
  if (!any_digit) bad_number(text);
  if (pos < text.size()) {
    int exponent = 0;
    const auto* first = text.data() + pos + 1;
    const auto* last = text.data() + text.size();
    if (first < last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc{} || ptr != last) bad_number(text);
    scale += exponent;
  }
  __int128 numerator = negative ? -mantissa : mantissa;
  __int128 denominator = 1;
  while (scale > 0) {
    numerator *= 10;
    if (!fits64(numerator)) throw Error(Errc::Overflow, "number too large");
    --scale;
  }
  // Cancel trailing zeros before scaling the denominator.
  while (scale < 0 && numerator % 10 == 0 && numerator != 0) {
    numerator /= 10;
    ++scale;
  }
  while (scale < 0) {
    denominator *= 10;
    if (!fits64(denominator)) throw Error(Errc::Overflow, "number too precise");
    ++scale;
  }
  const __int128 g = gcd128(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  if (!fits64(numerator) || !fits64(denominator)) {
    throw Error(Errc::Overflow, "number out of range: '" + std::string(text) + "'");
  }
  return Rational(static_cast<std::int64_t>(numerator),
                  static_cast<std::int64_t>(denominator));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw Error(Errc::Schema, "zero denominator");
  *this = from_wide(numerator, denominator);
}

Rational Rational::from_wide(__int128 numerator, __int128 denominator) {
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const __int128 g = gcd128(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  if (!fits64(numerator) || !fits64(denominator)) {
    throw Error(Errc::Overflow, "rational arithmetic overflow");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(numerator);
  r.den_ = static_cast<std::int64_t>(denominator);
  return r;
}

Rational Rational::reciprocal() const {
  if (num_ == 0) throw Error(Errc::NonPositiveEntry, "reciprocal of zero");
  return from_wide(den_, num_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(
      static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
      static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(Errc::NonPositiveEntry, "division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_,
                             static_cast<__int128>(a.den_) * b.num_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad_number(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational numerator = parse_decimal(trim(text.substr(0, slash)));
  const Rational denominator = parse_decimal(trim(text.substr(slash + 1)));
  if (denominator.num_ == 0) throw Error(Errc::Schema, "zero denominator in '" + std::string(text) + "'");
  return numerator / denominator;
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw Error(Errc::Schema, "non-finite number");
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error(Errc::Schema, "unprintable number");
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

}  // namespace pcsmaa

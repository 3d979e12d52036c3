#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace pcsmaa {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact fraction over 64-bit integers, always kept in lowest terms with a
// positive denominator. Arithmetic throws Error(Overflow) instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT
  Rational(std::int64_t numerator, std::int64_t denominator);

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }

  bool is_positive() const noexcept { return num_ > 0; }
  Rational reciprocal() const;
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  BigRational to_big() const { return BigRational(num_, den_); }

  // "p/q", or "p" when the denominator is 1.
  std::string to_string() const;

  // Accepts "p", "p/q", and decimal notation such as "0.25" or "-1.5e-1".
  static Rational parse(std::string_view text);
  // Exact value of the shortest decimal that round-trips to `value`, so a
  // JSON 0.2 becomes 1/5 rather than the binary approximation.
  static Rational from_double(double value);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) noexcept {
    const auto lhs = static_cast<__int128>(a.num_) * b.den_;
    const auto rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  static Rational from_wide(__int128 numerator, __int128 denominator);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace pcsmaa

#include <gtest/gtest.h>

#include <cstdint>
#include <limits>

#include "pcsmaa/error.hpp"
#include "pcsmaa/rational.hpp"

using pcsmaa::Errc;
using pcsmaa::Error;
using pcsmaa::Rational;

TEST(Rational, Reduces) {
  const Rational r(6, -4);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(Rational(0, 7), Rational(0));
}

TEST(Rational, ZeroDenominatorThrows) { EXPECT_THROW(Rational(1, 0), Error); }

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) - Rational(1, 2), Rational(-1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_EQ(Rational(5, 7).reciprocal(), Rational(7, 5));
  EXPECT_THROW(Rational(0).reciprocal(), Error);
}

TEST(Rational, Ordering) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  EXPECT_EQ(Rational(2, 4) <=> Rational(1, 2), std::strong_ordering::equal);
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("1/3"), Rational(1, 3));
  EXPECT_EQ(Rational::parse(" 2/6 "), Rational(1, 3));
  EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("-1.5e-1"), Rational(-3, 20));
  EXPECT_THROW(Rational::parse("abc"), Error);
  EXPECT_THROW(Rational::parse("1/0"), Error);
  EXPECT_THROW(Rational::parse(""), Error);
}

TEST(Rational, FromDoubleUsesShortestDecimal) {
  EXPECT_EQ(Rational::from_double(0.2), Rational(1, 5));
  EXPECT_EQ(Rational::from_double(3.0), Rational(3));
  EXPECT_EQ(Rational::from_double(0.125), Rational(1, 8));
}

TEST(Rational, ToString) {
  EXPECT_EQ(Rational(4).to_string(), "4");
  EXPECT_EQ(Rational(1, 4).to_string(), "1/4");
  EXPECT_EQ(Rational(-2, 6).to_string(), "-1/3");
}

TEST(Rational, OverflowIsReported) {
  const Rational big(std::numeric_limits<std::int64_t>::max());
  try {
    (void)(big * Rational(2));
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Overflow);
  }
  // Cross products that overflow 64 bits but reduce back are fine.
  const Rational a(1, 3'000'000'000LL);
  EXPECT_EQ(a * Rational(3'000'000'000LL), Rational(1));
}

TEST(Rational, ToBigAndDouble) {
  EXPECT_EQ(Rational(3, 8).to_big(), pcsmaa::BigRational(3, 8));
  EXPECT_DOUBLE_EQ(Rational(3, 8).to_double(), 0.375);
}

//
// Copyright 2026 The privopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privopt/rational.hpp"

#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

namespace privopt {
namespace {

TEST(ParseRational, AcceptsFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-3/9"), Rational(-1, 3));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("1.5"), Rational(3, 2));
  EXPECT_EQ(parse_rational("0.01"), Rational(1, 100));
  EXPECT_EQ(parse_rational(".25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("0.10"), Rational(1, 10));
  EXPECT_EQ(parse_rational("010/3"), Rational(10, 3));
  EXPECT_EQ(parse_rational("0.0625"), Rational(1, 16));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
  EXPECT_EQ(parse_rational("  1/3 "), Rational(1, 3));
}

TEST(ParseRational, RejectsMalformedInput) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", "1e", "--1", "1/2/3", "0x10", "nan"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
}

TEST(RationalText, CanonicalLowestTerms) {
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(to_string(Rational(6, 3)), "2");
  EXPECT_EQ(to_string(Rational(0, 5)), "0");
  EXPECT_EQ(to_string(Rational(-1, 48)), "-1/48");
}

TEST(RationalText, RoundTripsRandomValues) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<long> den(1, 100000);
  for (int k = 0; k < 500; ++k) {
    const Rational q(num(rng), den(rng));
    EXPECT_EQ(parse_rational(to_string(q)), q);
  }
}

TEST(Rationalize, NearestWithDecimalDenominator) {
  const Real third = to_real(Rational(1, 3));
  const Rational q = rationalize(third, 10);
  EXPECT_EQ(q, Rational(3333333333, 10000000000));
  const Real root = boost::multiprecision::sqrt(Real(2));
  const Rational r = rationalize(root, 40);
  EXPECT_LT(boost::multiprecision::abs(to_real(r) - root), Real("1e-40"));
}

TEST(RationalPow, IntegerExponents) {
  EXPECT_EQ(pow(Rational(1, 2), 0), Rational(1));
  EXPECT_EQ(pow(Rational(1, 2), 5), Rational(1, 32));
  EXPECT_EQ(pow(Rational(-2, 3), 3), Rational(-8, 27));
}

TEST(Precision, DefaultIsSixtyFourDigits) {
  EXPECT_EQ(kDefaultPrecisionDigits, 64U);
  EXPECT_EQ(real_precision(), kDefaultPrecisionDigits);
  // 1/3 is carried to well beyond double precision.
  const Real diff = to_real(Rational(1, 3)) * 3 - 1;
  EXPECT_LT(boost::multiprecision::abs(diff), Real("1e-60"));
}

TEST(Precision, EnvironmentOverride) {
  ASSERT_EQ(setenv("PRIVOPT_PRECISION", "80", 1), 0);
  EXPECT_EQ(apply_precision_from_env(), 80U);
  ASSERT_EQ(setenv("PRIVOPT_PRECISION", "eighty", 1), 0);
  EXPECT_THROW(apply_precision_from_env(), std::invalid_argument);
  unsetenv("PRIVOPT_PRECISION");
  set_real_precision(kDefaultPrecisionDigits);
  EXPECT_EQ(real_precision(), kDefaultPrecisionDigits);
  EXPECT_THROW(set_real_precision(3), std::invalid_argument);
}

TEST(DecimalText, ShortValuesPrintExactly) {
  EXPECT_EQ(to_decimal_string(to_real(Rational(1, 4))), "0.25");
  EXPECT_EQ(to_decimal_string(Real(5)), "5");
}

}  // namespace
}  // namespace privopt

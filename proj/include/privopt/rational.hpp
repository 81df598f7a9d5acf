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

#ifndef PRIVOPT_RATIONAL_HPP_
#define PRIVOPT_RATIONAL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace privopt {

// Exact rational scalar. GMP keeps every value in lowest terms with a
// positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Variable-precision real used for irrational loss values (e.g. |i-r|^1.5).
using Real = boost::multiprecision::mpfr_float;

using RationalMatrix = std::vector<std::vector<Rational>>;

constexpr unsigned kDefaultPrecisionDigits = 64;

// Sets the process-wide default precision (decimal digits) for Real values.
// Must be called before worker threads are started.
void set_real_precision(unsigned digits10);
unsigned real_precision();

// Applies PRIVOPT_PRECISION from the environment when present. Returns the
// precision in effect afterwards.
unsigned apply_precision_from_env();

// Parses "p/q", "p", "-p/q" or a finite decimal such as "1.5" or "0.01".
// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical lowest-terms form: "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

Real to_real(const Rational& value);

// Nearest rational with denominator 10^digits10.
Rational rationalize(const Real& value, unsigned digits10);

// base^exponent for a non-negative integer exponent.
Rational pow(const Rational& base, unsigned exponent);

Rational abs(const Rational& value);

// Decimal rendering of a Real with the given number of significant digits.
std::string to_decimal_string(const Real& value, int digits = 20);

}  // namespace privopt

#endif  // PRIVOPT_RATIONAL_HPP_

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

#include <cctype>
#include <cstdlib>
#include <ios>
#include <stdexcept>

namespace privopt {

static_assert(BOOST_MULTIPRECISION_MPFR_DEFAULT_PRECISION == kDefaultPrecisionDigits,
              "build must define the default Real precision as kDefaultPrecisionDigits");

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Base-10 digits; Integer's string constructor reads a leading 0 as octal.
Integer decimal_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer(std::string(digits));
}

Integer pow10(unsigned k) {
  Integer result = 1;
  for (unsigned i = 0; i < k; ++i) result *= 10;
  return result;
}

[[noreturn]] void malformed(std::string_view text) {
  throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) malformed(text);
    exponent = std::strtol(std::string(exp_part).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
    body = body.substr(0, e);
  }
  std::string_view whole = body;
  std::string_view frac;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    whole = body.substr(0, dot);
    frac = body.substr(dot + 1);
  }
  if (whole.empty() && frac.empty()) malformed(text);
  if (!whole.empty() && !all_digits(whole)) malformed(text);
  if (!frac.empty() && !all_digits(frac)) malformed(text);

  const Integer mantissa = decimal_integer(std::string(whole.empty() ? "0" : whole) + std::string(frac));
  exponent -= static_cast<long>(frac.size());
  Rational value(mantissa);
  if (exponent > 0) value *= Rational(pow10(static_cast<unsigned>(exponent)));
  if (exponent < 0) value /= Rational(pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-value) : value;
}

}  // namespace

void set_real_precision(unsigned digits10) {
  if (digits10 < 10) throw std::invalid_argument("precision must be at least 10 digits");
  Real::default_precision(digits10);
}

unsigned real_precision() { return Real::default_precision(); }

unsigned apply_precision_from_env() {
  if (const char* env = std::getenv("PRIVOPT_PRECISION"); env != nullptr && *env != '\0') {
    std::string_view value(env);
    if (!all_digits(value)) {
      throw std::invalid_argument("PRIVOPT_PRECISION must be a positive integer");
    }
    set_real_precision(static_cast<unsigned>(std::strtoul(env, nullptr, 10)));
  }
  return real_precision();
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) malformed(text);

  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);

  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  bool negative = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    negative = num.front() == '-';
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den)) malformed(text);
  const Integer q = decimal_integer(den);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational value(decimal_integer(num), q);
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

Real to_real(const Rational& value) {
  Real num(numerator(value));
  Real den(denominator(value));
  return num / den;
}

Rational rationalize(const Real& value, unsigned digits10) {
  Integer scale = pow10(digits10);
  Real scaled = value * Real(scale);
  Integer rounded;
  mpfr_get_z(rounded.backend().data(), scaled.backend().data(), MPFR_RNDN);
  return Rational(rounded, scale);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational square = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= square;
    exponent >>= 1U;
    if (exponent != 0) square *= square;
  }
  return result;
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

std::string to_decimal_string(const Real& value, int digits) {
  return value.str(digits, std::ios_base::fmtflags(0));
}

}  // namespace privopt

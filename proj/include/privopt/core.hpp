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

#ifndef PRIVOPT_CORE_HPP_
#define PRIVOPT_CORE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privopt/rational.hpp"

namespace privopt {

// Inconsistent dimensions, label sets or malformed matrices.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument outside an operation's mathematical domain (e.g. alpha = 1
// where a strict privacy level is required).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested enumeration exceeds the configured size guard.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Privacy level alpha in [0, 1]. Larger alpha means more privacy.
class PrivacyLevel {
 public:
  explicit PrivacyLevel(Rational alpha);
  static PrivacyLevel parse(std::string_view text) { return PrivacyLevel(parse_rational(text)); }

  const Rational& alpha() const { return alpha_; }

  // alpha in {0, 1}: no optimization path accepts these.
  bool is_degenerate() const { return alpha_ == 0 || alpha_ == 1; }

  // Throws PreconditionError unless 0 < alpha < 1.
  void require_interior(std::string_view operation) const;

  friend bool operator==(const PrivacyLevel&, const PrivacyLevel&) = default;

 private:
  Rational alpha_;
};

/**
 * A finite oblivious mechanism: rows are query results 0..n, columns are
 * response labels. Entry (i, c) is the probability of emitting
 * responses()[c] when the true count is i.
 *
 * Construction only checks shape; stochasticity and privacy are checked by
 * check_row_stochastic and check_differential_privacy.
 */
class Mechanism {
 public:
  Mechanism(int n, std::vector<int> responses, RationalMatrix rows);

  // Noiseless release over the canonical range 0..n.
  static Mechanism identity(int n);

  int n() const { return n_; }
  std::size_t num_results() const { return rows_.size(); }
  std::size_t num_responses() const { return responses_.size(); }
  const std::vector<int>& responses() const { return responses_; }
  const RationalMatrix& rows() const { return rows_; }
  const Rational& at(std::size_t result, std::size_t column) const { return rows_[result][column]; }

  std::optional<std::size_t> column_of(int label) const;

  // True when the responses are exactly 0..n in order.
  bool has_canonical_range() const;

  friend bool operator==(const Mechanism&, const Mechanism&) = default;

 private:
  int n_;
  std::vector<int> responses_;
  RationalMatrix rows_;
};

/**
 * A loss value: exact when every contributing loss entry is rational,
 * otherwise a high-precision real. `value` is always populated.
 */
struct LossValue {
  std::optional<Rational> exact;
  Real value;

  static LossValue of(const Rational& q) { return LossValue{q, to_real(q)}; }
  static LossValue of(const Real& r) { return LossValue{std::nullopt, r}; }

  bool is_exact() const { return exact.has_value(); }
  std::string to_string() const;
};

LossValue operator+(const LossValue& a, const LossValue& b);
LossValue operator*(const Rational& weight, const LossValue& v);

// Exact comparison when both sides are exact, otherwise |a - b| <= tolerance.
bool loss_equal(const LossValue& a, const LossValue& b, const Real& tolerance);
// a < b, with the same exact/tolerance split (a must undercut b by more than
// the tolerance when either side is inexact).
bool loss_less(const LossValue& a, const LossValue& b, const Real& tolerance);
Real loss_difference(const LossValue& a, const LossValue& b);

// Default comparison tolerance for inexact losses: 10^-30.
Real default_loss_tolerance();

enum class LossKind { kAbsolute, kSquared, kBinary, kPower, kTabulated };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);

/**
 * User loss l(i, r) >= 0, non-decreasing in |i - r| for every fixed i.
 * Power losses |i - r|^p are exact when p is an integer and evaluated at
 * the current Real precision otherwise.
 */
class LossFunction {
 public:
  static LossFunction absolute();
  static LossFunction squared();
  static LossFunction binary();
  static LossFunction power(Rational exponent);
  // table[i][r]; checked for non-negativity and monotonicity.
  static LossFunction tabulated(RationalMatrix table);

  LossKind kind() const { return kind_; }
  const Rational& exponent() const { return exponent_; }
  const RationalMatrix& table() const { return table_; }

  bool is_rational() const;

  // Throws PreconditionError when the loss is not rational-valued.
  Rational exact(int result, int response) const;
  Real real(int result, int response) const;
  LossValue value(int result, int response) const;

  friend bool operator==(const LossFunction&, const LossFunction&) = default;

 private:
  LossFunction(LossKind kind, Rational exponent, RationalMatrix table)
      : kind_(kind), exponent_(std::move(exponent)), table_(std::move(table)) {}

  LossKind kind_;
  Rational exponent_;
  RationalMatrix table_;
};

/// Prior over results 0..n plus a loss function.
class UserModel {
 public:
  UserModel(std::vector<Rational> prior, LossFunction loss);

  static UserModel uniform(int n, LossFunction loss);

  int n() const { return static_cast<int>(prior_.size()) - 1; }
  const std::vector<Rational>& prior() const { return prior_; }
  const LossFunction& loss() const { return loss_; }

  friend bool operator==(const UserModel&, const UserModel&) = default;

 private:
  std::vector<Rational> prior_;
  LossFunction loss_;
};

/**
 * Row-stochastic reinterpretation: entry (a, b) is the probability that
 * source response sources()[a] is read as target response targets()[b].
 */
class Remap {
 public:
  Remap(std::vector<int> sources, std::vector<int> targets, RationalMatrix rows);

  // image[a] is the target label that source a maps to.
  static Remap deterministic(std::vector<int> sources, std::vector<int> targets,
                             const std::vector<int>& image);
  static Remap identity(const std::vector<int>& labels);

  const std::vector<int>& sources() const { return sources_; }
  const std::vector<int>& targets() const { return targets_; }
  const RationalMatrix& rows() const { return rows_; }

  bool is_deterministic() const { return deterministic_; }

  // Target label per source; empty when randomized.
  std::optional<std::vector<int>> as_map() const;

  // Deterministic and a bijection between equal label sets.
  bool is_permutation() const;

  friend bool operator==(const Remap&, const Remap&) = default;

 private:
  std::vector<int> sources_;
  std::vector<int> targets_;
  RationalMatrix rows_;
  bool deterministic_ = false;
};

struct StochasticityReport {
  bool ok = true;
  std::optional<std::size_t> row;     // first offending row
  std::optional<std::size_t> column;  // set when an entry is outside [0, 1]
  Rational row_sum;
  std::string message;

  explicit operator bool() const { return ok; }
};

StochasticityReport check_row_stochastic(const Mechanism& m);

struct PrivacyReport {
  bool ok = true;
  // (result i, response column c): the pair of rows i, i+1 violates the
  // ratio bound at column c.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  std::string message;

  explicit operator bool() const { return ok; }
};

// Adjacent-row ratio test: alpha * x[i+1][c] <= x[i][c] and
// alpha * x[i][c] <= x[i+1][c] for all i, c. Zero over zero passes.
PrivacyReport check_differential_privacy(const Mechanism& m, const PrivacyLevel& alpha);

// (y o x)[i][b] = sum_a x[i][a] * y[a][b].
Mechanism compose(const Remap& y, const Mechanism& x);

// sum_i p_i sum_c x[i][c] * l(i, responses[c]).
LossValue expected_loss(const Mechanism& m, const UserModel& u);

}  // namespace privopt

#endif  // PRIVOPT_CORE_HPP_

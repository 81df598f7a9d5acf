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

#ifndef PRIVOPT_NONOBLIVIOUS_HPP_
#define PRIVOPT_NONOBLIVIOUS_HPP_

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "privopt/core.hpp"
#include "privopt/simplex.hpp"

namespace privopt {

/**
 * All databases of `rows` rows over the domain {0, ..., domain_size-1}, with
 * the count query "number of rows whose value is in the predicate set".
 * Database k stores row j's value in base-domain_size digit j of k.
 */
class DatabaseSpace {
 public:
  DatabaseSpace(int domain_size, int rows, std::vector<int> predicate);

  // Binary domain, counting rows equal to 1.
  static DatabaseSpace binary(int rows) { return DatabaseSpace(2, rows, {1}); }

  int domain_size() const { return domain_size_; }
  int rows() const { return rows_; }
  const std::vector<int>& predicate() const { return predicate_; }
  std::size_t size() const { return databases_.size(); }

  const std::vector<int>& database(std::size_t index) const { return databases_[index]; }
  int count(std::size_t index) const { return counts_[index]; }

  // Databases whose count is `result` (possibly empty for a trivial predicate).
  const std::vector<std::size_t>& result_class(int result) const {
    return classes_[static_cast<std::size_t>(result)];
  }

  bool neighbors(std::size_t a, std::size_t b) const;
  // Unordered neighbor pairs (a < b).
  const std::vector<std::pair<std::size_t, std::size_t>>& neighbor_pairs() const { return pairs_; }

  // Set-of-rows label for binary domains ("{1,3}", rows numbered from 1);
  // the digit string otherwise.
  std::string label(std::size_t index) const;
  // Binary domains: index of the database whose 1-rows are `rows` (1-based).
  std::size_t index_of(const std::vector<int>& one_rows) const;

 private:
  int domain_size_;
  int rows_;
  std::vector<int> predicate_;
  std::vector<std::vector<int>> databases_;
  std::vector<int> counts_;
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Mechanism whose rows are indexed by database rather than by count.
class FullMechanism {
 public:
  FullMechanism(std::vector<int> responses, RationalMatrix rows);

  const std::vector<int>& responses() const { return responses_; }
  const RationalMatrix& rows() const { return rows_; }
  std::size_t num_databases() const { return rows_.size(); }
  const Rational& at(std::size_t database, std::size_t column) const { return rows_[database][column]; }

  friend bool operator==(const FullMechanism&, const FullMechanism&) = default;

 private:
  std::vector<int> responses_;
  RationalMatrix rows_;
};

struct FullPrivacyReport {
  bool ok = true;
  std::optional<std::size_t> database;
  std::optional<std::size_t> neighbor;
  std::optional<std::size_t> column;
  std::string message;

  explicit operator bool() const { return ok; }
};

// Ratio bound across every neighbor pair, in both directions.
FullPrivacyReport check_full_differential_privacy(const FullMechanism& x, const DatabaseSpace& space,
                                                  const PrivacyLevel& alpha);

bool is_oblivious(const FullMechanism& x, const DatabaseSpace& space);

/**
 * Averages each response probability over the databases sharing a count.
 * The overload taking alpha also checks that privacy is preserved and that
 * the worst-case expected loss did not grow, for the supplied user, and
 * throws std::logic_error otherwise.
 */
Mechanism obliviate(const FullMechanism& x, const DatabaseSpace& space);
Mechanism obliviate(const FullMechanism& x, const DatabaseSpace& space, const PrivacyLevel& alpha,
                    const UserModel& user);

// Re-indexes an oblivious mechanism by database.
FullMechanism lift(const Mechanism& m, const DatabaseSpace& space);

// Max over database priors inducing u's result prior of the expected loss;
// attained by putting each p_i on the worst database of its class.
LossValue worst_case_expected_loss(const FullMechanism& x, const UserModel& u, const DatabaseSpace& space);

// Random alpha-DP mechanism over `space`: a convex mixture of clamped
// geometric noise on counts over random row subsets, each followed by a
// random remap. Generally non-oblivious.
FullMechanism random_private_mechanism(const DatabaseSpace& space, const PrivacyLevel& alpha, int num_responses,
                                       std::mt19937_64& rng);

struct CounterexampleOptions {
  Rational alpha{1, 2};
  bool include_privacy = true;
};

/**
 * The two-user instance over three binary rows: can one mechanism with
 * responses {l, m, n, o} be remapped into both target mechanisms at once
 * (first by l,n->1 m,o->2; second by l,o->1 m,n->2) while being alpha-DP?
 * Databases outside the four specified ones are free variables.
 */
struct CounterexampleResult {
  lp::Problem problem;
  lp::Status status = lp::Status::kNotSolved;
  std::optional<lp::FarkasCertificate> certificate;
  bool certificate_verified = false;
  std::string verification_note;
  std::vector<Rational> solution;  // when feasible
  std::vector<std::string> variable_names;
};

CounterexampleResult check_counterexample_infeasibility(const CounterexampleOptions& options = {});

// Human-readable certificate: nonzero multipliers with their row labels.
std::string describe_certificate(const CounterexampleResult& result);

}  // namespace privopt

#endif  // PRIVOPT_NONOBLIVIOUS_HPP_

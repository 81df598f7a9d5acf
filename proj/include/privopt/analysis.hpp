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

#ifndef PRIVOPT_ANALYSIS_HPP_
#define PRIVOPT_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "privopt/core.hpp"

namespace privopt {

// State of the pair of privacy constraints between rows i and i+1 of a
// mechanism at one response.
enum class Cell : char {
  kZero = 'Z',   // both entries zero
  kDown = 'v',   // alpha * x[i][r] == x[i+1][r]
  kUp = '^',     // x[i][r] == alpha * x[i+1][r]
  kSlack = 'S',  // neither bound tight
};

/// n x (n+1) grid of constraint states of a feasible mechanism.
class ConstraintMatrix {
 public:
  explicit ConstraintMatrix(std::vector<std::vector<Cell>> grid);

  // Rows separated by newlines or ';', cells by whitespace, using Z v ^ S.
  // Text from '#' to the end of a line is ignored.
  static ConstraintMatrix parse(std::string_view text);

  int n() const { return static_cast<int>(grid_.size()); }
  std::size_t num_columns() const { return grid_.empty() ? 0 : grid_.front().size(); }
  Cell at(int i, int r) const { return grid_[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)]; }
  const std::vector<std::vector<Cell>>& grid() const { return grid_; }

  bool is_zero_column(int r) const;
  // Column indices that are not all-Z, in order.
  std::vector<int> non_zero_columns() const;

  // Text grid with a legend line.
  std::string render() const;

  friend bool operator==(const ConstraintMatrix&, const ConstraintMatrix&) = default;

 private:
  std::vector<std::vector<Cell>> grid_;
};

// Throws PreconditionError unless m has range 0..n and is feasible for the
// user LP at alpha.
ConstraintMatrix constraint_matrix(const Mechanism& m, const PrivacyLevel& alpha);

struct SlackAccounting {
  int s = 0;                   // total S entries
  std::vector<int> per_column; // S count of the k-th non-Z column
  std::vector<int> prefix;     // prefix[k] = per_column[0] + ... + per_column[k]
  int z = 0;                   // number of Z columns
};

SlackAccounting account(const ConstraintMatrix& c);

struct StructureCheck {
  std::string name;
  bool passed = true;
  std::optional<int> row;
  std::optional<int> column;
  std::string detail;
};

struct StructureReport {
  std::vector<StructureCheck> outcomes;

  bool all_passed() const;
  const StructureCheck* find(std::string_view name) const;
};

/**
 * Checks the structure every optimal vertex's constraint matrix has. Z
 * columns are skipped in row checks. Outcome names:
 *
 *   columns_uniform     every column is all-Z or Z-free
 *   no_monotone_row     no row is all v or all ^
 *   row_pattern         each row reads v* S? ^*
 *   row_progression     row i+1 has more v's than row i, or as many when it
 *                       holds an S
 *   slack_covers_zero   s >= z
 *   slack_equals_zero   s == z
 *   column_pattern      the k-th non-Z column is ^ on rows 0..k-1+S_{k-1},
 *                       then s_k S's, then v
 */
StructureReport validate_vertex_structure(const ConstraintMatrix& c, const SlackAccounting& acc);

/**
 * Deterministic remap of the truncated geometric mechanism whose image has
 * constraint matrix c: sources k+S_{k-1} .. k+S_k go to the k-th non-Z
 * column. Throws StructuralError when c fails validation.
 */
Remap derive_remap_from_constraint_matrix(const ConstraintMatrix& c, const SlackAccounting& acc, int n);

struct FactorizationRecord {
  int n = 0;
  Rational alpha;
  LossValue remap_loss;  // Bayes remap of G
  LossValue lp_loss;     // user LP optimum
  Real difference;
  bool exact = false;
  bool passed = false;
  std::vector<int> remap;  // Bayes remap of G as a label map
  // Structural checks on the LP vertex.
  bool vertex_structure_passed = false;
  bool reconstruction_matches = false;
  std::size_t alternative_optimum_directions = 0;
  std::string failure;
};

// Compares the Bayes-remapped truncated geometric mechanism against the user
// LP optimum (exact for rational losses, within `tolerance` otherwise), and
// checks that the LP vertex is rebuilt by its derived remap applied to G.
FactorizationRecord verify_factorization(const UserModel& u, const PrivacyLevel& alpha, int n);
FactorizationRecord verify_factorization(const UserModel& u, const PrivacyLevel& alpha, int n,
                                         const Real& tolerance);

struct UniquenessVerdict {
  bool equivalent = false;  // candidate is a relabeling of G
  bool remap_is_permutation = false;
  bool induces_geometric = false;
  std::vector<int> remap;
  std::string reason;
};

// Uses the uniform-prior binary-loss user: a simultaneously optimal
// candidate must be turned into G by that user's Bayes remap, and the remap
// must be a permutation.
UniquenessVerdict verify_uniqueness(const PrivacyLevel& alpha, int n, const Mechanism& candidate);

/**
 * Random user over results 0..n. The prior is k_i / D with D <= 64 and each
 * entry forced to zero with probability 1/4 (at least one stays positive);
 * the loss is absolute, squared, binary or power with a non-integer
 * exponent, uniformly.
 */
UserModel random_user(int n, std::mt19937_64& rng);

struct SweepOptions {
  int max_n = 8;
  std::vector<Rational> alphas;
  int trials = 200;
  std::uint64_t seed = 7;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct SweepTrial {
  int index = 0;
  UserModel user;
  FactorizationRecord record;
};

struct SweepReport {
  std::vector<SweepTrial> trials;
  int passed = 0;
  int failed = 0;
  double wall_seconds = 0;
};

// Trial t draws n, alpha and the user from a generator seeded with
// (seed, t), so results do not depend on the worker count.
SweepReport run_factorization_sweep(const SweepOptions& options);

}  // namespace privopt

#endif  // PRIVOPT_ANALYSIS_HPP_

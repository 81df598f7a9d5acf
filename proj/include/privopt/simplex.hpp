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

#ifndef PRIVOPT_SIMPLEX_HPP_
#define PRIVOPT_SIMPLEX_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "privopt/rational.hpp"

/**
 * Two-phase tableau simplex over exact rationals.
 *
 * Problems are stated as rows a.x {<=,=,>=} b over non-negative variables.
 * Several objectives may be given; they are minimized lexicographically, each
 * later objective restricted to the optimal face of the earlier ones. The
 * entering rule is Dantzig's largest coefficient, falling back to Bland's
 * smallest-index rule for the remainder of any run of degenerate pivots, so
 * the method terminates on degenerate problems.
 */
namespace privopt::lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  std::size_t var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::kEqual;
  Rational rhs;
  std::string label;
};

struct Problem {
  std::size_t num_vars = 0;
  std::vector<Constraint> constraints;
  // Dense cost vectors over the structural variables, minimized in order.
  std::vector<std::vector<Rational>> objectives;
};

enum class Status { kNotSolved, kOptimal, kInfeasible, kUnbounded };

std::string to_string(Status status);

// Multipliers mu_k, one per constraint, with mu_k >= 0 on <= rows, mu_k <= 0
// on >= rows and free on = rows, such that sum_k mu_k a_k >= 0 componentwise
// and sum_k mu_k b_k < 0. Any such vector proves that no x >= 0 is feasible.
struct FarkasCertificate {
  std::vector<Rational> multipliers;
};

// Re-checks a certificate against the problem with exact arithmetic. On
// failure, `why` (when given) receives the first violated condition.
bool verify_farkas(const Problem& problem, const FarkasCertificate& certificate,
                   std::string* why = nullptr);

class Simplex {
 public:
  explicit Simplex(Problem problem);

  Status solve();

  Status status() const { return status_; }
  const Problem& problem() const { return problem_; }

  // Structural variable values at the final basis (valid when optimal).
  const std::vector<Rational>& primal() const { return primal_; }

  // Value of every objective at the final basis.
  std::vector<Rational> objective_values() const;

  // Valid when status() == kInfeasible.
  const FarkasCertificate& certificate() const { return certificate_; }

  // Nonbasic columns (structural or slack) whose reduced cost for the first
  // objective was zero at its optimum. Non-zero means the optimal face may
  // hold other vertices.
  std::size_t alternative_optimum_directions() const { return alternative_directions_; }

  // Smallest reduced cost over the nonbasic structural and slack columns of
  // the final basis, for the given real costs on the structural variables.
  // Non-negative (up to rounding) certifies the final vertex optimal for
  // those costs against every adjacent vertex.
  Real min_reduced_cost(std::span<const Real> costs) const;

  std::size_t pivots() const { return pivots_; }

 private:
  enum class RunResult { kOptimal, kUnbounded };

  void build_tableau();
  void load_objective(const std::vector<Rational>& column_costs);
  RunResult run();
  void pivot(std::size_t row, std::size_t col);
  void drive_out_artificials();
  void extract_primal();

  Problem problem_;
  Status status_ = Status::kNotSolved;

  std::size_t num_rows_ = 0;
  std::size_t num_cols_ = 0;  // excludes the right-hand side column
  std::size_t first_slack_ = 0;
  std::size_t first_artificial_ = 0;

  std::vector<std::vector<Rational>> tableau_;  // rows x (num_cols_ + 1)
  std::vector<Rational> reduced_;               // num_cols_ + 1, last = -z
  std::vector<std::size_t> basis_;
  std::vector<bool> row_active_;
  std::vector<bool> barred_;
  std::vector<int> row_sign_;                // sign applied to make rhs >= 0
  std::vector<std::size_t> initial_column_;  // unit column of the start basis
  std::vector<long> slack_of_row_;           // -1 for equalities
  std::vector<int> slack_sign_;              // +1 for <=, -1 for >=

  std::vector<Rational> primal_;
  FarkasCertificate certificate_;
  std::size_t alternative_directions_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace privopt::lp

#endif  // PRIVOPT_SIMPLEX_HPP_

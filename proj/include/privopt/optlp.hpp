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

#ifndef PRIVOPT_OPTLP_HPP_
#define PRIVOPT_OPTLP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "privopt/core.hpp"
#include "privopt/simplex.hpp"

namespace privopt {

enum class ConstraintKind {
  kLowerRatio,   // x[i][r] - alpha * x[i+1][r] >= 0
  kUpperRatio,   // alpha * x[i][r] - x[i+1][r] <= 0
  kRowSum,       // sum_r x[i][r] = 1
  kNonNegative,  // x[i][r] >= 0
};

std::string to_string(ConstraintKind kind);

struct ConstraintRef {
  ConstraintKind kind;
  int i;
  int r;  // -1 for row sums

  friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

/**
 * The LP minimizing one user's expected loss over all oblivious alpha-DP
 * mechanisms with range 0..n. Variables are x[i][r], column i*(n+1)+r.
 *
 * The first objective of `problem` is the (rationalized) expected loss.
 * Two further objectives break ties among optimal vertices the way a
 * vanishing perturbation toward a full-support prior and a strictly
 * increasing loss would; they never change the optimal value.
 */
struct UserLP {
  int n;
  PrivacyLevel alpha;
  UserModel user;
  lp::Problem problem;
  std::vector<ConstraintRef> rows;   // parallel to problem.constraints
  std::vector<LossValue> objective;  // true coefficients p_i * l(i, r)

  std::size_t num_variables() const { return problem.num_vars; }
  std::size_t variable(int i, int r) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(r);
  }
  std::size_t num_privacy_constraints() const;
  std::size_t num_equalities() const;
};

UserLP build_lp(const UserModel& u, const PrivacyLevel& alpha, int n);

struct VertexSolution {
  Mechanism mechanism;
  LossValue objective;
  std::vector<ConstraintRef> tight;
  std::size_t tight_rank;
  // Nonbasic directions with zero reduced cost at the optimum; non-zero
  // means the optimal face may contain other vertices.
  std::size_t alternative_optimum_directions = 0;
  // Smallest reduced cost under the unrounded objective; >= -1e-40 certifies
  // optimality against every adjacent vertex.
  Real optimality_margin;
  bool optimality_certified = false;
  std::size_t pivots = 0;
};

VertexSolution solve_vertex(const UserLP& lp);

VertexSolution optimal_mechanism_for_user(const UserModel& u, const PrivacyLevel& alpha, int n);

// Exact check of every LP constraint for a mechanism over range 0..n.
bool satisfies_user_lp(const Mechanism& m, const PrivacyLevel& alpha);

// Constraints of the user LP that hold with equality at m.
std::vector<ConstraintRef> tight_constraints(const Mechanism& m, const PrivacyLevel& alpha);

// Rank of the coefficient rows of the given constraints over the (n+1)^2
// variables.
std::size_t constraint_rank(const std::vector<ConstraintRef>& constraints, const PrivacyLevel& alpha, int n);

}  // namespace privopt

#endif  // PRIVOPT_OPTLP_HPP_

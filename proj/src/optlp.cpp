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

#include "privopt/optlp.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace privopt {

namespace {

Rational as_rational(const LossValue& v) {
  if (v.exact) return *v.exact;
  return rationalize(v.value, real_precision());
}

Real certification_margin() { return Real("-1e-40"); }

std::vector<Rational> coefficient_row(const ConstraintRef& c, const Rational& a, int n) {
  const auto width = static_cast<std::size_t>(n + 1);
  std::vector<Rational> row(width * width);
  auto at = [&](int i, int r) -> Rational& {
    return row[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(r)];
  };
  switch (c.kind) {
    case ConstraintKind::kLowerRatio:
      at(c.i, c.r) = 1;
      at(c.i + 1, c.r) = -a;
      break;
    case ConstraintKind::kUpperRatio:
      at(c.i, c.r) = a;
      at(c.i + 1, c.r) = -1;
      break;
    case ConstraintKind::kRowSum:
      for (int r = 0; r <= n; ++r) at(c.i, r) = 1;
      break;
    case ConstraintKind::kNonNegative:
      at(c.i, c.r) = 1;
      break;
  }
  return row;
}

}  // namespace

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kLowerRatio: return "lower_ratio";
    case ConstraintKind::kUpperRatio: return "upper_ratio";
    case ConstraintKind::kRowSum: return "row_sum";
    case ConstraintKind::kNonNegative: return "non_negative";
  }
  return "unknown";
}

std::size_t UserLP::num_privacy_constraints() const {
  std::size_t count = 0;
  for (const auto& c : rows) {
    if (c.kind == ConstraintKind::kLowerRatio || c.kind == ConstraintKind::kUpperRatio) ++count;
  }
  return count;
}

std::size_t UserLP::num_equalities() const {
  std::size_t count = 0;
  for (const auto& c : rows) count += c.kind == ConstraintKind::kRowSum ? 1 : 0;
  return count;
}

UserLP build_lp(const UserModel& u, const PrivacyLevel& alpha, int n) {
  alpha.require_interior("build_lp");
  if (n < 1) throw PreconditionError("build_lp needs n >= 1");
  if (u.n() != n) {
    throw StructuralError("user prior covers results 0.." + std::to_string(u.n()) + ", expected 0.." +
                          std::to_string(n));
  }
  const Rational& a = alpha.alpha();
  const auto width = static_cast<std::size_t>(n + 1);

  UserLP lp{n, alpha, u, {}, {}, {}};
  lp.problem.num_vars = width * width;

  for (int i = 0; i < n; ++i) {
    for (int r = 0; r <= n; ++r) {
      const std::size_t upper = lp.variable(i, r);
      const std::size_t lower = lp.variable(i + 1, r);
      lp.problem.constraints.push_back(
          {{{upper, Rational(1)}, {lower, Rational(-a)}}, lp::Sense::kGreaterEqual, Rational(0), {}});
      lp.rows.push_back({ConstraintKind::kLowerRatio, i, r});
      lp.problem.constraints.push_back(
          {{{upper, a}, {lower, Rational(-1)}}, lp::Sense::kLessEqual, Rational(0), {}});
      lp.rows.push_back({ConstraintKind::kUpperRatio, i, r});
    }
  }
  for (int i = 0; i <= n; ++i) {
    lp::Constraint sum;
    for (int r = 0; r <= n; ++r) sum.terms.push_back({lp.variable(i, r), Rational(1)});
    sum.sense = lp::Sense::kEqual;
    sum.rhs = 1;
    lp.problem.constraints.push_back(std::move(sum));
    lp.rows.push_back({ConstraintKind::kRowSum, i, -1});
  }

  // Primary objective plus the first- and second-order terms of the
  // perturbed user with prior (1-e)p + e*uniform and loss l + e|i-r|.
  std::vector<Rational> primary(lp.problem.num_vars);
  std::vector<Rational> first_order(lp.problem.num_vars);
  std::vector<Rational> second_order(lp.problem.num_vars);
  const Rational uniform(1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const Rational& p = u.prior()[static_cast<std::size_t>(i)];
    const Rational shift = uniform - p;
    for (int r = 0; r <= n; ++r) {
      const std::size_t v = lp.variable(i, r);
      const LossValue l = u.loss().value(i, r);
      const Rational distance(std::abs(i - r));
      const Rational lq = as_rational(l);
      lp.objective.push_back(p * l);
      primary[v] = as_rational(lp.objective.back());
      first_order[v] = shift * lq + p * distance;
      second_order[v] = shift * distance;
    }
  }
  lp.problem.objectives = {std::move(primary), std::move(first_order), std::move(second_order)};
  return lp;
}

VertexSolution solve_vertex(const UserLP& lp) {
  lp::Simplex simplex(lp.problem);
  const lp::Status status = simplex.solve();
  if (status != lp::Status::kOptimal) {
    // Cannot happen for a well-formed user LP: G is feasible and losses are
    // non-negative.
    throw std::logic_error("user LP solve ended " + lp::to_string(status));
  }
  const int n = lp.n;
  const auto width = static_cast<std::size_t>(n + 1);
  std::vector<int> labels(width);
  RationalMatrix rows(width, std::vector<Rational>(width));
  for (int i = 0; i <= n; ++i) {
    labels[static_cast<std::size_t>(i)] = i;
    for (int r = 0; r <= n; ++r) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] = simplex.primal()[lp.variable(i, r)];
    }
  }
  Mechanism mechanism(n, std::move(labels), std::move(rows));

  std::vector<Real> costs;
  costs.reserve(lp.objective.size());
  for (const auto& c : lp.objective) costs.push_back(c.value);
  Real margin = simplex.min_reduced_cost(costs);

  auto tight = tight_constraints(mechanism, lp.alpha);
  const std::size_t rank = constraint_rank(tight, lp.alpha, n);
  LossValue objective = expected_loss(mechanism, lp.user);
  const bool certified = margin >= certification_margin();
  return VertexSolution{std::move(mechanism),
                        std::move(objective),
                        std::move(tight),
                        rank,
                        simplex.alternative_optimum_directions(),
                        margin,
                        certified,
                        simplex.pivots()};
}

VertexSolution optimal_mechanism_for_user(const UserModel& u, const PrivacyLevel& alpha, int n) {
  return solve_vertex(build_lp(u, alpha, n));
}

bool satisfies_user_lp(const Mechanism& m, const PrivacyLevel& alpha) {
  if (!m.has_canonical_range()) return false;
  if (!check_row_stochastic(m)) return false;
  return static_cast<bool>(check_differential_privacy(m, alpha));
}

std::vector<ConstraintRef> tight_constraints(const Mechanism& m, const PrivacyLevel& alpha) {
  if (!m.has_canonical_range()) throw StructuralError("user LP mechanisms have range 0..n");
  const Rational& a = alpha.alpha();
  const int n = m.n();
  std::vector<ConstraintRef> tight;
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r <= n; ++r) {
      const Rational& upper = m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(r));
      const Rational& lower = m.at(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(r));
      if (upper == a * lower) tight.push_back({ConstraintKind::kLowerRatio, i, r});
      if (a * upper == lower) tight.push_back({ConstraintKind::kUpperRatio, i, r});
    }
  }
  for (int i = 0; i <= n; ++i) {
    Rational sum = 0;
    for (int r = 0; r <= n; ++r) sum += m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(r));
    if (sum == 1) tight.push_back({ConstraintKind::kRowSum, i, -1});
  }
  for (int i = 0; i <= n; ++i) {
    for (int r = 0; r <= n; ++r) {
      if (m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(r)) == 0) {
        tight.push_back({ConstraintKind::kNonNegative, i, r});
      }
    }
  }
  return tight;
}

std::size_t constraint_rank(const std::vector<ConstraintRef>& constraints, const PrivacyLevel& alpha, int n) {
  std::vector<std::vector<Rational>> matrix;
  matrix.reserve(constraints.size());
  for (const auto& c : constraints) matrix.push_back(coefficient_row(c, alpha.alpha(), n));
  if (matrix.empty()) return 0;

  const std::size_t cols = matrix.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < matrix.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < matrix.size() && matrix[pivot][col] == 0) ++pivot;
    if (pivot == matrix.size()) continue;
    std::swap(matrix[pivot], matrix[rank]);
    const Rational inv = 1 / matrix[rank][col];
    for (std::size_t k = rank + 1; k < matrix.size(); ++k) {
      if (matrix[k][col] == 0) continue;
      const Rational factor = matrix[k][col] * inv;
      for (std::size_t j = col; j < cols; ++j) {
        if (matrix[rank][j] != 0) matrix[k][j] -= factor * matrix[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace privopt

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

#include "privopt/simplex.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace privopt::lp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

std::string to_string(Status status) {
  switch (status) {
    case Status::kNotSolved: return "not_solved";
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

bool verify_farkas(const Problem& problem, const FarkasCertificate& certificate,
                   std::string* why) {
  auto fail = [why](std::string message) {
    if (why != nullptr) *why = std::move(message);
    return false;
  };
  if (certificate.multipliers.size() != problem.constraints.size()) {
    return fail("multiplier count does not match constraint count");
  }
  std::vector<Rational> combined(problem.num_vars);
  Rational combined_rhs = 0;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const Constraint& row = problem.constraints[k];
    const Rational& mu = certificate.multipliers[k];
    if (row.sense == Sense::kLessEqual && mu < 0) {
      return fail("negative multiplier on <= row " + std::to_string(k));
    }
    if (row.sense == Sense::kGreaterEqual && mu > 0) {
      return fail("positive multiplier on >= row " + std::to_string(k));
    }
    if (mu == 0) continue;
    for (const Term& t : row.terms) combined[t.var] += mu * t.coef;
    combined_rhs += mu * row.rhs;
  }
  for (std::size_t j = 0; j < combined.size(); ++j) {
    if (combined[j] < 0) {
      return fail("combined coefficient of variable " + std::to_string(j) + " is negative");
    }
  }
  if (combined_rhs >= 0) return fail("combined right-hand side is not negative");
  return true;
}

Simplex::Simplex(Problem problem) : problem_(std::move(problem)) {
  for (const auto& c : problem_.constraints) {
    for (const Term& t : c.terms) {
      if (t.var >= problem_.num_vars) throw std::invalid_argument("constraint term out of range");
    }
  }
  for (const auto& obj : problem_.objectives) {
    if (obj.size() != problem_.num_vars) throw std::invalid_argument("objective length mismatch");
  }
}

void Simplex::build_tableau() {
  const auto& rows = problem_.constraints;
  num_rows_ = rows.size();
  first_slack_ = problem_.num_vars;

  std::size_t slacks = 0;
  slack_of_row_.assign(num_rows_, -1);
  slack_sign_.assign(num_rows_, 0);
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (rows[k].sense != Sense::kEqual) {
      slack_of_row_[k] = static_cast<long>(first_slack_ + slacks++);
      slack_sign_[k] = rows[k].sense == Sense::kLessEqual ? 1 : -1;
    }
  }
  first_artificial_ = first_slack_ + slacks;

  // Normalize each row so its rhs is non-negative. A zero rhs row with a
  // slack is oriented so the slack enters with +1 and can start basic.
  row_sign_.assign(num_rows_, 1);
  std::vector<bool> needs_artificial(num_rows_, true);
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (rows[k].rhs < 0) {
      row_sign_[k] = -1;
    } else if (rows[k].rhs == 0 && slack_sign_[k] != 0) {
      row_sign_[k] = slack_sign_[k];
    }
    needs_artificial[k] = !(slack_sign_[k] != 0 && row_sign_[k] * slack_sign_[k] == 1);
  }
  std::size_t artificials = 0;
  for (bool need : needs_artificial) artificials += need ? 1 : 0;
  num_cols_ = first_artificial_ + artificials;

  tableau_.assign(num_rows_, std::vector<Rational>(num_cols_ + 1));
  basis_.assign(num_rows_, kNone);
  initial_column_.assign(num_rows_, kNone);
  row_active_.assign(num_rows_, true);
  barred_.assign(num_cols_, false);

  std::size_t next_artificial = first_artificial_;
  for (std::size_t k = 0; k < num_rows_; ++k) {
    auto& row = tableau_[k];
    const int sign = row_sign_[k];
    for (const Term& t : rows[k].terms) {
      row[t.var] += sign > 0 ? t.coef : Rational(-t.coef);
    }
    if (slack_of_row_[k] >= 0) {
      row[static_cast<std::size_t>(slack_of_row_[k])] = sign * slack_sign_[k];
    }
    row[num_cols_] = sign > 0 ? rows[k].rhs : Rational(-rows[k].rhs);
    if (needs_artificial[k]) {
      row[next_artificial] = 1;
      basis_[k] = next_artificial++;
    } else {
      basis_[k] = static_cast<std::size_t>(slack_of_row_[k]);
    }
    initial_column_[k] = basis_[k];
  }
}

void Simplex::load_objective(const std::vector<Rational>& column_costs) {
  reduced_.assign(num_cols_ + 1, Rational(0));
  for (std::size_t j = 0; j < num_cols_; ++j) reduced_[j] = column_costs[j];
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (!row_active_[k]) continue;
    const Rational& cb = column_costs[basis_[k]];
    if (cb == 0) continue;
    const auto& row = tableau_[k];
    for (std::size_t j = 0; j <= num_cols_; ++j) {
      if (row[j] != 0) reduced_[j] -= cb * row[j];
    }
  }
}

void Simplex::pivot(std::size_t row, std::size_t col) {
  auto& prow = tableau_[row];
  const Rational inv = 1 / prow[col];
  std::vector<std::size_t> nonzero;
  nonzero.reserve(num_cols_ + 1);
  for (std::size_t j = 0; j <= num_cols_; ++j) {
    if (prow[j] != 0) {
      prow[j] *= inv;
      nonzero.push_back(j);
    }
  }
  auto eliminate = [&](std::vector<Rational>& target) {
    if (target[col] == 0) return;
    const Rational factor = target[col];
    for (std::size_t j : nonzero) target[j] -= factor * prow[j];
  };
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (k != row && row_active_[k]) eliminate(tableau_[k]);
  }
  eliminate(reduced_);
  basis_[row] = col;
  ++pivots_;
}

Simplex::RunResult Simplex::run() {
  bool bland = false;
  for (;;) {
    std::size_t entering = kNone;
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (barred_[j] || reduced_[j] >= 0) continue;
      if (bland) {
        entering = j;
        break;
      }
      if (entering == kNone || reduced_[j] < reduced_[entering]) entering = j;
    }
    if (entering == kNone) return RunResult::kOptimal;

    std::size_t leaving = kNone;
    Rational best_ratio;
    for (std::size_t k = 0; k < num_rows_; ++k) {
      if (!row_active_[k]) continue;
      const Rational& a = tableau_[k][entering];
      if (a <= 0) continue;
      Rational ratio = tableau_[k][num_cols_] / a;
      if (leaving == kNone || ratio < best_ratio ||
          (ratio == best_ratio && basis_[k] < basis_[leaving])) {
        leaving = k;
        best_ratio = std::move(ratio);
      }
    }
    if (leaving == kNone) return RunResult::kUnbounded;

    // Stay on Bland's rule until the objective strictly improves.
    bland = best_ratio == 0;
    pivot(leaving, entering);
  }
}

void Simplex::drive_out_artificials() {
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (!row_active_[k] || basis_[k] < first_artificial_) continue;
    std::size_t replacement = kNone;
    for (std::size_t j = 0; j < first_artificial_; ++j) {
      if (tableau_[k][j] != 0) {
        replacement = j;
        break;
      }
    }
    if (replacement == kNone) {
      row_active_[k] = false;  // redundant equality
    } else {
      pivot(k, replacement);
    }
  }
  for (std::size_t j = first_artificial_; j < num_cols_; ++j) barred_[j] = true;
}

void Simplex::extract_primal() {
  primal_.assign(problem_.num_vars, Rational(0));
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (row_active_[k] && basis_[k] < problem_.num_vars) primal_[basis_[k]] = tableau_[k][num_cols_];
  }
}

Status Simplex::solve() {
  build_tableau();

  if (first_artificial_ < num_cols_) {
    std::vector<Rational> phase_one(num_cols_, Rational(0));
    for (std::size_t j = first_artificial_; j < num_cols_; ++j) phase_one[j] = 1;
    load_objective(phase_one);
    run();  // bounded below by zero
    if (reduced_[num_cols_] != 0) {
      // reduced_[rhs] holds -w. With y the phase-one duals, y_k is read off
      // the start-basis unit column of row k; mu_k = -sign_k * y_k.
      certificate_.multipliers.assign(num_rows_, Rational(0));
      for (std::size_t k = 0; k < num_rows_; ++k) {
        const std::size_t j = initial_column_[k];
        Rational y = phase_one[j] - reduced_[j];
        certificate_.multipliers[k] = row_sign_[k] > 0 ? Rational(-y) : y;
      }
      status_ = Status::kInfeasible;
      return status_;
    }
    drive_out_artificials();
  }

  std::vector<Rational> costs(num_cols_, Rational(0));
  for (std::size_t stage = 0; stage < problem_.objectives.size(); ++stage) {
    for (std::size_t j = 0; j < problem_.num_vars; ++j) costs[j] = problem_.objectives[stage][j];
    load_objective(costs);
    if (run() == RunResult::kUnbounded) {
      status_ = Status::kUnbounded;
      extract_primal();
      return status_;
    }
    std::vector<bool> in_basis(num_cols_, false);
    for (std::size_t k = 0; k < num_rows_; ++k) {
      if (row_active_[k]) in_basis[basis_[k]] = true;
    }
    std::size_t zero_directions = 0;
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (barred_[j] || in_basis[j]) continue;
      if (reduced_[j] > 0) {
        barred_[j] = true;  // later stages stay on this optimal face
      } else {
        ++zero_directions;
      }
    }
    if (stage == 0) alternative_directions_ = zero_directions;
  }
  extract_primal();
  status_ = Status::kOptimal;
  return status_;
}

std::vector<Rational> Simplex::objective_values() const {
  std::vector<Rational> values;
  for (const auto& obj : problem_.objectives) {
    Rational z = 0;
    for (std::size_t j = 0; j < primal_.size(); ++j) {
      if (primal_[j] != 0) z += obj[j] * primal_[j];
    }
    values.push_back(z);
  }
  return values;
}

Real Simplex::min_reduced_cost(std::span<const Real> costs) const {
  if (costs.size() != problem_.num_vars) throw std::invalid_argument("cost length mismatch");
  std::vector<bool> in_basis(num_cols_, false);
  for (std::size_t k = 0; k < num_rows_; ++k) {
    if (row_active_[k]) in_basis[basis_[k]] = true;
  }
  auto cost_of = [&](std::size_t col) -> Real {
    return col < problem_.num_vars ? costs[col] : Real(0);
  };
  Real best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < first_artificial_; ++j) {
    if (in_basis[j]) continue;
    Real d = cost_of(j);
    for (std::size_t k = 0; k < num_rows_; ++k) {
      if (!row_active_[k] || tableau_[k][j] == 0) continue;
      const std::size_t b = basis_[k];
      if (b >= problem_.num_vars) continue;
      d -= costs[b] * to_real(tableau_[k][j]);
    }
    if (d < best) best = d;
  }
  return best;
}

}  // namespace privopt::lp

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

#include "privopt/nonoblivious.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "privopt/mechanisms.hpp"

namespace privopt {

// ---------------------------------------------------------------------------
// DatabaseSpace

DatabaseSpace::DatabaseSpace(int domain_size, int rows, std::vector<int> predicate)
    : domain_size_(domain_size), rows_(rows), predicate_(std::move(predicate)) {
  if (domain_size_ < 1) throw StructuralError("domain size must be positive");
  if (rows_ < 1) throw StructuralError("database needs at least one row");
  std::sort(predicate_.begin(), predicate_.end());
  predicate_.erase(std::unique(predicate_.begin(), predicate_.end()), predicate_.end());
  for (int v : predicate_) {
    if (v < 0 || v >= domain_size_) throw StructuralError("predicate value outside the domain");
  }
  std::size_t total = 1;
  for (int j = 0; j < rows_; ++j) {
    total *= static_cast<std::size_t>(domain_size_);
    if (total > 1'000'000) throw CapacityError("database space is too large to enumerate");
  }
  std::set<int> satisfying(predicate_.begin(), predicate_.end());
  classes_.resize(static_cast<std::size_t>(rows_) + 1);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<int> db(static_cast<std::size_t>(rows_));
    std::size_t rest = k;
    int count = 0;
    for (int j = 0; j < rows_; ++j) {
      db[static_cast<std::size_t>(j)] = static_cast<int>(rest % static_cast<std::size_t>(domain_size_));
      rest /= static_cast<std::size_t>(domain_size_);
      count += satisfying.count(db[static_cast<std::size_t>(j)]) != 0 ? 1 : 0;
    }
    databases_.push_back(std::move(db));
    counts_.push_back(count);
    classes_[static_cast<std::size_t>(count)].push_back(k);
  }
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a + 1; b < total; ++b) {
      if (neighbors(a, b)) pairs_.emplace_back(a, b);
    }
  }
}

bool DatabaseSpace::neighbors(std::size_t a, std::size_t b) const {
  int differing = 0;
  for (int j = 0; j < rows_; ++j) {
    differing += databases_[a][static_cast<std::size_t>(j)] != databases_[b][static_cast<std::size_t>(j)] ? 1 : 0;
  }
  return differing == 1;
}

std::string DatabaseSpace::label(std::size_t index) const {
  const auto& db = databases_[index];
  std::string out;
  if (domain_size_ == 2) {
    out = "{";
    bool first = true;
    for (int j = 0; j < rows_; ++j) {
      if (db[static_cast<std::size_t>(j)] != 1) continue;
      if (!first) out += ",";
      out += std::to_string(j + 1);
      first = false;
    }
    return out + "}";
  }
  for (int v : db) out += std::to_string(v);
  return out;
}

std::size_t DatabaseSpace::index_of(const std::vector<int>& one_rows) const {
  if (domain_size_ != 2) throw StructuralError("set labels only apply to binary domains");
  std::size_t index = 0;
  for (int row : one_rows) {
    if (row < 1 || row > rows_) throw StructuralError("row label out of range");
    index |= std::size_t{1} << static_cast<unsigned>(row - 1);
  }
  return index;
}

// ---------------------------------------------------------------------------
// FullMechanism

FullMechanism::FullMechanism(std::vector<int> responses, RationalMatrix rows)
    : responses_(std::move(responses)), rows_(std::move(rows)) {
  if (responses_.empty()) throw StructuralError("mechanism has no responses");
  for (const auto& row : rows_) {
    if (row.size() != responses_.size()) throw StructuralError("mechanism row has wrong length");
  }
}

namespace {

void require_space(const FullMechanism& x, const DatabaseSpace& space) {
  if (x.num_databases() != space.size()) {
    throw StructuralError("mechanism has " + std::to_string(x.num_databases()) + " rows; space has " +
                          std::to_string(space.size()) + " databases");
  }
}

void require_stochastic(const FullMechanism& x) {
  for (std::size_t d = 0; d < x.num_databases(); ++d) {
    Rational sum = 0;
    for (const auto& v : x.rows()[d]) {
      if (v < 0) throw StructuralError("negative probability in row " + std::to_string(d));
      sum += v;
    }
    if (sum != 1) throw StructuralError("row " + std::to_string(d) + " sums to " + to_string(sum));
  }
}

}  // namespace

FullPrivacyReport check_full_differential_privacy(const FullMechanism& x, const DatabaseSpace& space,
                                                  const PrivacyLevel& alpha) {
  require_space(x, space);
  const Rational& a = alpha.alpha();
  FullPrivacyReport report;
  for (const auto& [d1, d2] : space.neighbor_pairs()) {
    for (std::size_t c = 0; c < x.responses().size(); ++c) {
      if (a * x.at(d2, c) <= x.at(d1, c) && a * x.at(d1, c) <= x.at(d2, c)) continue;
      report.ok = false;
      report.database = d1;
      report.neighbor = d2;
      report.column = c;
      report.message = "databases " + space.label(d1) + " and " + space.label(d2) + " violate the ratio bound at response " +
                       std::to_string(x.responses()[c]);
      return report;
    }
  }
  return report;
}

bool is_oblivious(const FullMechanism& x, const DatabaseSpace& space) {
  require_space(x, space);
  for (int i = 0; i <= space.rows(); ++i) {
    const auto& members = space.result_class(i);
    for (std::size_t k = 1; k < members.size(); ++k) {
      if (x.rows()[members[k]] != x.rows()[members.front()]) return false;
    }
  }
  return true;
}

Mechanism obliviate(const FullMechanism& x, const DatabaseSpace& space) {
  require_space(x, space);
  require_stochastic(x);
  const int n = space.rows();
  RationalMatrix rows(static_cast<std::size_t>(n) + 1, std::vector<Rational>(x.responses().size()));
  for (int i = 0; i <= n; ++i) {
    const auto& members = space.result_class(i);
    if (members.empty()) {
      throw PreconditionError("no database has count " + std::to_string(i) + "; the predicate is trivial");
    }
    auto& out = rows[static_cast<std::size_t>(i)];
    for (std::size_t d : members) {
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += x.at(d, c);
    }
    const Rational size(static_cast<long>(members.size()));
    for (auto& v : out) v /= size;
  }
  return Mechanism(n, x.responses(), std::move(rows));
}

Mechanism obliviate(const FullMechanism& x, const DatabaseSpace& space, const PrivacyLevel& alpha,
                    const UserModel& user) {
  Mechanism result = obliviate(x, space);
  if (check_full_differential_privacy(x, space, alpha) &&
      !check_full_differential_privacy(lift(result, space), space, alpha)) {
    throw std::logic_error("averaging broke differential privacy");
  }
  const LossValue before = worst_case_expected_loss(x, user, space);
  const LossValue after = expected_loss(result, user);
  if (loss_less(before, after, default_loss_tolerance())) {
    throw std::logic_error("averaging increased the worst-case expected loss");
  }
  return result;
}

FullMechanism lift(const Mechanism& m, const DatabaseSpace& space) {
  if (m.n() != space.rows()) throw StructuralError("mechanism result bound does not match the row count");
  RationalMatrix rows;
  rows.reserve(space.size());
  for (std::size_t d = 0; d < space.size(); ++d) rows.push_back(m.rows()[static_cast<std::size_t>(space.count(d))]);
  return FullMechanism(m.responses(), std::move(rows));
}

LossValue worst_case_expected_loss(const FullMechanism& x, const UserModel& u, const DatabaseSpace& space) {
  require_space(x, space);
  if (u.n() != space.rows()) throw StructuralError("user prior does not cover counts 0..rows");
  const LossFunction& loss = u.loss();
  LossValue total = loss.is_rational() ? LossValue::of(Rational(0)) : LossValue::of(Real(0));
  for (int i = 0; i <= space.rows(); ++i) {
    const Rational& p = u.prior()[static_cast<std::size_t>(i)];
    if (p == 0) continue;
    std::optional<LossValue> worst;
    for (std::size_t d : space.result_class(i)) {
      LossValue row = loss.is_rational() ? LossValue::of(Rational(0)) : LossValue::of(Real(0));
      for (std::size_t c = 0; c < x.responses().size(); ++c) {
        if (x.at(d, c) != 0) row = row + x.at(d, c) * loss.value(i, x.responses()[c]);
      }
      if (!worst || loss_less(*worst, row, Real(0))) worst = std::move(row);
    }
    if (!worst) throw PreconditionError("a count with positive prior has no database");
    total = total + p * *worst;
  }
  return total;
}

FullMechanism random_private_mechanism(const DatabaseSpace& space, const PrivacyLevel& alpha, int num_responses,
                                       std::mt19937_64& rng) {
  if (num_responses < 1) throw PreconditionError("need at least one response");
  std::vector<int> responses(static_cast<std::size_t>(num_responses));
  for (int r = 0; r < num_responses; ++r) responses[static_cast<std::size_t>(r)] = r;
  std::set<int> satisfying(space.predicate().begin(), space.predicate().end());

  RationalMatrix rows(space.size(), std::vector<Rational>(responses.size()));
  const int components = std::uniform_int_distribution<int>(1, 3)(rng);
  std::vector<int> weights(static_cast<std::size_t>(components));
  int weight_total = 0;
  for (auto& w : weights) weight_total += (w = std::uniform_int_distribution<int>(1, 8)(rng));

  for (int k = 0; k < components; ++k) {
    // Count over a random non-empty subset of rows; neighbors differ by at
    // most one in this count.
    std::vector<int> subset;
    while (subset.empty()) {
      for (int j = 0; j < space.rows(); ++j) {
        if (std::bernoulli_distribution(0.6)(rng)) subset.push_back(j);
      }
    }
    const int bound = static_cast<int>(subset.size());
    const Mechanism noise = truncated_geometric({alpha, bound});
    // Random stochastic remap with small rational entries.
    RationalMatrix remap(static_cast<std::size_t>(bound) + 1, std::vector<Rational>(responses.size()));
    for (auto& row : remap) {
      if (std::bernoulli_distribution(0.5)(rng)) {
        row[std::uniform_int_distribution<std::size_t>(0, responses.size() - 1)(rng)] = 1;
      } else {
        int sum = 0;
        std::vector<int> raw(responses.size());
        for (auto& v : raw) sum += (v = std::uniform_int_distribution<int>(0, 4)(rng));
        if (sum == 0) {
          raw[0] = 1;
          sum = 1;
        }
        for (std::size_t c = 0; c < raw.size(); ++c) row[c] = Rational(raw[c], sum);
      }
    }
    const Rational weight(weights[static_cast<std::size_t>(k)], weight_total);
    for (std::size_t d = 0; d < space.size(); ++d) {
      int count = 0;
      for (int j : subset) count += satisfying.count(space.database(d)[static_cast<std::size_t>(j)]) != 0 ? 1 : 0;
      for (int z = 0; z <= bound; ++z) {
        const Rational& pz = noise.at(static_cast<std::size_t>(count), static_cast<std::size_t>(z));
        for (std::size_t c = 0; c < responses.size(); ++c) {
          const Rational& y = remap[static_cast<std::size_t>(z)][c];
          if (y != 0) rows[d][c] += weight * pz * y;
        }
      }
    }
  }
  return FullMechanism(std::move(responses), std::move(rows));
}

// ---------------------------------------------------------------------------
// Counterexample

CounterexampleResult check_counterexample_infeasibility(const CounterexampleOptions& options) {
  const PrivacyLevel alpha(options.alpha);
  const DatabaseSpace space = DatabaseSpace::binary(3);
  constexpr std::size_t kResponses = 4;  // l, m, n, o
  static const std::array<const char*, kResponses> kNames = {"l", "m", "n", "o"};
  enum { kL = 0, kM = 1, kN = 2, kO = 3 };

  CounterexampleResult result;
  auto var = [](std::size_t db, std::size_t r) { return db * kResponses + r; };
  result.problem.num_vars = space.size() * kResponses;
  for (std::size_t d = 0; d < space.size(); ++d) {
    for (std::size_t r = 0; r < kResponses; ++r) result.variable_names.push_back("x[" + space.label(d) + "][" + kNames[r] + "]");
  }
  auto& constraints = result.problem.constraints;

  for (std::size_t d = 0; d < space.size(); ++d) {
    lp::Constraint sum;
    for (std::size_t r = 0; r < kResponses; ++r) sum.terms.push_back({var(d, r), Rational(1)});
    sum.sense = lp::Sense::kEqual;
    sum.rhs = 1;
    sum.label = "row sum " + space.label(d);
    constraints.push_back(std::move(sum));
  }

  if (options.include_privacy) {
    const Rational& a = alpha.alpha();
    for (const auto& [d1, d2] : space.neighbor_pairs()) {
      for (std::size_t r = 0; r < kResponses; ++r) {
        for (auto [hi, lo] : {std::pair{d1, d2}, std::pair{d2, d1}}) {
          constraints.push_back({{{var(hi, r), Rational(1)}, {var(lo, r), Rational(-a)}},
                                 lp::Sense::kGreaterEqual,
                                 Rational(0),
                                 "privacy " + space.label(hi) + " vs " + space.label(lo) + " at " + kNames[r]});
        }
      }
    }
  }

  // Target rows of the first user's mechanism, as (P[1], P[2]); the second
  // user's target swaps rows 1 and 2.
  struct Target {
    std::vector<int> rows;
    std::vector<int> swapped;
    Rational one;
    Rational two;
  };
  const std::vector<Target> targets = {
      {{1}, {2}, Rational(11, 12), Rational(1, 12)},
      {{2}, {1}, Rational(2, 3), Rational(1, 3)},
      {{1, 3}, {2, 3}, Rational(5, 6), Rational(1, 6)},
      {{2, 3}, {1, 3}, Rational(1, 3), Rational(2, 3)},
  };
  auto target_of = [&](const std::vector<int>& rows) -> const Target& {
    for (const auto& t : targets) {
      if (t.rows == rows) return t;
    }
    throw std::logic_error("unknown target row");
  };
  auto equality = [&](std::size_t d, int r1, int r2, const Rational& rhs, const std::string& what) {
    constraints.push_back({{{var(d, static_cast<std::size_t>(r1)), Rational(1)},
                            {var(d, static_cast<std::size_t>(r2)), Rational(1)}},
                           lp::Sense::kEqual,
                           rhs,
                           what + " at " + space.label(d)});
  };
  for (const auto& t : targets) {
    const std::size_t d = space.index_of(t.rows);
    // First remap: l, n -> 1 and m, o -> 2.
    equality(d, kL, kN, t.one, "first user response 1");
    equality(d, kM, kO, t.two, "first user response 2");
    // Second remap: l, o -> 1 and m, n -> 2, against the swapped target.
    const Target& mirrored = target_of(t.swapped);
    equality(d, kL, kO, mirrored.one, "second user response 1");
    equality(d, kM, kN, mirrored.two, "second user response 2");
  }

  lp::Simplex simplex(result.problem);
  result.status = simplex.solve();
  if (result.status == lp::Status::kInfeasible) {
    result.certificate = simplex.certificate();
    std::string why;
    result.certificate_verified = lp::verify_farkas(result.problem, *result.certificate, &why);
    result.verification_note = result.certificate_verified ? "certificate re-verified" : why;
  } else if (result.status == lp::Status::kOptimal) {
    result.solution = simplex.primal();
  }
  return result;
}

std::string describe_certificate(const CounterexampleResult& result) {
  std::ostringstream out;
  out << "status: " << lp::to_string(result.status) << '\n';
  if (!result.certificate) return out.str();
  out << "certificate: " << (result.certificate_verified ? "verified" : "NOT verified") << " ("
      << result.verification_note << ")\n";
  out << "nonzero multipliers (their weighted row sum has non-negative coefficients and a negative right-hand side):\n";
  for (std::size_t k = 0; k < result.certificate->multipliers.size(); ++k) {
    const Rational& mu = result.certificate->multipliers[k];
    if (mu == 0) continue;
    out << "  " << to_string(mu) << "  [" << result.problem.constraints[k].label << "]\n";
  }
  return out.str();
}

}  // namespace privopt

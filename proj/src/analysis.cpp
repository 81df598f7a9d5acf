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

#include "privopt/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <sstream>
#include <thread>

#include "privopt/mechanisms.hpp"
#include "privopt/optlp.hpp"
#include "privopt/remap.hpp"

namespace privopt {

namespace {

Cell parse_cell(char c) {
  switch (c) {
    case 'Z': return Cell::kZero;
    case 'v': case 'V': return Cell::kDown;
    case '^': return Cell::kUp;
    case 'S': case 's': return Cell::kSlack;
    default: throw StructuralError(std::string("unknown constraint symbol '") + c + "'");
  }
}

StructureCheck pass(std::string name) { return StructureCheck{std::move(name), true, std::nullopt, std::nullopt, {}}; }

StructureCheck fail(std::string name, std::optional<int> row, std::optional<int> column, std::string detail) {
  return StructureCheck{std::move(name), false, row, column, std::move(detail)};
}

}  // namespace

// ---------------------------------------------------------------------------
// ConstraintMatrix

ConstraintMatrix::ConstraintMatrix(std::vector<std::vector<Cell>> grid) : grid_(std::move(grid)) {
  if (grid_.empty()) throw StructuralError("constraint matrix needs at least one row");
  for (const auto& row : grid_) {
    if (row.size() != grid_.size() + 1) throw StructuralError("constraint matrix must be n x (n+1)");
  }
}

ConstraintMatrix ConstraintMatrix::parse(std::string_view text) {
  std::vector<std::vector<Cell>> grid;
  std::vector<Cell> current;
  auto flush = [&] {
    if (!current.empty()) grid.push_back(std::move(current));
    current.clear();
  };
  bool comment = false;
  for (char c : text) {
    if (c == '\n') {
      flush();
      comment = false;
    } else if (comment || c == '#') {
      comment = true;
    } else if (c == ';') {
      flush();
    } else if (c != ' ' && c != '\t' && c != '\r' && c != ',') {
      current.push_back(parse_cell(c));
    }
  }
  flush();
  return ConstraintMatrix(std::move(grid));
}

bool ConstraintMatrix::is_zero_column(int r) const {
  return std::all_of(grid_.begin(), grid_.end(),
                     [r](const auto& row) { return row[static_cast<std::size_t>(r)] == Cell::kZero; });
}

std::vector<int> ConstraintMatrix::non_zero_columns() const {
  std::vector<int> cols;
  for (int r = 0; r < static_cast<int>(num_columns()); ++r) {
    if (!is_zero_column(r)) cols.push_back(r);
  }
  return cols;
}

std::string ConstraintMatrix::render() const {
  std::ostringstream out;
  out << "# legend: Z both zero, v alpha*x[i]=x[i+1], ^ x[i]=alpha*x[i+1], S slack\n";
  for (const auto& row : grid_) {
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (r != 0) out << ' ';
      out << static_cast<char>(row[r]);
    }
    out << '\n';
  }
  return out.str();
}

ConstraintMatrix constraint_matrix(const Mechanism& m, const PrivacyLevel& alpha) {
  alpha.require_interior("constraint_matrix");
  if (!satisfies_user_lp(m, alpha)) {
    throw PreconditionError("mechanism is not feasible for the user LP at alpha = " + to_string(alpha.alpha()));
  }
  const Rational& a = alpha.alpha();
  const int n = m.n();
  std::vector<std::vector<Cell>> grid(static_cast<std::size_t>(n),
                                      std::vector<Cell>(static_cast<std::size_t>(n) + 1, Cell::kSlack));
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r <= n; ++r) {
      const Rational& upper = m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(r));
      const Rational& lower = m.at(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(r));
      Cell& cell = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
      if (upper == 0 && lower == 0) {
        cell = Cell::kZero;
      } else if (a * upper == lower) {
        cell = Cell::kDown;
      } else if (upper == a * lower) {
        cell = Cell::kUp;
      }
    }
  }
  return ConstraintMatrix(std::move(grid));
}

SlackAccounting account(const ConstraintMatrix& c) {
  SlackAccounting acc;
  int running = 0;
  for (int r = 0; r < static_cast<int>(c.num_columns()); ++r) {
    if (c.is_zero_column(r)) {
      ++acc.z;
      continue;
    }
    int count = 0;
    for (int i = 0; i < c.n(); ++i) count += c.at(i, r) == Cell::kSlack ? 1 : 0;
    running += count;
    acc.per_column.push_back(count);
    acc.prefix.push_back(running);
  }
  acc.s = running;
  return acc;
}

// ---------------------------------------------------------------------------
// Structure validation

bool StructureReport::all_passed() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const StructureCheck& o) { return o.passed; });
}

const StructureCheck* StructureReport::find(std::string_view name) const {
  for (const auto& o : outcomes) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

StructureReport validate_vertex_structure(const ConstraintMatrix& c, const SlackAccounting& acc) {
  StructureReport report;
  const int n = c.n();
  const std::vector<int> cols = c.non_zero_columns();

  {
    StructureCheck outcome = pass("columns_uniform");
    for (int r : cols) {
      for (int i = 0; i < n; ++i) {
        if (c.at(i, r) == Cell::kZero) {
          outcome = fail("columns_uniform", i, r, "Z inside a column that is not all Z");
          break;
        }
      }
      if (!outcome.passed) break;
    }
    report.outcomes.push_back(std::move(outcome));
  }

  std::vector<int> downs(static_cast<std::size_t>(n), 0);
  std::vector<bool> has_slack(static_cast<std::size_t>(n), false);
  {
    StructureCheck monotone = pass("no_monotone_row");
    StructureCheck pattern = pass("row_pattern");
    for (int i = 0; i < n; ++i) {
      int ups = 0;
      int stage = 0;  // 0: v's, 1: after S, 2: ^'s
      for (int r : cols) {
        const Cell cell = c.at(i, r);
        if (cell == Cell::kDown) ++downs[static_cast<std::size_t>(i)];
        if (cell == Cell::kUp) ++ups;
        if (cell == Cell::kSlack) has_slack[static_cast<std::size_t>(i)] = true;
        if (!pattern.passed) continue;
        bool ok = true;
        switch (cell) {
          case Cell::kDown: ok = stage == 0; break;
          case Cell::kSlack: ok = stage == 0; stage = 1; break;
          case Cell::kUp: stage = 2; break;
          case Cell::kZero: ok = false; break;
        }
        if (!ok) pattern = fail("row_pattern", i, r, "row does not read v* S? ^*");
      }
      const int width = static_cast<int>(cols.size());
      if (monotone.passed && width > 0 && (downs[static_cast<std::size_t>(i)] == width || ups == width)) {
        monotone = fail("no_monotone_row", i, std::nullopt,
                        ups == width ? "row is all ^" : "row is all v");
      }
    }
    report.outcomes.push_back(std::move(monotone));
    report.outcomes.push_back(std::move(pattern));
  }

  {
    StructureCheck outcome = pass("row_progression");
    for (int i = 0; i + 1 < n; ++i) {
      const int need = downs[static_cast<std::size_t>(i)] + (has_slack[static_cast<std::size_t>(i + 1)] ? 0 : 1);
      if (downs[static_cast<std::size_t>(i + 1)] < need) {
        outcome = fail("row_progression", i + 1, std::nullopt,
                       "row has " + std::to_string(downs[static_cast<std::size_t>(i + 1)]) + " v's, needs " +
                           std::to_string(need));
        break;
      }
    }
    report.outcomes.push_back(std::move(outcome));
  }

  report.outcomes.push_back(acc.s >= acc.z ? pass("slack_covers_zero")
                                           : fail("slack_covers_zero", std::nullopt, std::nullopt,
                                                  "s = " + std::to_string(acc.s) + " < z = " + std::to_string(acc.z)));
  report.outcomes.push_back(acc.s == acc.z ? pass("slack_equals_zero")
                                           : fail("slack_equals_zero", std::nullopt, std::nullopt,
                                                  "s = " + std::to_string(acc.s) + " != z = " + std::to_string(acc.z)));

  {
    StructureCheck outcome = pass("column_pattern");
    for (std::size_t k = 0; k < cols.size() && k < acc.per_column.size() && outcome.passed; ++k) {
      const int before = k == 0 ? 0 : acc.prefix[k - 1];
      const int ups = static_cast<int>(k) + before;
      const int slacks = acc.per_column[k];
      for (int i = 0; i < n; ++i) {
        const Cell expected = i < ups ? Cell::kUp : (i < ups + slacks ? Cell::kSlack : Cell::kDown);
        if (c.at(i, cols[k]) != expected) {
          outcome = fail("column_pattern", i, cols[k],
                         std::string("expected '") + static_cast<char>(expected) + "'");
          break;
        }
      }
    }
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

Remap derive_remap_from_constraint_matrix(const ConstraintMatrix& c, const SlackAccounting& acc, int n) {
  if (c.n() != n) throw StructuralError("constraint matrix size does not match n");
  const StructureReport report = validate_vertex_structure(c, acc);
  if (!report.all_passed()) {
    for (const auto& o : report.outcomes) {
      if (!o.passed) throw StructuralError("constraint matrix fails " + o.name + ": " + o.detail);
    }
  }
  const std::vector<int> cols = c.non_zero_columns();
  std::vector<int> labels(static_cast<std::size_t>(n) + 1);
  std::vector<int> image(labels.size(), -1);
  for (int r = 0; r <= n; ++r) labels[static_cast<std::size_t>(r)] = r;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const int first = static_cast<int>(k) + (k == 0 ? 0 : acc.prefix[k - 1]);
    const int last = static_cast<int>(k) + acc.prefix[k];
    for (int source = first; source <= last; ++source) {
      if (source > n || image[static_cast<std::size_t>(source)] != -1) {
        throw StructuralError("derived remap is not well defined at source " + std::to_string(source));
      }
      image[static_cast<std::size_t>(source)] = cols[k];
    }
  }
  if (std::find(image.begin(), image.end(), -1) != image.end()) {
    throw StructuralError("derived remap leaves a source unmapped");
  }
  return Remap::deterministic(labels, labels, image);
}

// ---------------------------------------------------------------------------
// Harnesses

FactorizationRecord verify_factorization(const UserModel& u, const PrivacyLevel& alpha, int n) {
  return verify_factorization(u, alpha, n, default_loss_tolerance());
}

FactorizationRecord verify_factorization(const UserModel& u, const PrivacyLevel& alpha, int n,
                                         const Real& tolerance) {
  FactorizationRecord record;
  record.n = n;
  record.alpha = alpha.alpha();

  const Mechanism geometric = truncated_geometric({alpha, n});
  const Remap bayes = optimal_remap(geometric, u);
  record.remap = *bayes.as_map();
  record.remap_loss = expected_loss(compose(bayes, geometric), u);

  const VertexSolution vertex = optimal_mechanism_for_user(u, alpha, n);
  record.lp_loss = vertex.objective;
  record.alternative_optimum_directions = vertex.alternative_optimum_directions;
  record.exact = record.remap_loss.is_exact() && record.lp_loss.is_exact();
  record.difference = loss_difference(record.remap_loss, record.lp_loss);
  const bool losses_equal = loss_equal(record.remap_loss, record.lp_loss, tolerance);

  const ConstraintMatrix matrix = constraint_matrix(vertex.mechanism, alpha);
  const SlackAccounting acc = account(matrix);
  record.vertex_structure_passed = validate_vertex_structure(matrix, acc).all_passed();
  if (record.vertex_structure_passed) {
    const Remap derived = derive_remap_from_constraint_matrix(matrix, acc, n);
    record.reconstruction_matches = compose(derived, geometric) == vertex.mechanism;
  }

  record.passed = losses_equal && vertex.optimality_certified && record.vertex_structure_passed &&
                  record.reconstruction_matches;
  if (!losses_equal) {
    record.failure = "remapped geometric loss differs from LP optimum";
  } else if (!vertex.optimality_certified) {
    record.failure = "LP vertex failed the high-precision optimality check";
  } else if (!record.vertex_structure_passed) {
    record.failure = "LP vertex constraint matrix fails structural checks";
  } else if (!record.reconstruction_matches) {
    record.failure = "derived remap of G does not reproduce the LP vertex";
  }
  return record;
}

UniquenessVerdict verify_uniqueness(const PrivacyLevel& alpha, int n, const Mechanism& candidate) {
  UniquenessVerdict verdict;
  std::set<int> labels(candidate.responses().begin(), candidate.responses().end());
  std::set<int> canonical;
  for (int r = 0; r <= n; ++r) canonical.insert(r);
  if (candidate.n() != n || labels != canonical) {
    verdict.reason = "candidate does not have range 0..n";
    return verdict;
  }
  if (!check_row_stochastic(candidate) || !check_differential_privacy(candidate, alpha)) {
    verdict.reason = "candidate is not an alpha-differentially private mechanism";
    return verdict;
  }

  const UserModel user = UserModel::uniform(n, LossFunction::binary());
  const Remap remap = optimal_remap(candidate, user);
  verdict.remap = *remap.as_map();
  verdict.remap_is_permutation = remap.is_permutation();
  verdict.induces_geometric = compose(remap, candidate) == truncated_geometric({alpha, n});
  verdict.equivalent = verdict.remap_is_permutation && verdict.induces_geometric;
  if (verdict.equivalent) {
    verdict.reason = "candidate is a relabeling of the truncated geometric mechanism";
  } else if (!verdict.induces_geometric) {
    verdict.reason = "uniform binary-loss user's optimal remap does not induce the truncated geometric mechanism";
  } else {
    verdict.reason = "uniform binary-loss user's optimal remap is not a permutation";
  }
  return verdict;
}

UserModel random_user(int n, std::mt19937_64& rng) {
  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<bool> support(size);
  std::size_t count = 0;
  std::bernoulli_distribution zero(0.25);
  for (std::size_t i = 0; i < size; ++i) {
    support[i] = !zero(rng);
    count += support[i] ? 1 : 0;
  }
  if (count == 0) {
    support[std::uniform_int_distribution<std::size_t>(0, size - 1)(rng)] = true;
    count = 1;
  }
  // D units spread over the support, each supported entry receiving >= 1.
  const int denominator = std::uniform_int_distribution<int>(static_cast<int>(count), 64)(rng);
  std::vector<int> units(size, 0);
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < size; ++i) {
    if (support[i]) {
      units[i] = 1;
      slots.push_back(i);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
  for (int k = static_cast<int>(count); k < denominator; ++k) ++units[slots[pick(rng)]];
  std::vector<Rational> prior(size);
  for (std::size_t i = 0; i < size; ++i) prior[i] = Rational(units[i], denominator);

  static const Rational kExponents[] = {Rational(1, 2), Rational(3, 2), Rational(5, 2)};
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return UserModel(std::move(prior), LossFunction::absolute());
    case 1: return UserModel(std::move(prior), LossFunction::squared());
    case 2: return UserModel(std::move(prior), LossFunction::binary());
    default:
      return UserModel(std::move(prior),
                       LossFunction::power(kExponents[std::uniform_int_distribution<int>(0, 2)(rng)]));
  }
}

SweepReport run_factorization_sweep(const SweepOptions& options) {
  if (options.max_n < 1) throw PreconditionError("sweep needs max_n >= 1");
  if (options.alphas.empty()) throw PreconditionError("sweep needs at least one alpha");
  if (options.trials < 0) throw PreconditionError("sweep needs a non-negative trial count");
  for (const auto& a : options.alphas) PrivacyLevel(a).require_interior("sweep");

  const auto start = std::chrono::steady_clock::now();
  const auto total = static_cast<std::size_t>(options.trials);
  std::vector<std::optional<SweepTrial>> slots(total);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(t)};
      std::mt19937_64 rng(seq);
      const int n = std::uniform_int_distribution<int>(1, options.max_n)(rng);
      const Rational& a =
          options.alphas[std::uniform_int_distribution<std::size_t>(0, options.alphas.size() - 1)(rng)];
      UserModel user = random_user(n, rng);
      FactorizationRecord record;
      try {
        record = verify_factorization(user, PrivacyLevel(a), n);
      } catch (const std::exception& e) {
        record.n = n;
        record.alpha = a;
        record.passed = false;
        record.failure = std::string("exception: ") + e.what();
      }
      slots[t] = SweepTrial{static_cast<int>(t), std::move(user), std::move(record)};
    }
  };

  unsigned workers = options.workers != 0 ? options.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(total, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  SweepReport report;
  for (auto& slot : slots) {
    if (slot->record.passed) {
      ++report.passed;
    } else {
      ++report.failed;
    }
    report.trials.push_back(std::move(*slot));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace privopt

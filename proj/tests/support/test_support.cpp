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

#include "test_support.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "privopt/mechanisms.hpp"

namespace privopt::testing {

std::filesystem::path data_dir() { return PRIVOPT_TEST_DATA_DIR; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

UserModel figure2_user() {
  return UserModel({Rational(1, 4), 0, Rational(1, 4), 0, Rational(1, 4), Rational(1, 4)},
                   LossFunction::power(Rational(3, 2)));
}

Mechanism figure2_mechanism() {
  auto q = [](long p, long d) { return Rational(p, d); };
  RationalMatrix rows = {
      {q(2, 3), 0, q(1, 4), q(1, 24), q(1, 48), q(1, 48)},
      {q(1, 3), 0, q(1, 2), q(1, 12), q(1, 24), q(1, 24)},
      {q(1, 6), 0, q(1, 2), q(1, 6), q(1, 12), q(1, 12)},
      {q(1, 12), 0, q(1, 4), q(1, 3), q(1, 6), q(1, 6)},
      {q(1, 24), 0, q(1, 8), q(1, 6), q(1, 3), q(1, 3)},
      {q(1, 48), 0, q(1, 16), q(1, 12), q(1, 6), q(2, 3)},
  };
  return Mechanism(5, {0, 1, 2, 3, 4, 5}, std::move(rows));
}

UserModel example2_user() {
  return UserModel({Rational(1, 2), 0, 0, 0, 0, Rational(1, 2)}, LossFunction::binary());
}

Rational random_probability(std::mt19937_64& rng, int max_den) {
  const int den = std::uniform_int_distribution<int>(1, max_den)(rng);
  const int num = std::uniform_int_distribution<int>(0, den)(rng);
  return Rational(num, den);
}

std::vector<Rational> random_distribution(std::size_t size, std::mt19937_64& rng, int max_den, bool allow_zeros) {
  std::vector<int> weights(size);
  int total = 0;
  for (auto& w : weights) {
    w = std::uniform_int_distribution<int>(allow_zeros ? 0 : 1, max_den)(rng);
    total += w;
  }
  if (total == 0) {
    weights[std::uniform_int_distribution<std::size_t>(0, size - 1)(rng)] = 1;
    total = 1;
  }
  std::vector<Rational> out;
  out.reserve(size);
  for (int w : weights) out.emplace_back(w, total);
  return out;
}

LossFunction random_loss(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return LossFunction::absolute();
    case 1: return LossFunction::squared();
    case 2: return LossFunction::binary();
    default: {
      static const Rational kExponents[] = {Rational(1, 2), Rational(3, 2), Rational(5, 2), Rational(3)};
      return LossFunction::power(kExponents[std::uniform_int_distribution<int>(0, 3)(rng)]);
    }
  }
}

UserModel random_test_user(int n, std::mt19937_64& rng) {
  auto prior = random_distribution(static_cast<std::size_t>(n) + 1, rng, 9, true);
  return UserModel(std::move(prior), random_loss(rng));
}

RationalMatrix random_stochastic(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  RationalMatrix out;
  for (std::size_t k = 0; k < rows; ++k) out.push_back(random_distribution(cols, rng, 6, true));
  return out;
}

Remap random_remap(const std::vector<int>& sources, const std::vector<int>& targets, std::mt19937_64& rng,
                   bool deterministic) {
  if (deterministic) {
    std::vector<int> image;
    for (std::size_t a = 0; a < sources.size(); ++a) {
      image.push_back(targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)]);
    }
    return Remap::deterministic(sources, targets, image);
  }
  return Remap(sources, targets, random_stochastic(sources.size(), targets.size(), rng));
}

Mechanism random_private_mechanism(const PrivacyLevel& alpha, int n, int responses, std::mt19937_64& rng) {
  const int window = std::uniform_int_distribution<int>(0, 2)(rng);
  const Mechanism base = window == 0 ? truncated_geometric({alpha, n}) : windowed_geometric({alpha, n}, window);
  std::vector<int> labels(static_cast<std::size_t>(responses));
  for (int r = 0; r < responses; ++r) labels[static_cast<std::size_t>(r)] = r;
  const bool deterministic = std::bernoulli_distribution(0.5)(rng);
  return compose(random_remap(base.responses(), labels, rng, deterministic), base);
}

LossValue loss_by_definition(const Mechanism& x, const UserModel& u) {
  if (u.loss().is_rational()) {
    Rational total = 0;
    for (std::size_t i = 0; i < x.num_results(); ++i) {
      for (std::size_t c = 0; c < x.num_responses(); ++c) {
        total += u.prior()[i] * x.at(i, c) * u.loss().exact(static_cast<int>(i), x.responses()[c]);
      }
    }
    return LossValue::of(total);
  }
  Real total = 0;
  for (std::size_t i = 0; i < x.num_results(); ++i) {
    for (std::size_t c = 0; c < x.num_responses(); ++c) {
      total += to_real(u.prior()[i] * x.at(i, c)) * u.loss().real(static_cast<int>(i), x.responses()[c]);
    }
  }
  return LossValue::of(total);
}

namespace {

// Solves A s = 1 (rows x k). Returns false unless the solution exists and is
// unique.
bool solve_unique(RationalMatrix a, std::vector<Rational>& solution) {
  const std::size_t rows = a.size();
  const std::size_t k = a.front().size();
  for (auto& row : a) row.push_back(1);
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < k && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    const Rational inv = 1 / a[rank][col];
    for (auto& v : a[rank]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = col; j <= k; ++j) a[r][j] -= f * a[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < k) return false;
  for (std::size_t r = rank; r < rows; ++r) {
    if (a[r][k] != 0) return false;
  }
  solution.assign(k, Rational(0));
  for (std::size_t r = 0; r < rank; ++r) solution[pivot_col[r]] = a[r][k];
  return true;
}

}  // namespace

std::vector<Mechanism> enumerate_vertices(const PrivacyLevel& alpha, int n) {
  const Rational& a = alpha.alpha();
  const auto width = static_cast<std::size_t>(n) + 1;
  // Column patterns: empty string for an all-zero column, else n cells.
  std::vector<std::string> patterns = {""};
  std::function<void(std::string)> grow = [&](std::string p) {
    if (p.size() == static_cast<std::size_t>(n)) {
      patterns.push_back(p);
      return;
    }
    for (char c : {'v', '^', 'S'}) grow(p + c);
  };
  grow("");

  std::vector<Mechanism> vertices;
  std::set<std::string> seen;
  std::vector<std::size_t> choice(width);

  auto segments_of = [](const std::string& p) {
    if (p.empty()) return 0;
    int s = 1;
    for (char c : p) s += c == 'S' ? 1 : 0;
    return s;
  };

  std::function<void(std::size_t, int)> visit = [&](std::size_t col, int segments) {
    if (col == width) {
      if (segments == 0) return;
      // Coefficient of each entry relative to its segment's top entry.
      RationalMatrix coef(width, std::vector<Rational>(width));
      std::vector<std::vector<int>> segment(width, std::vector<int>(width, -1));
      RationalMatrix system(width, std::vector<Rational>(static_cast<std::size_t>(segments)));
      int next = 0;
      for (std::size_t r = 0; r < width; ++r) {
        const std::string& p = patterns[choice[r]];
        if (p.empty()) continue;
        Rational value = 1;
        int id = next++;
        for (std::size_t i = 0; i < width; ++i) {
          if (i > 0) {
            const char cell = p[i - 1];
            if (cell == 'S') {
              id = next++;
              value = 1;
            } else if (cell == 'v') {
              value *= a;
            } else {
              value /= a;
            }
          }
          coef[i][r] = value;
          segment[i][r] = id;
          system[i][static_cast<std::size_t>(id)] += value;
        }
      }
      std::vector<Rational> scale;
      if (!solve_unique(system, scale)) return;
      for (const auto& s : scale) {
        if (s <= 0) return;
      }
      RationalMatrix rows(width, std::vector<Rational>(width));
      for (std::size_t i = 0; i < width; ++i) {
        for (std::size_t r = 0; r < width; ++r) {
          if (segment[i][r] >= 0) rows[i][r] = coef[i][r] * scale[static_cast<std::size_t>(segment[i][r])];
        }
      }
      // Slack cells must actually satisfy the ratio bounds.
      for (std::size_t i = 0; i + 1 < width; ++i) {
        for (std::size_t r = 0; r < width; ++r) {
          if (a * rows[i + 1][r] > rows[i][r] || a * rows[i][r] > rows[i + 1][r]) return;
        }
      }
      std::string key;
      for (const auto& row : rows) {
        for (const auto& v : row) key += to_string(v) + ",";
      }
      if (!seen.insert(key).second) return;
      std::vector<int> labels(width);
      for (std::size_t r = 0; r < width; ++r) labels[r] = static_cast<int>(r);
      vertices.emplace_back(n, std::move(labels), std::move(rows));
      return;
    }
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      const int s = segments_of(patterns[p]);
      if (segments + s > static_cast<int>(width)) continue;
      choice[col] = p;
      visit(col + 1, segments + s);
    }
  };
  visit(0, 0);
  return vertices;
}

namespace {

// Expected loss when result i is drawn from database choice[i], written out.
LossValue loss_at_choice(const FullMechanism& x, const UserModel& u, const std::vector<std::size_t>& choice) {
  LossValue total = LossValue::of(Rational(0));
  for (std::size_t i = 0; i < choice.size(); ++i) {
    for (std::size_t c = 0; c < x.responses().size(); ++c) {
      total = total + (u.prior()[i] * x.at(choice[i], c)) *
                          u.loss().value(static_cast<int>(i), x.responses()[c]);
    }
  }
  return total;
}

}  // namespace

LossValue worst_case_by_enumeration(const FullMechanism& x, const UserModel& u, const DatabaseSpace& space) {
  const int n = space.rows();
  std::vector<std::size_t> cursor(static_cast<std::size_t>(n) + 1, 0);
  std::optional<LossValue> best;
  while (true) {
    std::vector<std::size_t> choice;
    for (int i = 0; i <= n; ++i) choice.push_back(space.result_class(i)[cursor[static_cast<std::size_t>(i)]]);
    LossValue v = loss_at_choice(x, u, choice);
    if (!best || loss_less(*best, v, Real(0))) best = v;
    int k = 0;
    while (k <= n && ++cursor[static_cast<std::size_t>(k)] == space.result_class(k).size()) {
      cursor[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k > n) break;
  }
  return *best;
}

}  // namespace privopt::testing

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

#include "privopt/remap.hpp"

#include <string>

namespace privopt {

namespace {

// Two inexact posterior risks closer than this are treated as a tie.
Real tie_tolerance() {
  const int digits = static_cast<int>(real_precision());
  return boost::multiprecision::pow(Real(10), -(digits - 10));
}

std::vector<int> result_labels(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) labels[static_cast<std::size_t>(i)] = i;
  return labels;
}

void require_matching(const Mechanism& x, const UserModel& u) {
  if (u.prior().size() != x.num_results()) {
    throw StructuralError("user prior has " + std::to_string(u.prior().size()) + " entries; mechanism has " +
                          std::to_string(x.num_results()) + " results");
  }
}

}  // namespace

Posterior posterior(const Mechanism& x, const UserModel& u) {
  require_matching(x, u);
  std::vector<Rational> marginal(x.num_responses());
  std::vector<std::optional<std::vector<Rational>>> columns(x.num_responses());
  for (std::size_t c = 0; c < x.num_responses(); ++c) {
    std::vector<Rational> joint(x.num_results());
    for (std::size_t i = 0; i < x.num_results(); ++i) {
      joint[i] = x.at(i, c) * u.prior()[i];
      marginal[c] += joint[i];
    }
    if (marginal[c] == 0) continue;
    for (auto& v : joint) v /= marginal[c];
    columns[c] = std::move(joint);
  }
  return Posterior(std::move(marginal), std::move(columns));
}

Remap optimal_remap(const Mechanism& x, const UserModel& u) {
  const Posterior post = posterior(x, u);
  const LossFunction& loss = u.loss();
  const int n = x.n();
  const Real tolerance = tie_tolerance();

  std::vector<int> image(x.num_responses(), 0);
  for (std::size_t c = 0; c < x.num_responses(); ++c) {
    if (!post.reachable(c)) continue;
    const auto& p = post.at(c);
    std::optional<LossValue> best;
    for (int choice = 0; choice <= n; ++choice) {
      LossValue risk = LossValue::of(Rational(0));
      if (!loss.is_rational()) risk = LossValue::of(Real(0));
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] != 0) risk = risk + p[i] * loss.value(static_cast<int>(i), choice);
      }
      if (!best || loss_less(risk, *best, tolerance)) {
        best = std::move(risk);
        image[c] = choice;
      }
    }
  }
  return Remap::deterministic(x.responses(), result_labels(n), image);
}

BruteForceRemap brute_force_optimal_remap(const Mechanism& x, const UserModel& u, std::uint64_t limit) {
  require_matching(x, u);
  const auto choices = static_cast<std::uint64_t>(x.n()) + 1;
  const std::size_t sources = x.num_responses();
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < sources; ++k) {
    if (total > limit / choices) {
      throw CapacityError("deterministic remap enumeration exceeds " + std::to_string(limit) + " candidates");
    }
    total *= choices;
  }

  // cost[a][t]: contribution to the expected loss of sending source a to
  // target t, i.e. sum_i p_i x[i][a] l(i, t).
  const LossFunction& loss = u.loss();
  std::vector<std::vector<LossValue>> cost(sources);
  for (std::size_t a = 0; a < sources; ++a) {
    for (std::uint64_t t = 0; t < choices; ++t) {
      LossValue acc = loss.is_rational() ? LossValue::of(Rational(0)) : LossValue::of(Real(0));
      for (std::size_t i = 0; i < x.num_results(); ++i) {
        const Rational w = u.prior()[i] * x.at(i, a);
        if (w != 0) acc = acc + w * loss.value(static_cast<int>(i), static_cast<int>(t));
      }
      cost[a].push_back(std::move(acc));
    }
  }

  const Real tolerance = tie_tolerance();
  std::vector<int> digits(sources, 0);
  std::vector<int> best_image;
  std::optional<LossValue> best;
  for (std::uint64_t candidate = 0; candidate < total; ++candidate) {
    LossValue value = cost[0][static_cast<std::size_t>(digits[0])];
    for (std::size_t a = 1; a < sources; ++a) value = value + cost[a][static_cast<std::size_t>(digits[a])];
    if (!best || loss_less(value, *best, tolerance)) {
      best = std::move(value);
      best_image = digits;
    }
    for (std::size_t a = sources; a-- > 0;) {
      if (++digits[a] < static_cast<int>(choices)) break;
      digits[a] = 0;
    }
  }
  return BruteForceRemap{Remap::deterministic(x.responses(), result_labels(x.n()), best_image), *best, total};
}

}  // namespace privopt

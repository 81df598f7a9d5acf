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

#ifndef PRIVOPT_REMAP_HPP_
#define PRIVOPT_REMAP_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "privopt/core.hpp"

namespace privopt {

/// Bayes posteriors over results, one per response column.
class Posterior {
 public:
  Posterior(std::vector<Rational> marginal, std::vector<std::optional<std::vector<Rational>>> columns)
      : marginal_(std::move(marginal)), columns_(std::move(columns)) {}

  std::size_t num_responses() const { return columns_.size(); }

  // Probability of observing each response under the prior.
  const std::vector<Rational>& marginal() const { return marginal_; }

  bool reachable(std::size_t column) const { return columns_[column].has_value(); }

  // p(. | response); only valid for reachable columns.
  const std::vector<Rational>& at(std::size_t column) const { return *columns_[column]; }

 private:
  std::vector<Rational> marginal_;
  std::vector<std::optional<std::vector<Rational>>> columns_;
};

Posterior posterior(const Mechanism& x, const UserModel& u);

/**
 * Deterministic Bayes remap onto the results 0..n: every reachable response
 * goes to the result minimizing posterior expected loss (smallest index on
 * ties); unreachable responses go to result 0.
 */
Remap optimal_remap(const Mechanism& x, const UserModel& u);

struct BruteForceRemap {
  Remap remap;
  LossValue loss;
  std::uint64_t candidates = 0;
};

constexpr std::uint64_t kDefaultEnumerationLimit = 10'000'000;

// Exhaustive search over all (n+1)^|responses| deterministic remaps onto
// 0..n. Throws CapacityError above `limit` candidates.
BruteForceRemap brute_force_optimal_remap(const Mechanism& x, const UserModel& u,
                                          std::uint64_t limit = kDefaultEnumerationLimit);

}  // namespace privopt

#endif  // PRIVOPT_REMAP_HPP_

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

#include <random>

#include <gtest/gtest.h>

#include "privopt/mechanisms.hpp"
#include "privopt/simplex.hpp"
#include "test_support.hpp"

namespace privopt {
namespace {

const PrivacyLevel kHalf(Rational(1, 2));

TEST(Posterior, IdentityGivesPointMasses) {
  const UserModel u({Rational(1, 2), Rational(1, 4), 0, Rational(1, 4)}, LossFunction::absolute());
  const Posterior post = posterior(Mechanism::identity(3), u);
  for (std::size_t r = 0; r < 4; ++r) {
    if (u.prior()[r] == 0) {
      EXPECT_FALSE(post.reachable(r));
      continue;
    }
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(post.at(r)[i], i == r ? 1 : 0);
  }
}

TEST(Posterior, SingleBitGeometricUniformPrior) {
  // Hand expansion: p(0|0) = (1/2 * 2/3) / (1/2 * 2/3 + 1/2 * 1/3).
  const Posterior post = posterior(truncated_geometric({kHalf, 1}), UserModel::uniform(1, LossFunction::binary()));
  const Rational joint0 = Rational(1, 2) * Rational(2, 3);
  const Rational joint1 = Rational(1, 2) * Rational(1, 3);
  EXPECT_EQ(post.at(0)[0], joint0 / (joint0 + joint1));
  EXPECT_EQ(post.at(0), (std::vector<Rational>{Rational(2, 3), Rational(1, 3)}));
  EXPECT_EQ(post.marginal()[0], Rational(1, 2));
}

TEST(Posterior, PointMassPrior) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Mechanism x = testing::random_private_mechanism(kHalf, 4, 5, rng);
    std::vector<Rational> prior(5);
    prior[2] = 1;
    const Posterior post = posterior(x, UserModel(prior, LossFunction::absolute()));
    for (std::size_t r = 0; r < x.num_responses(); ++r) {
      if (!post.reachable(r)) continue;
      for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(post.at(r)[i], i == 2 ? 1 : 0);
    }
  }
}

TEST(PosteriorProperty, ReachablePosteriorsSumToOne) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    const Mechanism x = testing::random_private_mechanism(kHalf, n, n + 2, rng);
    const Posterior post = posterior(x, testing::random_test_user(n, rng));
    for (std::size_t r = 0; r < post.num_responses(); ++r) {
      if (!post.reachable(r)) {
        EXPECT_EQ(post.marginal()[r], 0);
        continue;
      }
      Rational sum = 0;
      for (const auto& v : post.at(r)) sum += v;
      EXPECT_EQ(sum, 1);
    }
  }
}

TEST(OptimalRemap, Example2Threshold) {
  const Remap y = optimal_remap(truncated_geometric({kHalf, 5}), testing::example2_user());
  EXPECT_EQ(*y.as_map(), (std::vector<int>{0, 0, 0, 5, 5, 5}));
}

TEST(OptimalRemap, IdentityStaysIdentity) {
  const UserModel u({Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}, LossFunction::squared());
  EXPECT_EQ(*optimal_remap(Mechanism::identity(3), u).as_map(), (std::vector<int>{0, 1, 2, 3}));
}

TEST(OptimalRemap, Figure2UserOnG) {
  const Remap y = optimal_remap(truncated_geometric({kHalf, 5}), testing::figure2_user());
  EXPECT_EQ(*y.as_map(), (std::vector<int>{0, 2, 2, 3, 4, 5}));
  // Independent confirmation by enumeration of all 6^6 maps.
  const BruteForceRemap brute = brute_force_optimal_remap(truncated_geometric({kHalf, 5}), testing::figure2_user());
  EXPECT_EQ(*brute.remap.as_map(), (std::vector<int>{0, 2, 2, 3, 4, 5}));
  EXPECT_EQ(brute.candidates, 46656U);
}

TEST(OptimalRemap, UnreachableResponsesGoToZero) {
  const Mechanism x(1, {0, 1, 2}, {{Rational(1, 2), 0, Rational(1, 2)}, {Rational(1, 2), 0, Rational(1, 2)}});
  const UserModel u({0, 1}, LossFunction::absolute());
  EXPECT_EQ(*optimal_remap(x, u).as_map(), (std::vector<int>{1, 0, 1}));
}

TEST(BruteForce, SingleBitAgreesWithBayes) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Mechanism x = testing::random_private_mechanism(kHalf, 1, 2, rng);
    const UserModel u = testing::random_test_user(1, rng);
    const BruteForceRemap brute = brute_force_optimal_remap(x, u);
    EXPECT_EQ(brute.candidates, 4U);
    EXPECT_TRUE(loss_equal(brute.loss, expected_loss(compose(optimal_remap(x, u), x), u), default_loss_tolerance()));
  }
}

TEST(BruteForce, Example2Loss) {
  const BruteForceRemap brute = brute_force_optimal_remap(truncated_geometric({kHalf, 5}), testing::example2_user());
  ASSERT_TRUE(brute.loss.exact);
  EXPECT_EQ(*brute.loss.exact, Rational(1, 12));
}

TEST(BruteForce, CapacityGuard) {
  const Mechanism x = windowed_geometric({kHalf, 6}, 3);  // 13 responses, 7 targets
  EXPECT_THROW(brute_force_optimal_remap(x, UserModel::uniform(6, LossFunction::binary())), CapacityError);
  EXPECT_THROW(brute_force_optimal_remap(truncated_geometric({kHalf, 3}), UserModel::uniform(3, LossFunction::binary()),
                                         100),
               CapacityError);
}

TEST(RemapProperty, BayesMatchesBruteForceOnRandomUsers) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const PrivacyLevel alpha(Rational(std::uniform_int_distribution<int>(1, 3)(rng), 4));
    const int responses = std::uniform_int_distribution<int>(1, n + 2)(rng);
    const Mechanism x = testing::random_private_mechanism(alpha, n, responses, rng);
    const UserModel u = testing::random_test_user(n, rng);
    const LossValue bayes = expected_loss(compose(optimal_remap(x, u), x), u);
    const BruteForceRemap brute = brute_force_optimal_remap(x, u);
    EXPECT_TRUE(loss_equal(bayes, brute.loss, default_loss_tolerance()))
        << "trial " << trial << ": " << bayes.to_string() << " vs " << brute.loss.to_string();
    if (u.loss().is_rational()) EXPECT_TRUE(bayes.exact && brute.loss.exact);
  }
}

// Loss is linear in the remap rows, so an LP over randomized remaps
// (rational losses) can never beat the deterministic Bayes remap.
TEST(RemapProperty, NoRandomizedRemapBeatsBayes) {
  std::mt19937_64 rng(25);
  int checked = 0;
  while (checked < 60) {
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const Mechanism x = testing::random_private_mechanism(kHalf, n, n + 1, rng);
    const UserModel u = testing::random_test_user(n, rng);
    if (!u.loss().is_rational()) continue;
    ++checked;
    const std::size_t k = x.num_responses();
    const auto t = static_cast<std::size_t>(n) + 1;
    lp::Problem p;
    p.num_vars = k * t;
    std::vector<Rational> cost(p.num_vars);
    for (std::size_t a = 0; a < k; ++a) {
      lp::Constraint sum{{}, lp::Sense::kEqual, Rational(1), {}};
      for (std::size_t b = 0; b < t; ++b) {
        sum.terms.push_back({a * t + b, Rational(1)});
        for (std::size_t i = 0; i < t; ++i) {
          cost[a * t + b] += u.prior()[i] * x.at(i, a) * u.loss().exact(static_cast<int>(i), static_cast<int>(b));
        }
      }
      p.constraints.push_back(std::move(sum));
    }
    p.objectives = {cost};
    lp::Simplex s(p);
    ASSERT_EQ(s.solve(), lp::Status::kOptimal);
    const LossValue bayes = expected_loss(compose(optimal_remap(x, u), x), u);
    EXPECT_EQ(*bayes.exact, s.objective_values()[0]);
  }
}

}  // namespace
}  // namespace privopt

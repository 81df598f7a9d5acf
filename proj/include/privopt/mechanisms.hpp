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

#ifndef PRIVOPT_MECHANISMS_HPP_
#define PRIVOPT_MECHANISMS_HPP_

#include <vector>

#include "privopt/core.hpp"

namespace privopt {

struct GeometricSpec {
  PrivacyLevel alpha;
  int n;
};

// Two-sided geometric noise: ((1 - alpha) / (1 + alpha)) * alpha^|z|.
Rational geometric_pmf(const PrivacyLevel& alpha, long z);

// Mass of the geometric noise at or beyond +k (k >= 1), by symmetry
// (1 - sum_{|z| < k} pmf(z)) / 2. Computed from pmf partial sums, not from
// the closed form.
Rational geometric_tail(const PrivacyLevel& alpha, long k);

/**
 * Geometric mechanism clamped to 0..n: negative outputs read as 0, outputs
 * above n read as n. Interior columns hold pmf(r - i); the end columns hold
 * alpha^i / (1 + alpha) and alpha^(n-i) / (1 + alpha).
 */
Mechanism truncated_geometric(const GeometricSpec& spec);

/**
 * Finite window of the unclamped geometric mechanism over labels
 * -window..n+window. The two end labels carry the entire tail mass beyond
 * them, so each row is a probability distribution. Any remap that sends all
 * labels <= 0 to 0 and all labels >= n to n yields the truncated mechanism.
 */
Mechanism windowed_geometric(const GeometricSpec& spec, int window);

// Sends labels below 0 to 0, above n to n, and fixes 0..n.
Remap clamp_remap(const std::vector<int>& labels, int n);

// Bayes-optimal loss of the geometric mechanism for the uniform user over
// {0, 1}: alpha / (1 + alpha). Absolute and binary loss agree there.
Rational geometric_two_point_loss(const PrivacyLevel& alpha);

// The same user's loss under Laplace noise with alpha = e^-eps: sqrt(alpha)/2.
// Requires 0 < alpha < 1.
Real laplace_two_point_loss(const PrivacyLevel& alpha);

// laplace_two_point_loss / geometric_two_point_loss.
Real laplace_geometric_ratio(const PrivacyLevel& alpha);

}  // namespace privopt

#endif  // PRIVOPT_MECHANISMS_HPP_

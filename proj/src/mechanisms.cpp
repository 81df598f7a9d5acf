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

#include "privopt/mechanisms.hpp"

#include <algorithm>
#include <cstdlib>

namespace privopt {

Rational geometric_pmf(const PrivacyLevel& alpha, long z) {
  const Rational& a = alpha.alpha();
  return (1 - a) / (1 + a) * pow(a, static_cast<unsigned>(std::labs(z)));
}

Rational geometric_tail(const PrivacyLevel& alpha, long k) {
  if (k < 1) throw PreconditionError("geometric_tail needs k >= 1");
  Rational inner = 0;
  for (long z = -(k - 1); z <= k - 1; ++z) inner += geometric_pmf(alpha, z);
  return (1 - inner) / 2;
}

Mechanism truncated_geometric(const GeometricSpec& spec) {
  if (spec.n < 1) throw PreconditionError("truncated geometric mechanism needs n >= 1");
  const Rational& a = spec.alpha.alpha();
  const auto size = static_cast<std::size_t>(spec.n) + 1;
  std::vector<int> labels(size);
  RationalMatrix rows(size, std::vector<Rational>(size));
  const Rational end_scale = 1 / (1 + a);
  for (std::size_t i = 0; i < size; ++i) {
    labels[i] = static_cast<int>(i);
    for (std::size_t r = 0; r < size; ++r) {
      if (r == 0) {
        rows[i][r] = end_scale * pow(a, static_cast<unsigned>(i));
      } else if (r == size - 1) {
        rows[i][r] = end_scale * pow(a, static_cast<unsigned>(size - 1 - i));
      } else {
        rows[i][r] = geometric_pmf(spec.alpha, static_cast<long>(r) - static_cast<long>(i));
      }
    }
  }
  return Mechanism(spec.n, std::move(labels), std::move(rows));
}

Mechanism windowed_geometric(const GeometricSpec& spec, int window) {
  if (spec.n < 1) throw PreconditionError("geometric mechanism needs n >= 1");
  if (window < 1) throw PreconditionError("window must be at least 1");
  std::vector<int> labels;
  for (int z = -window; z <= spec.n + window; ++z) labels.push_back(z);
  RationalMatrix rows(static_cast<std::size_t>(spec.n) + 1, std::vector<Rational>(labels.size()));
  for (int i = 0; i <= spec.n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < labels.size(); ++c) {
      const long offset = static_cast<long>(labels[c]) - i;
      if (c == 0) {
        row[c] = geometric_tail(spec.alpha, -offset);
      } else if (c + 1 == labels.size()) {
        row[c] = geometric_tail(spec.alpha, offset);
      } else {
        row[c] = geometric_pmf(spec.alpha, offset);
      }
    }
  }
  return Mechanism(spec.n, std::move(labels), std::move(rows));
}

Remap clamp_remap(const std::vector<int>& labels, int n) {
  std::vector<int> targets(static_cast<std::size_t>(n) + 1);
  for (int r = 0; r <= n; ++r) targets[static_cast<std::size_t>(r)] = r;
  std::vector<int> image(labels.size());
  std::transform(labels.begin(), labels.end(), image.begin(), [n](int label) { return std::clamp(label, 0, n); });
  return Remap::deterministic(labels, std::move(targets), image);
}

Rational geometric_two_point_loss(const PrivacyLevel& alpha) {
  const Rational& a = alpha.alpha();
  return a / (1 + a);
}

Real laplace_two_point_loss(const PrivacyLevel& alpha) {
  alpha.require_interior("laplace_two_point_loss");
  return boost::multiprecision::sqrt(to_real(alpha.alpha())) / 2;
}

Real laplace_geometric_ratio(const PrivacyLevel& alpha) {
  return laplace_two_point_loss(alpha) / to_real(geometric_two_point_loss(alpha));
}

}  // namespace privopt

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

#include "privopt/core.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <set>

namespace privopt {

PrivacyLevel::PrivacyLevel(Rational alpha) : alpha_(std::move(alpha)) {
  if (alpha_ < 0 || alpha_ > 1) {
    throw PreconditionError("privacy level " + privopt::to_string(alpha_) + " is outside [0, 1]");
  }
}

void PrivacyLevel::require_interior(std::string_view operation) const {
  if (is_degenerate()) {
    throw PreconditionError(std::string(operation) + ": privacy level " + privopt::to_string(alpha_) +
                            " is degenerate; need 0 < alpha < 1");
  }
}

// ---------------------------------------------------------------------------
// Mechanism

Mechanism::Mechanism(int n, std::vector<int> responses, RationalMatrix rows)
    : n_(n), responses_(std::move(responses)), rows_(std::move(rows)) {
  if (n_ < 0) throw StructuralError("mechanism result bound n must be non-negative");
  if (rows_.size() != static_cast<std::size_t>(n_) + 1) {
    throw StructuralError("mechanism has " + std::to_string(rows_.size()) + " rows, expected n+1 = " +
                          std::to_string(n_ + 1));
  }
  if (responses_.empty()) throw StructuralError("mechanism has no responses");
  std::set<int> seen(responses_.begin(), responses_.end());
  if (seen.size() != responses_.size()) throw StructuralError("duplicate response label");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != responses_.size()) {
      throw StructuralError("row " + std::to_string(i) + " has " + std::to_string(rows_[i].size()) +
                            " entries, expected " + std::to_string(responses_.size()));
    }
  }
}

Mechanism Mechanism::identity(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n) + 1);
  RationalMatrix rows(labels.size(), std::vector<Rational>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<int>(i);
    rows[i][i] = 1;
  }
  return Mechanism(n, std::move(labels), std::move(rows));
}

std::optional<std::size_t> Mechanism::column_of(int label) const {
  auto it = std::find(responses_.begin(), responses_.end(), label);
  if (it == responses_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - responses_.begin());
}

bool Mechanism::has_canonical_range() const {
  if (responses_.size() != static_cast<std::size_t>(n_) + 1) return false;
  for (std::size_t c = 0; c < responses_.size(); ++c) {
    if (responses_[c] != static_cast<int>(c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// LossValue

std::string LossValue::to_string() const {
  if (exact) return privopt::to_string(*exact);
  return to_decimal_string(value, 40);
}

LossValue operator+(const LossValue& a, const LossValue& b) {
  if (a.exact && b.exact) return LossValue::of(Rational(*a.exact + *b.exact));
  return LossValue::of(Real(a.value + b.value));
}

LossValue operator*(const Rational& weight, const LossValue& v) {
  if (v.exact) return LossValue::of(Rational(weight * *v.exact));
  return LossValue::of(Real(to_real(weight) * v.value));
}

Real loss_difference(const LossValue& a, const LossValue& b) {
  if (a.exact && b.exact) return to_real(Rational(*a.exact - *b.exact));
  return a.value - b.value;
}

bool loss_equal(const LossValue& a, const LossValue& b, const Real& tolerance) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return boost::multiprecision::abs(a.value - b.value) <= tolerance;
}

bool loss_less(const LossValue& a, const LossValue& b, const Real& tolerance) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  return a.value < b.value - tolerance;
}

Real default_loss_tolerance() { return Real("1e-30"); }

// ---------------------------------------------------------------------------
// LossFunction

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kAbsolute: return "absolute";
    case LossKind::kSquared: return "squared";
    case LossKind::kBinary: return "binary";
    case LossKind::kPower: return "power";
    case LossKind::kTabulated: return "tabulated";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "absolute") return LossKind::kAbsolute;
  if (text == "squared") return LossKind::kSquared;
  if (text == "binary") return LossKind::kBinary;
  if (text == "power") return LossKind::kPower;
  if (text == "tabulated") return LossKind::kTabulated;
  throw StructuralError("unknown loss kind '" + std::string(text) + "'");
}

LossFunction LossFunction::absolute() { return LossFunction(LossKind::kAbsolute, 1, {}); }
LossFunction LossFunction::squared() { return LossFunction(LossKind::kSquared, 2, {}); }
LossFunction LossFunction::binary() { return LossFunction(LossKind::kBinary, 0, {}); }

LossFunction LossFunction::power(Rational exponent) {
  if (exponent <= 0) throw PreconditionError("power loss exponent must be positive");
  return LossFunction(LossKind::kPower, std::move(exponent), {});
}

LossFunction LossFunction::tabulated(RationalMatrix table) {
  if (table.empty()) throw StructuralError("tabulated loss is empty");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& row = table[i];
    if (row.size() != table.front().size()) throw StructuralError("tabulated loss rows differ in length");
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (row[r] < 0) {
        throw PreconditionError("tabulated loss is negative at (" + std::to_string(i) + ", " +
                                std::to_string(r) + ")");
      }
    }
    const long li = static_cast<long>(i);
    for (std::size_t a = 0; a < row.size(); ++a) {
      for (std::size_t b = 0; b < row.size(); ++b) {
        const long da = std::labs(li - static_cast<long>(a));
        const long db = std::labs(li - static_cast<long>(b));
        if (da < db && row[a] > row[b]) {
          throw PreconditionError("tabulated loss is not non-decreasing in |i-r| for i = " +
                                  std::to_string(i));
        }
      }
    }
  }
  return LossFunction(LossKind::kTabulated, 0, std::move(table));
}

bool LossFunction::is_rational() const {
  return kind_ != LossKind::kPower || denominator(exponent_) == 1;
}

Rational LossFunction::exact(int result, int response) const {
  const long d = std::labs(static_cast<long>(result) - response);
  switch (kind_) {
    case LossKind::kAbsolute: return Rational(d);
    case LossKind::kSquared: return Rational(d * d);
    case LossKind::kBinary: return Rational(d == 0 ? 0 : 1);
    case LossKind::kPower:
      if (!is_rational()) {
        throw PreconditionError("power loss with exponent " + privopt::to_string(exponent_) +
                                " is not rational-valued");
      }
      return pow(Rational(d), numerator(exponent_).convert_to<unsigned>());
    case LossKind::kTabulated:
      if (result < 0 || response < 0 || static_cast<std::size_t>(result) >= table_.size() ||
          static_cast<std::size_t>(response) >= table_.front().size()) {
        throw StructuralError("tabulated loss has no entry for (" + std::to_string(result) + ", " +
                              std::to_string(response) + ")");
      }
      return table_[static_cast<std::size_t>(result)][static_cast<std::size_t>(response)];
  }
  return 0;
}

Real LossFunction::real(int result, int response) const {
  if (is_rational()) return to_real(exact(result, response));
  const long d = std::labs(static_cast<long>(result) - response);
  if (d == 0) return Real(0);
  return boost::multiprecision::pow(Real(d), to_real(exponent_));
}

LossValue LossFunction::value(int result, int response) const {
  if (is_rational()) return LossValue::of(exact(result, response));
  return LossValue::of(real(result, response));
}

// ---------------------------------------------------------------------------
// UserModel

UserModel::UserModel(std::vector<Rational> prior, LossFunction loss)
    : prior_(std::move(prior)), loss_(std::move(loss)) {
  if (prior_.empty()) throw StructuralError("prior is empty");
  Rational total = 0;
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (prior_[i] < 0) throw StructuralError("prior entry " + std::to_string(i) + " is negative");
    total += prior_[i];
  }
  if (total != 1) throw StructuralError("prior sums to " + privopt::to_string(total) + ", not 1");
}

UserModel UserModel::uniform(int n, LossFunction loss) {
  std::vector<Rational> prior(static_cast<std::size_t>(n) + 1, Rational(1, n + 1));
  return UserModel(std::move(prior), std::move(loss));
}

// ---------------------------------------------------------------------------
// Remap

Remap::Remap(std::vector<int> sources, std::vector<int> targets, RationalMatrix rows)
    : sources_(std::move(sources)), targets_(std::move(targets)), rows_(std::move(rows)) {
  if (rows_.size() != sources_.size()) throw StructuralError("remap row count differs from source count");
  if (std::set<int>(sources_.begin(), sources_.end()).size() != sources_.size() ||
      std::set<int>(targets_.begin(), targets_.end()).size() != targets_.size()) {
    throw StructuralError("duplicate remap label");
  }
  deterministic_ = true;
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    if (rows_[a].size() != targets_.size()) throw StructuralError("remap row has wrong length");
    Rational sum = 0;
    int ones = 0;
    for (const Rational& v : rows_[a]) {
      if (v < 0) throw StructuralError("remap row " + std::to_string(a) + " has a negative entry");
      sum += v;
      if (v == 1) ++ones;
    }
    if (sum != 1) throw StructuralError("remap row " + std::to_string(a) + " sums to " + privopt::to_string(sum));
    if (ones != 1) deterministic_ = false;
  }
}

Remap Remap::deterministic(std::vector<int> sources, std::vector<int> targets, const std::vector<int>& image) {
  if (image.size() != sources.size()) throw StructuralError("remap image size differs from source count");
  RationalMatrix rows(sources.size(), std::vector<Rational>(targets.size()));
  for (std::size_t a = 0; a < image.size(); ++a) {
    auto it = std::find(targets.begin(), targets.end(), image[a]);
    if (it == targets.end()) {
      throw StructuralError("remap image label " + std::to_string(image[a]) + " is not a target");
    }
    rows[a][static_cast<std::size_t>(it - targets.begin())] = 1;
  }
  return Remap(std::move(sources), std::move(targets), std::move(rows));
}

Remap Remap::identity(const std::vector<int>& labels) { return deterministic(labels, labels, labels); }

std::optional<std::vector<int>> Remap::as_map() const {
  if (!deterministic_) return std::nullopt;
  std::vector<int> image(sources_.size());
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    for (std::size_t b = 0; b < targets_.size(); ++b) {
      if (rows_[a][b] == 1) image[a] = targets_[b];
    }
  }
  return image;
}

bool Remap::is_permutation() const {
  if (!deterministic_) return false;
  if (std::set<int>(sources_.begin(), sources_.end()) != std::set<int>(targets_.begin(), targets_.end())) {
    return false;
  }
  auto image = *as_map();
  return std::set<int>(image.begin(), image.end()).size() == targets_.size();
}

// ---------------------------------------------------------------------------
// Checks and composition

StochasticityReport check_row_stochastic(const Mechanism& m) {
  StochasticityReport report;
  for (std::size_t i = 0; i < m.num_results(); ++i) {
    Rational sum = 0;
    for (std::size_t c = 0; c < m.num_responses(); ++c) {
      const Rational& v = m.at(i, c);
      if (v < 0 || v > 1) {
        report.ok = false;
        report.row = i;
        report.column = c;
        report.message = "entry (" + std::to_string(i) + ", " + std::to_string(c) + ") = " + to_string(v) +
                         " is outside [0, 1]";
        return report;
      }
      sum += v;
    }
    if (sum != 1) {
      report.ok = false;
      report.row = i;
      report.row_sum = sum;
      report.message = "row " + std::to_string(i) + " sums to " + to_string(sum);
      return report;
    }
  }
  return report;
}

PrivacyReport check_differential_privacy(const Mechanism& m, const PrivacyLevel& level) {
  PrivacyReport report;
  const Rational& a = level.alpha();
  for (std::size_t i = 0; i + 1 < m.num_results(); ++i) {
    for (std::size_t c = 0; c < m.num_responses(); ++c) {
      const Rational& upper = m.at(i, c);
      const Rational& lower = m.at(i + 1, c);
      if (a * lower <= upper && a * upper <= lower) continue;
      report.ok = false;
      report.witness = std::make_pair(i, c);
      report.message = "rows " + std::to_string(i) + " and " + std::to_string(i + 1) + " at response " +
                       std::to_string(m.responses()[c]) + " have ratio outside [alpha, 1/alpha]";
      return report;
    }
  }
  return report;
}

Mechanism compose(const Remap& y, const Mechanism& x) {
  if (y.sources() != x.responses()) throw StructuralError("remap sources do not match mechanism responses");
  RationalMatrix out(x.num_results(), std::vector<Rational>(y.targets().size()));
  for (std::size_t i = 0; i < x.num_results(); ++i) {
    for (std::size_t a = 0; a < x.num_responses(); ++a) {
      const Rational& xa = x.at(i, a);
      if (xa == 0) continue;
      for (std::size_t b = 0; b < y.targets().size(); ++b) {
        const Rational& yab = y.rows()[a][b];
        if (yab != 0) out[i][b] += xa * yab;
      }
    }
  }
  Mechanism result(x.n(), y.targets(), std::move(out));
  assert(!check_row_stochastic(x) || check_row_stochastic(result));
  return result;
}

LossValue expected_loss(const Mechanism& m, const UserModel& u) {
  if (u.prior().size() != m.num_results()) {
    throw StructuralError("user prior has " + std::to_string(u.prior().size()) + " entries; mechanism has " +
                          std::to_string(m.num_results()) + " results");
  }
  const LossFunction& loss = u.loss();
  if (loss.is_rational()) {
    Rational total = 0;
    for (std::size_t i = 0; i < m.num_results(); ++i) {
      if (u.prior()[i] == 0) continue;
      Rational row = 0;
      for (std::size_t c = 0; c < m.num_responses(); ++c) {
        if (m.at(i, c) != 0) row += m.at(i, c) * loss.exact(static_cast<int>(i), m.responses()[c]);
      }
      total += u.prior()[i] * row;
    }
    return LossValue::of(total);
  }
  Real total = 0;
  for (std::size_t i = 0; i < m.num_results(); ++i) {
    if (u.prior()[i] == 0) continue;
    Real row = 0;
    for (std::size_t c = 0; c < m.num_responses(); ++c) {
      if (m.at(i, c) != 0) row += to_real(m.at(i, c)) * loss.real(static_cast<int>(i), m.responses()[c]);
    }
    total += to_real(u.prior()[i]) * row;
  }
  return LossValue::of(total);
}

}  // namespace privopt

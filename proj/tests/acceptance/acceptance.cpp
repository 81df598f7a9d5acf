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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and time limits are fixed below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "privopt/analysis.hpp"
#include "privopt/mechanisms.hpp"
#include "privopt/nonoblivious.hpp"
#include "privopt/optlp.hpp"
#include "privopt/remap.hpp"
#include "test_support.hpp"

namespace privopt {
namespace {

const char* const kPowerTolerance = "1e-30";
const char* const kRatioTolerance = "1e-12";
constexpr double kFigure2Seconds = 1.0;
constexpr double kFigure3Seconds = 0.1;
constexpr double kSweepSeconds = 60.0;
constexpr double kRemapSeconds = 30.0;
constexpr double kObliviateSeconds = 30.0;
constexpr double kCounterexampleSeconds = 1.0;
constexpr std::uint64_t kSweepSeed = 20260401;

const PrivacyLevel kHalf(Rational(1, 2));

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool within(const LossValue& a, const LossValue& b, const Real& tolerance) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return abs(a.value - b.value) <= tolerance;
}

Outcome within_time(Outcome o, double elapsed, double limit) {
  std::ostringstream detail;
  detail << o.detail << (o.detail.empty() ? "" : "; ") << elapsed << " s (limit " << limit << " s)";
  return {o.passed && elapsed < limit, detail.str()};
}

Outcome figure2() {
  const auto start = std::chrono::steady_clock::now();
  const VertexSolution s = optimal_mechanism_for_user(testing::figure2_user(), kHalf, 5);
  const bool equal = s.mechanism == testing::figure2_mechanism();
  return within_time({equal, equal ? "36 entries equal" : "mechanism differs"}, seconds_since(start),
                     kFigure2Seconds);
}

Outcome figure3() {
  const ConstraintMatrix want = ConstraintMatrix::parse(testing::read_text(testing::data_dir() / "fig3-grid.txt"));
  const Mechanism m = testing::figure2_mechanism();
  const auto start = std::chrono::steady_clock::now();
  const ConstraintMatrix c = constraint_matrix(m, kHalf);
  const SlackAccounting acc = account(c);
  const bool structure = validate_vertex_structure(c, acc).all_passed();
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "grid " << (c == want ? "matches" : "differs") << ", structure " << (structure ? "valid" : "invalid")
         << ", s=" << acc.s << " z=" << acc.z;
  return within_time({c == want && structure && acc.s == 1 && acc.z == 1, detail.str()}, elapsed, kFigure3Seconds);
}

struct SweepOutcomes {
  Outcome losses;
  Outcome reconstruction;
};

SweepOutcomes sweep() {
  SweepOptions options;
  options.max_n = 8;
  options.alphas = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  options.trials = 200;
  options.seed = kSweepSeed;
  const auto start = std::chrono::steady_clock::now();
  const SweepReport report = run_factorization_sweep(options);
  const double elapsed = seconds_since(start);

  const Real tolerance(kPowerTolerance);
  int equal = 0, exact = 0, rebuilt = 0;
  Real worst = 0;
  for (const auto& t : report.trials) {
    const FactorizationRecord& r = t.record;
    if (r.remap_loss.exact && r.lp_loss.exact) ++exact;
    if (within(r.remap_loss, r.lp_loss, tolerance)) ++equal;
    worst = std::max(worst, Real(abs(r.remap_loss.value - r.lp_loss.value)));
    if (r.reconstruction_matches) ++rebuilt;
  }
  const int total = static_cast<int>(report.trials.size());
  std::ostringstream losses;
  losses << equal << "/" << total << " equal (" << exact << " exact), max |diff| " << to_decimal_string(worst, 3);
  std::ostringstream rebuild;
  rebuild << rebuilt << "/" << total << " vertices rebuilt";
  return {within_time({total == 200 && equal == total, losses.str()}, elapsed, kSweepSeconds),
          within_time({total == 200 && rebuilt == total, rebuild.str()}, elapsed, kSweepSeconds)};
}

Outcome example2() {
  const UserModel u = testing::example2_user();
  // Untruncated geometric noise; the window catches the tails without
  // changing which responses are correct.
  const LossValue face = expected_loss(windowed_geometric({kHalf, 5}, 1), u);
  const Mechanism g = truncated_geometric({kHalf, 5});
  const LossValue remapped = expected_loss(compose(optimal_remap(g, u), g), u);
  std::ostringstream detail;
  detail << "face value " << face.to_string() << ", remapped " << remapped.to_string() << " (truncated G face value "
         << expected_loss(g, u).to_string() << ")";
  return {face.exact == Rational(2, 3) && remapped.exact == Rational(1, 12), detail.str()};
}

Outcome laplace_gap() {
  const Real tolerance(kRatioTolerance);
  const PrivacyLevel quarter(Rational(1, 4));
  const bool values = geometric_two_point_loss(quarter) == Rational(1, 5) &&
                      abs(laplace_two_point_loss(quarter) - Real("0.25")) <= tolerance;
  bool ratios = true;
  std::ostringstream detail;
  for (auto [a, bound] : {std::pair{Rational(1, 100), 5}, std::pair{Rational(1, 1000), 15}}) {
    const Real ratio = laplace_geometric_ratio(PrivacyLevel(a));
    const Real alpha = to_real(a);
    const Real formula = sqrt(alpha) * (1 + alpha) / (2 * alpha);
    ratios = ratios && ratio > bound && abs(ratio - formula) <= tolerance;
    detail << "ratio at " << to_string(a) << " = " << to_decimal_string(ratio, 8) << "; ";
  }
  detail << "geometric(1/4) " << to_string(geometric_two_point_loss(quarter)) << ", laplace(1/4) "
         << to_decimal_string(laplace_two_point_loss(quarter), 12);
  return {values && ratios, detail.str()};
}

Outcome remap_oracle() {
  std::mt19937_64 rng(7001);
  const Real tolerance(kPowerTolerance);
  const auto start = std::chrono::steady_clock::now();
  int agree = 0;
  constexpr int kInstances = 200;
  for (int k = 0; k < kInstances; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const PrivacyLevel alpha(Rational(std::uniform_int_distribution<int>(1, 3)(rng), 4));
    const int responses = std::uniform_int_distribution<int>(1, n + 2)(rng);
    const Mechanism x = testing::random_private_mechanism(alpha, n, responses, rng);
    const UserModel u = testing::random_test_user(n, rng);
    const LossValue bayes = expected_loss(compose(optimal_remap(x, u), x), u);
    if (within(bayes, brute_force_optimal_remap(x, u).loss, tolerance)) ++agree;
  }
  std::ostringstream detail;
  detail << agree << "/" << kInstances << " agree";
  return within_time({agree == kInstances, detail.str()}, seconds_since(start), kRemapSeconds);
}

Outcome obliviation() {
  std::mt19937_64 rng(8001);
  const Real tolerance(kPowerTolerance);
  const auto start = std::chrono::steady_clock::now();
  int good = 0;
  constexpr int kInstances = 50;
  for (int k = 0; k < kInstances; ++k) {
    const int rows = k % 2 == 0 ? 2 : 3;
    const DatabaseSpace space = DatabaseSpace::binary(rows);
    const PrivacyLevel alpha(Rational(std::uniform_int_distribution<int>(1, 3)(rng), 4));
    const FullMechanism x = random_private_mechanism(space, alpha, std::uniform_int_distribution<int>(2, 4)(rng), rng);
    const UserModel u = testing::random_test_user(rows, rng);
    const Mechanism m = obliviate(x, space);
    const bool dp = check_full_differential_privacy(x, space, alpha) && check_differential_privacy(m, alpha) &&
                    check_full_differential_privacy(lift(m, space), space, alpha);
    const LossValue worst = testing::worst_case_by_enumeration(x, u, space);
    const LossValue after = expected_loss(m, u);
    const bool no_worse = after.exact && worst.exact ? *after.exact <= *worst.exact
                                                     : after.value <= worst.value + tolerance;
    if (dp && no_worse) ++good;
  }
  std::ostringstream detail;
  detail << good << "/" << kInstances << " private and no worse";
  return within_time({good == kInstances, detail.str()}, seconds_since(start), kObliviateSeconds);
}

Outcome counterexample() {
  const auto start = std::chrono::steady_clock::now();
  const CounterexampleResult r = check_counterexample_infeasibility({Rational(1, 2), true});
  const bool verified = r.status == lp::Status::kInfeasible && r.certificate &&
                        lp::verify_farkas(r.problem, *r.certificate);
  return within_time({verified, "status " + lp::to_string(r.status) + (verified ? ", certificate verified" : "")},
                     seconds_since(start), kCounterexampleSeconds);
}

Outcome uniqueness() {
  const int n = 5;
  const Mechanism g = truncated_geometric({kHalf, n});
  std::vector<int> image(static_cast<std::size_t>(n) + 1);
  std::iota(image.begin(), image.end(), 0);
  int accepted = 0, total = 0;
  do {
    ++total;
    const Remap relabel = Remap::deterministic(g.responses(), g.responses(), image);
    const UniquenessVerdict v = verify_uniqueness(kHalf, n, compose(relabel, g));
    // The recovering remap undoes the relabeling.
    std::vector<int> inverse(image.size());
    for (std::size_t k = 0; k < image.size(); ++k) inverse[static_cast<std::size_t>(image[k])] = static_cast<int>(k);
    if (v.equivalent && v.remap == inverse) ++accepted;
  } while (std::next_permutation(image.begin(), image.end()));
  const UniquenessVerdict fig2 = verify_uniqueness(kHalf, n, testing::figure2_mechanism());
  std::ostringstream detail;
  detail << accepted << "/" << total << " relabelings accepted, Figure 2 "
         << (fig2.equivalent ? "accepted" : "rejected: " + fig2.reason);
  return {accepted == total && !fig2.equivalent, detail.str()};
}

Outcome guarded(const std::function<Outcome()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace
}  // namespace privopt

int main() {
  using privopt::Outcome;
  bool all = true;
  auto report = [&](int criterion, const char* name, const Outcome& o) {
    std::printf("%s %d %s: %s\n", o.passed ? "PASS" : "FAIL", criterion, name, o.detail.c_str());
    all = all && o.passed;
  };
  report(1, "figure-2 golden", privopt::guarded(privopt::figure2));
  report(2, "figure-3 golden", privopt::guarded(privopt::figure3));
  privopt::SweepOutcomes sweep;
  try {
    sweep = privopt::sweep();
  } catch (const std::exception& e) {
    sweep.losses = sweep.reconstruction = {false, std::string("exception: ") + e.what()};
  }
  report(3, "factorization sweep", sweep.losses);
  report(4, "constructive factorization", sweep.reconstruction);
  report(5, "example-2 losses", privopt::guarded(privopt::example2));
  report(6, "laplace gap", privopt::guarded(privopt::laplace_gap));
  report(7, "remap oracle", privopt::guarded(privopt::remap_oracle));
  report(8, "obliviation", privopt::guarded(privopt::obliviation));
  report(9, "counterexample certificate", privopt::guarded(privopt::counterexample));
  report(10, "uniqueness", privopt::guarded(privopt::uniqueness));
  return all ? 0 : 1;
}

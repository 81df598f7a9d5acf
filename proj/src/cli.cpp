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

#include "privopt/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "privopt/analysis.hpp"
#include "privopt/json_io.hpp"
#include "privopt/mechanisms.hpp"
#include "privopt/nonoblivious.hpp"
#include "privopt/optlp.hpp"
#include "privopt/remap.hpp"

namespace privopt::cli {

namespace {

// Bad input from the command line or an input file.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Verification ran but did not pass.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PrivacyLevel parse_alpha(const std::string& text, const std::string& flag) {
  try {
    return PrivacyLevel::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

template <typename T, typename F>
T load(const std::string& path, const std::string& flag, F&& parse) {
  try {
    return parse(read_json_file(path));
  } catch (const JsonFieldError& e) {
    throw UsageError(flag + " " + path + ": " + e.what());
  } catch (const StructuralError& e) {
    throw UsageError(flag + " " + path + ": " + e.what());
  }
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << dump(j);
  } else {
    write_json_file(path, j);
  }
}

Json structure_json(const StructureReport& report) {
  Json outcomes = Json::array();
  for (const auto& o : report.outcomes) {
    Json j = Json::object();
    j["name"] = o.name;
    j["passed"] = o.passed;
    if (o.row) j["row"] = *o.row;
    if (o.column) j["column"] = *o.column;
    if (!o.detail.empty()) j["detail"] = o.detail;
    outcomes.push_back(std::move(j));
  }
  return outcomes;
}

Json grid_json(const ConstraintMatrix& c) {
  Json rows = Json::array();
  for (const auto& row : c.grid()) {
    std::string line;
    for (Cell cell : row) {
      if (!line.empty()) line += ' ';
      line += static_cast<char>(cell);
    }
    rows.push_back(line);
  }
  return rows;
}

Json command_echo(const std::vector<std::string>& args) { return args; }

// ---------------------------------------------------------------------------
// Subcommand bodies

struct Options {
  std::string alpha;
  int n = 0;
  int window = 0;
  std::string user;
  std::string mech;
  std::string space;
  std::string out;
  std::string report;
  std::string csv;
  std::vector<std::string> alphas;
  int trials = 200;
  std::uint64_t seed = 7;
  unsigned workers = 0;
  bool brute_force = false;
  bool no_privacy = false;
};

int run_mech_geometric(const Options& o, std::ostream& out, std::ostream& err) {
  const PrivacyLevel alpha = parse_alpha(o.alpha, "--alpha");
  if (o.n < 1) throw UsageError("--n: must be at least 1");
  if (o.window < 0) throw UsageError("--window: must be non-negative");
  const Mechanism m = o.window == 0 ? truncated_geometric({alpha, o.n}) : windowed_geometric({alpha, o.n}, o.window);
  emit(to_json(m, alpha), o.out, out);
  err << "geometric mechanism: n=" << o.n << " alpha=" << to_string(alpha.alpha()) << " responses="
      << m.num_responses() << '\n';
  return kOk;
}

int run_optimal(const std::vector<std::string>& args, const Options& o, std::ostream& out, std::ostream& err) {
  const PrivacyLevel alpha = parse_alpha(o.alpha, "--alpha");
  const UserModel user = load<UserModel>(o.user, "--user", user_from_json);
  const int n = o.n == 0 ? user.n() : o.n;
  if (n != user.n()) throw UsageError("--n: user prior covers 0.." + std::to_string(user.n()));
  if (alpha.is_degenerate()) throw UsageError("--alpha: must lie strictly between 0 and 1");
  const VertexSolution solution = optimal_mechanism_for_user(user, alpha, n);
  emit(to_json(solution.mechanism, alpha), o.out, out);
  err << "optimal expected loss: " << solution.objective.to_string() << '\n';

  if (!o.report.empty()) {
    const ConstraintMatrix c = constraint_matrix(solution.mechanism, alpha);
    const SlackAccounting acc = account(c);
    Json j = Json::object();
    j["command"] = command_echo(args);
    j["n"] = n;
    j["alpha"] = to_string(alpha.alpha());
    j["user"] = to_json(user);
    j["objective"] = solution.objective.to_string();
    j["optimality_certified"] = solution.optimality_certified;
    j["optimality_margin"] = to_decimal_string(solution.optimality_margin, 20);
    j["tight_rank"] = solution.tight_rank;
    j["alternative_optimum_directions"] = solution.alternative_optimum_directions;
    j["pivots"] = solution.pivots;
    j["constraint_matrix"] = grid_json(c);
    j["structure"] = structure_json(validate_vertex_structure(c, acc));
    write_json_file(o.report, j);
  }
  return solution.optimality_certified ? kOk : kVerificationFailed;
}

int run_remap(const Options& o, std::ostream& out, std::ostream& err) {
  const Mechanism x = load<Mechanism>(o.mech, "--mech", mechanism_from_json);
  const UserModel user = load<UserModel>(o.user, "--user", user_from_json);
  if (user.n() != x.n()) throw UsageError("--user: prior covers 0.." + std::to_string(user.n()) +
                                          " but the mechanism has n=" + std::to_string(x.n()));
  const Remap y = optimal_remap(x, user);
  const LossValue remapped = expected_loss(compose(y, x), user);
  if (x.has_canonical_range()) err << "face-value expected loss: " << expected_loss(x, user).to_string() << '\n';
  err << "remapped expected loss: " << remapped.to_string() << '\n';
  int status = kOk;
  if (o.brute_force) {
    const BruteForceRemap brute = [&] {
      try {
        return brute_force_optimal_remap(x, user);
      } catch (const CapacityError& e) {
        throw UsageError(std::string("--brute-force: ") + e.what());
      }
    }();
    const bool agree = loss_equal(brute.loss, remapped, default_loss_tolerance());
    err << "brute-force expected loss: " << brute.loss.to_string() << " over " << brute.candidates
        << " remaps (" << (agree ? "agrees" : "DISAGREES") << ")\n";
    if (!agree) status = kVerificationFailed;
  }
  emit(to_json(y), o.out, out);
  return status;
}

int run_analyze(const Options& o, std::ostream& out) {
  const Json doc = [&] {
    try {
      return read_json_file(o.mech);
    } catch (const JsonFieldError& e) {
      throw UsageError(std::string("--mech: ") + e.what());
    }
  }();
  const Mechanism m = [&] {
    try {
      return mechanism_from_json(doc);
    } catch (const StructuralError& e) {
      throw UsageError("--mech " + o.mech + ": " + e.what());
    }
  }();
  std::optional<PrivacyLevel> alpha;
  if (!o.alpha.empty()) {
    alpha = parse_alpha(o.alpha, "--alpha");
  } else {
    try {
      alpha = mechanism_alpha_from_json(doc);
    } catch (const StructuralError& e) {
      throw UsageError("--mech " + o.mech + ": " + e.what());
    }
  }
  if (!alpha) throw UsageError("--alpha: required when the mechanism file has no \"alpha\" field");

  const ConstraintMatrix c = [&] {
    try {
      return constraint_matrix(m, *alpha);
    } catch (const std::exception& e) {
      throw UsageError("--mech " + o.mech + ": " + e.what());
    }
  }();
  const SlackAccounting acc = account(c);
  const StructureReport structure = validate_vertex_structure(c, acc);

  Json j = Json::object();
  j["alpha"] = to_string(alpha->alpha());
  j["n"] = m.n();
  j["constraint_matrix"] = grid_json(c);
  Json slack = Json::object();
  slack["s"] = acc.s;
  slack["z"] = acc.z;
  slack["per_column"] = acc.per_column;
  j["slack"] = std::move(slack);
  j["structure"] = structure_json(structure);
  j["structure_passed"] = structure.all_passed();
  if (structure.all_passed()) {
    const Remap y = derive_remap_from_constraint_matrix(c, acc, m.n());
    j["derived_remap"] = *y.as_map();
    j["reconstruction_matches"] = compose(y, truncated_geometric({*alpha, m.n()})) == m;
  } else {
    j["derived_remap"] = nullptr;
    j["reconstruction_matches"] = false;
  }
  out << c.render() << dump(j);
  return structure.all_passed() && j["reconstruction_matches"].get<bool>() ? kOk : kVerificationFailed;
}

Json record_json(const FactorizationRecord& r) {
  Json j = Json::object();
  j["n"] = r.n;
  j["alpha"] = to_string(r.alpha);
  j["remap"] = r.remap;
  j["remap_loss"] = r.remap_loss.to_string();
  j["lp_loss"] = r.lp_loss.to_string();
  j["difference"] = to_decimal_string(r.difference, 6);
  j["exact"] = r.exact;
  j["vertex_structure_passed"] = r.vertex_structure_passed;
  j["reconstruction_matches"] = r.reconstruction_matches;
  j["alternative_optimum_directions"] = r.alternative_optimum_directions;
  j["verdict"] = r.passed ? "pass" : "fail";
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

int run_verify_theorem1(const std::vector<std::string>& args, const Options& o, std::ostream& out,
                        std::ostream& err) {
  SweepOptions options;
  options.max_n = o.n == 0 ? 8 : o.n;
  if (options.max_n < 1) throw UsageError("--n: must be at least 1");
  if (o.trials < 0) throw UsageError("--trials: must be non-negative");
  options.trials = o.trials;
  options.seed = o.seed;
  options.workers = o.workers;
  const std::vector<std::string> alphas =
      o.alphas.empty() ? std::vector<std::string>{"1/4", "1/2", "3/4"} : o.alphas;
  for (const auto& text : alphas) {
    const PrivacyLevel a = parse_alpha(text, "--alphas");
    if (a.is_degenerate()) throw UsageError("--alphas: " + text + " must lie strictly between 0 and 1");
    options.alphas.push_back(a.alpha());
  }

  const SweepReport report = run_factorization_sweep(options);

  Json j = Json::object();
  j["command"] = command_echo(args);
  j["seed"] = o.seed;
  j["max_n"] = options.max_n;
  Json alpha_list = Json::array();
  for (const auto& a : options.alphas) alpha_list.push_back(to_string(a));
  j["alphas"] = std::move(alpha_list);
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    Json tj = Json::object();
    tj["index"] = t.index;
    tj["user"] = to_json(t.user);
    tj.update(record_json(t.record));
    trials.push_back(std::move(tj));
  }
  j["trials"] = std::move(trials);
  Json summary = Json::object();
  summary["trials"] = report.trials.size();
  summary["passed"] = report.passed;
  summary["failed"] = report.failed;
  j["summary"] = std::move(summary);
  Json timing = Json::object();
  timing["wall_seconds"] = report.wall_seconds;
  j["timing"] = std::move(timing);
  if (!o.report.empty()) write_json_file(o.report, j);

  out << "theorem1: " << report.passed << " passed, " << report.failed << " failed of " << report.trials.size()
      << " trials\n";
  for (const auto& t : report.trials) {
    if (!t.record.passed) err << "trial " << t.index << " failed: " << t.record.failure << '\n';
  }
  return report.failed == 0 ? kOk : kVerificationFailed;
}

int run_verify_factorization(const Options& o, std::ostream& out) {
  const PrivacyLevel alpha = parse_alpha(o.alpha, "--alpha");
  if (alpha.is_degenerate()) throw UsageError("--alpha: must lie strictly between 0 and 1");
  const UserModel user = load<UserModel>(o.user, "--user", user_from_json);
  const int n = o.n == 0 ? user.n() : o.n;
  if (n != user.n()) throw UsageError("--n: user prior covers 0.." + std::to_string(user.n()));
  const FactorizationRecord record = verify_factorization(user, alpha, n);
  Json j = record_json(record);
  out << dump(j);
  return record.passed ? kOk : kVerificationFailed;
}

int run_verify_uniqueness(const Options& o, std::ostream& out) {
  const PrivacyLevel alpha = parse_alpha(o.alpha, "--alpha");
  if (alpha.is_degenerate()) throw UsageError("--alpha: must lie strictly between 0 and 1");
  Mechanism candidate = o.mech.empty() ? truncated_geometric({alpha, o.n})
                                       : load<Mechanism>(o.mech, "--mech", mechanism_from_json);
  const int n = o.n == 0 ? candidate.n() : o.n;
  if (n < 1) throw UsageError("--n: must be at least 1");
  if (n != candidate.n()) throw UsageError("--n: mechanism has n=" + std::to_string(candidate.n()));
  const UniquenessVerdict verdict = [&] {
    try {
      return verify_uniqueness(alpha, n, candidate);
    } catch (const StructuralError& e) {
      throw UsageError(std::string("--mech: ") + e.what());
    } catch (const PreconditionError& e) {
      throw UsageError(std::string("--mech: ") + e.what());
    }
  }();
  Json j = Json::object();
  j["equivalent"] = verdict.equivalent;
  j["remap_is_permutation"] = verdict.remap_is_permutation;
  j["induces_geometric"] = verdict.induces_geometric;
  j["remap"] = verdict.remap;
  j["reason"] = verdict.reason;
  out << dump(j);
  return verdict.equivalent ? kOk : kVerificationFailed;
}

int run_counterexample(const Options& o, std::ostream& out) {
  CounterexampleOptions options;
  if (!o.alpha.empty()) options.alpha = parse_alpha(o.alpha, "--alpha").alpha();
  options.include_privacy = !o.no_privacy;
  const CounterexampleResult result = check_counterexample_infeasibility(options);
  out << describe_certificate(result);
  if (result.status == lp::Status::kOptimal) {
    out << "feasible point:\n";
    for (std::size_t v = 0; v < result.solution.size(); ++v) {
      if (result.solution[v] != 0) out << "  " << result.variable_names[v] << " = " << to_string(result.solution[v]) << '\n';
    }
  }
  if (!o.report.empty()) {
    Json j = Json::object();
    j["alpha"] = to_string(options.alpha);
    j["include_privacy"] = options.include_privacy;
    j["status"] = lp::to_string(result.status);
    j["certificate_verified"] = result.certificate_verified;
    if (result.certificate) {
      Json multipliers = Json::array();
      for (std::size_t k = 0; k < result.certificate->multipliers.size(); ++k) {
        if (result.certificate->multipliers[k] == 0) continue;
        Json m = Json::object();
        m["constraint"] = result.problem.constraints[k].label;
        m["multiplier"] = to_string(result.certificate->multipliers[k]);
        multipliers.push_back(std::move(m));
      }
      j["multipliers"] = std::move(multipliers);
    }
    write_json_file(o.report, j);
  }
  if (result.status == lp::Status::kInfeasible) return result.certificate_verified ? kOk : kVerificationFailed;
  return result.status == lp::Status::kOptimal ? kOk : kVerificationFailed;
}

int run_obliviate(const Options& o, std::ostream& out, std::ostream& err) {
  const DatabaseSpace space = load<DatabaseSpace>(o.space, "--space", space_from_json);
  const FullMechanism x = load<FullMechanism>(o.mech, "--mech", full_mechanism_from_json);
  if (x.num_databases() != space.size()) {
    throw UsageError("--mech: has " + std::to_string(x.num_databases()) + " rows but the space has " +
                     std::to_string(space.size()) + " databases");
  }
  std::optional<PrivacyLevel> alpha;
  if (!o.alpha.empty()) alpha = parse_alpha(o.alpha, "--alpha");
  Mechanism result = [&] {
    try {
      if (alpha && !o.user.empty()) {
        return obliviate(x, space, *alpha, load<UserModel>(o.user, "--user", user_from_json));
      }
      return obliviate(x, space);
    } catch (const StructuralError& e) {
      throw UsageError(std::string("--mech: ") + e.what());
    } catch (const PreconditionError& e) {
      throw UsageError(std::string("--space: ") + e.what());
    } catch (const std::logic_error& e) {
      throw VerificationFailure(e.what());
    }
  }();
  if (alpha) {
    const bool before = static_cast<bool>(check_full_differential_privacy(x, space, *alpha));
    const bool after = static_cast<bool>(check_differential_privacy(result, *alpha));
    err << "input private: " << (before ? "yes" : "no") << ", averaged private: " << (after ? "yes" : "no") << '\n';
  }
  emit(to_json(result, alpha), o.out, out);
  return kOk;
}

int run_compare_laplace(const Options& o, std::ostream& out) {
  std::vector<PrivacyLevel> levels;
  if (!o.alpha.empty()) levels.push_back(parse_alpha(o.alpha, "--alpha"));
  for (const auto& text : o.alphas) levels.push_back(parse_alpha(text, "--alphas"));
  if (levels.empty()) throw UsageError("--alpha: required");
  for (const auto& a : levels) {
    if (a.is_degenerate()) throw UsageError("--alpha: " + to_string(a.alpha()) + " must lie strictly between 0 and 1");
  }
  std::ostringstream csv;
  csv << "alpha,geometric,laplace,ratio\n";
  for (const auto& a : levels) {
    const Rational geometric = geometric_two_point_loss(a);
    const Real laplace = laplace_two_point_loss(a);
    const Real ratio = laplace_geometric_ratio(a);
    out << "alpha " << to_string(a.alpha()) << '\n'
        << "geometric " << to_string(geometric) << '\n'
        << "laplace " << to_decimal_string(laplace, 20) << '\n'
        << "ratio " << to_decimal_string(ratio, 20) << '\n';
    csv << to_string(a.alpha()) << ',' << to_decimal_string(to_real(geometric), 20) << ','
        << to_decimal_string(laplace, 20) << ',' << to_decimal_string(ratio, 20) << '\n';
  }
  if (!o.csv.empty()) {
    std::ofstream file(o.csv);
    if (!file) throw UsageError("--csv: cannot write " + o.csv);
    file << csv.str();
  }
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal differentially private count mechanisms: construction, optimization and verification",
               "privopt"};
  app.require_subcommand(1);
  Options o;
  std::optional<unsigned> precision;
  app.add_option("--precision", precision, "Decimal digits for real arithmetic (default 64)")
      ->check(CLI::Range(10U, 100000U));

  auto add_alpha = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--alpha", o.alpha, "Privacy level as a rational, e.g. 1/2");
    if (required) opt->required();
  };

  auto* mech = app.add_subcommand("mech", "Construct named mechanisms");
  mech->require_subcommand(1);
  auto* geometric = mech->add_subcommand("geometric", "Truncated (or windowed) geometric mechanism");
  add_alpha(geometric, true);
  geometric->add_option("--n", o.n, "Result bound")->required();
  geometric->add_option("--window", o.window, "Keep responses -w..n+w instead of clamping to 0..n");
  geometric->add_option("--out", o.out, "Output JSON path (stdout if absent)");

  auto* optimal = app.add_subcommand("optimal", "Solve the user-specific LP");
  optimal->add_option("--user", o.user, "User JSON")->required();
  add_alpha(optimal, true);
  optimal->add_option("--n", o.n, "Result bound (defaults to the user's)");
  optimal->add_option("--out", o.out, "Output mechanism JSON");
  optimal->add_option("--report", o.report, "Write a solve report");

  auto* remap = app.add_subcommand("remap", "Bayes-optimal remap of a mechanism for a user");
  remap->add_option("--mech", o.mech, "Mechanism JSON")->required();
  remap->add_option("--user", o.user, "User JSON")->required();
  remap->add_option("--out", o.out, "Output remap JSON");
  remap->add_flag("--brute-force", o.brute_force, "Cross-check against exhaustive enumeration");

  auto* analyze = app.add_subcommand("analyze", "Constraint matrix and vertex-structure checks");
  analyze->add_option("--mech", o.mech, "Mechanism JSON")->required();
  add_alpha(analyze, false);

  auto* verify = app.add_subcommand("verify", "Verification harnesses");
  verify->require_subcommand(1);
  auto* theorem1 = verify->add_subcommand("theorem1", "Factorization sweep over random users");
  theorem1->add_option("--n", o.n, "Largest result bound (default 8)");
  theorem1->add_option("--alphas", o.alphas, "Comma-separated privacy levels")->delimiter(',');
  theorem1->add_option("--trials", o.trials, "Number of trials");
  theorem1->add_option("--seed", o.seed, "Sweep seed");
  theorem1->add_option("--workers", o.workers, "Worker threads (0: one per core)");
  theorem1->add_option("--report", o.report, "Write the run report");
  auto* factorization = verify->add_subcommand("factorization", "Replay one factorization trial");
  factorization->add_option("--user", o.user, "User JSON")->required();
  add_alpha(factorization, true);
  factorization->add_option("--n", o.n, "Result bound (defaults to the user's)");
  auto* uniqueness = verify->add_subcommand("uniqueness", "Is a mechanism a relabeling of G?");
  add_alpha(uniqueness, true);
  uniqueness->add_option("--n", o.n, "Result bound");
  uniqueness->add_option("--mech", o.mech, "Candidate mechanism JSON (G itself if absent)");

  auto* nonoblivious = app.add_subcommand("nonoblivious", "Database-indexed mechanisms");
  nonoblivious->require_subcommand(1);
  auto* counterexample = nonoblivious->add_subcommand("counterexample", "Two-user infeasibility certificate");
  add_alpha(counterexample, false);
  counterexample->add_flag("--no-privacy", o.no_privacy, "Drop the privacy constraints");
  counterexample->add_option("--report", o.report, "Write the certificate as JSON");
  auto* obliv = nonoblivious->add_subcommand("obliviate", "Average a mechanism over equal-count databases");
  obliv->add_option("--mech", o.mech, "Full mechanism JSON")->required();
  obliv->add_option("--space", o.space, "Database space JSON")->required();
  add_alpha(obliv, false);
  obliv->add_option("--user", o.user, "User JSON; with --alpha, also checks the worst-case loss");
  obliv->add_option("--out", o.out, "Output mechanism JSON");

  auto* laplace = app.add_subcommand("compare-laplace", "Two-point loss of geometric versus Laplace noise");
  add_alpha(laplace, false);
  laplace->add_option("--alphas", o.alphas, "Additional comma-separated privacy levels")->delimiter(',');
  laplace->add_option("--csv", o.csv, "Write the loss table as CSV");

  apply_precision_from_env();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (precision) set_real_precision(*precision);

  try {
    if (mech->parsed()) return run_mech_geometric(o, out, err);
    if (optimal->parsed()) return run_optimal(args, o, out, err);
    if (remap->parsed()) return run_remap(o, out, err);
    if (analyze->parsed()) return run_analyze(o, out);
    if (theorem1->parsed()) return run_verify_theorem1(args, o, out, err);
    if (factorization->parsed()) return run_verify_factorization(o, out);
    if (uniqueness->parsed()) return run_verify_uniqueness(o, out);
    if (counterexample->parsed()) return run_counterexample(o, out);
    if (obliv->parsed()) return run_obliviate(o, out, err);
    if (laplace->parsed()) return run_compare_laplace(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  err << "error: no command\n";
  return kUsageError;
}

}  // namespace privopt::cli

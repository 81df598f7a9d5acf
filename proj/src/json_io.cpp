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

#include "privopt/json_io.hpp"

#include <fstream>
#include <sstream>

namespace privopt {

namespace {

const Json& member(const Json& j, const std::string& parent, const char* key) {
  const std::string field = parent.empty() ? std::string(key) : parent + "." + key;
  if (!j.is_object()) throw JsonFieldError(parent.empty() ? "<root>" : parent, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw JsonFieldError(field, "missing");
  return *it;
}

std::string join(const std::string& parent, const char* key) {
  return parent.empty() ? std::string(key) : parent + "." + key;
}

std::string index(const std::string& field, std::size_t k) { return field + "[" + std::to_string(k) + "]"; }

int int_from_json(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw JsonFieldError(field, "expected an integer");
  return j.get<int>();
}

std::vector<int> ints_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw JsonFieldError(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(int_from_json(j[k], index(field, k)));
  return out;
}

std::vector<Rational> rationals_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw JsonFieldError(field, "expected an array of rationals");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(rational_from_json(j[k], index(field, k)));
  return out;
}

RationalMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw JsonFieldError(field, "expected an array of rows");
  RationalMatrix out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(rationals_from_json(j[k], index(field, k)));
  return out;
}

Json matrix_to_json(const RationalMatrix& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    out.push_back(std::move(r));
  }
  return out;
}

// Runs a constructor and reports its validation failure against `field`.
template <typename F>
auto checked(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const JsonFieldError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw JsonFieldError(field, e.what());
  } catch (const std::domain_error& e) {
    throw JsonFieldError(field, e.what());
  } catch (const std::length_error& e) {
    throw JsonFieldError(field, e.what());
  }
}

}  // namespace

Json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw JsonFieldError(field, "expected a rational string such as \"1/2\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw JsonFieldError(field, e.what());
  }
}

Json to_json(const Mechanism& m, const std::optional<PrivacyLevel>& alpha) {
  Json j = Json::object();
  if (alpha) j["alpha"] = rational_to_json(alpha->alpha());
  j["n"] = m.n();
  j["responses"] = m.responses();
  j["rows"] = matrix_to_json(m.rows());
  return j;
}

Mechanism mechanism_from_json(const Json& j) {
  const int n = int_from_json(member(j, "", "n"), "n");
  auto responses = ints_from_json(member(j, "", "responses"), "responses");
  auto rows = matrix_from_json(member(j, "", "rows"), "rows");
  return checked("rows", [&] { return Mechanism(n, std::move(responses), std::move(rows)); });
}

std::optional<PrivacyLevel> mechanism_alpha_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("alpha")) return std::nullopt;
  const Rational a = rational_from_json(j["alpha"], "alpha");
  return checked("alpha", [&] { return PrivacyLevel(a); });
}

Json to_json(const LossFunction& l) {
  Json j = Json::object();
  j["kind"] = to_string(l.kind());
  if (l.kind() == LossKind::kPower) j["exponent"] = rational_to_json(l.exponent());
  if (l.kind() == LossKind::kTabulated) j["table"] = matrix_to_json(l.table());
  return j;
}

LossFunction loss_from_json(const Json& j, const std::string& field) {
  const Json& kind_json = member(j, field, "kind");
  if (!kind_json.is_string()) throw JsonFieldError(join(field, "kind"), "expected a string");
  const LossKind kind =
      checked(join(field, "kind"), [&] { return parse_loss_kind(kind_json.get<std::string>()); });
  switch (kind) {
    case LossKind::kAbsolute: return LossFunction::absolute();
    case LossKind::kSquared: return LossFunction::squared();
    case LossKind::kBinary: return LossFunction::binary();
    case LossKind::kPower: {
      const std::string f = join(field, "exponent");
      Rational e = rational_from_json(member(j, field, "exponent"), f);
      return checked(f, [&] { return LossFunction::power(e); });
    }
    case LossKind::kTabulated: {
      const std::string f = join(field, "table");
      auto table = matrix_from_json(member(j, field, "table"), f);
      return checked(f, [&] { return LossFunction::tabulated(std::move(table)); });
    }
  }
  throw JsonFieldError(join(field, "kind"), "unsupported loss kind");
}

Json to_json(const UserModel& u) {
  Json j = Json::object();
  Json prior = Json::array();
  for (const auto& p : u.prior()) prior.push_back(rational_to_json(p));
  j["prior"] = std::move(prior);
  j["loss"] = to_json(u.loss());
  return j;
}

UserModel user_from_json(const Json& j) {
  auto prior = rationals_from_json(member(j, "", "prior"), "prior");
  LossFunction loss = loss_from_json(member(j, "", "loss"));
  return checked("prior", [&] { return UserModel(std::move(prior), std::move(loss)); });
}

Json to_json(const Remap& y) {
  Json j = Json::object();
  j["responses"] = y.sources();
  j["targets"] = y.targets();
  j["deterministic"] = y.is_deterministic();
  if (auto map = y.as_map()) j["map"] = *map;
  j["rows"] = matrix_to_json(y.rows());
  return j;
}

Remap remap_from_json(const Json& j) {
  auto sources = ints_from_json(member(j, "", "responses"), "responses");
  auto targets = ints_from_json(member(j, "", "targets"), "targets");
  auto rows = matrix_from_json(member(j, "", "rows"), "rows");
  return checked("rows", [&] { return Remap(std::move(sources), std::move(targets), std::move(rows)); });
}

Json to_json(const DatabaseSpace& space) {
  Json j = Json::object();
  j["domain_size"] = space.domain_size();
  j["rows"] = space.rows();
  j["predicate"] = space.predicate();
  return j;
}

DatabaseSpace space_from_json(const Json& j) {
  const int domain = int_from_json(member(j, "", "domain_size"), "domain_size");
  const int rows = int_from_json(member(j, "", "rows"), "rows");
  auto predicate = ints_from_json(member(j, "", "predicate"), "predicate");
  return checked("predicate", [&] { return DatabaseSpace(domain, rows, std::move(predicate)); });
}

Json to_json(const FullMechanism& x, const DatabaseSpace& space) {
  Json j = Json::object();
  j["responses"] = x.responses();
  Json labels = Json::array();
  for (std::size_t d = 0; d < space.size(); ++d) labels.push_back(space.label(d));
  j["databases"] = std::move(labels);
  j["rows"] = matrix_to_json(x.rows());
  return j;
}

FullMechanism full_mechanism_from_json(const Json& j) {
  auto responses = ints_from_json(member(j, "", "responses"), "responses");
  auto rows = matrix_from_json(member(j, "", "rows"), "rows");
  return checked("rows", [&] { return FullMechanism(std::move(responses), std::move(rows)); });
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonFieldError(path.string(), "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw JsonFieldError(path.string(), std::string("malformed JSON: ") + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump(j);
}

}  // namespace privopt

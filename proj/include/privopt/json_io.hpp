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

#ifndef PRIVOPT_JSON_IO_HPP_
#define PRIVOPT_JSON_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "privopt/core.hpp"
#include "privopt/nonoblivious.hpp"

namespace privopt {

using Json = nlohmann::ordered_json;

/// Malformed document; field() is the JSON path of the offending value.
class JsonFieldError : public StructuralError {
 public:
  JsonFieldError(std::string field, const std::string& what)
      : StructuralError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Rationals are written as canonical "p/q" (or "p") strings; readers also
// take JSON integers.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& field);

// {"alpha"?, "n", "responses", "rows"}
Json to_json(const Mechanism& m, const std::optional<PrivacyLevel>& alpha = std::nullopt);
Mechanism mechanism_from_json(const Json& j);
std::optional<PrivacyLevel> mechanism_alpha_from_json(const Json& j);

// {"prior", "loss": {"kind", "exponent" | "table"}}
Json to_json(const LossFunction& l);
LossFunction loss_from_json(const Json& j, const std::string& field = "loss");
Json to_json(const UserModel& u);
UserModel user_from_json(const Json& j);

// {"responses", "targets", "deterministic", "map"?, "rows"}
Json to_json(const Remap& y);
Remap remap_from_json(const Json& j);

// {"domain_size", "rows", "predicate"}
Json to_json(const DatabaseSpace& space);
DatabaseSpace space_from_json(const Json& j);

// {"responses", "databases": [labels], "rows"}
Json to_json(const FullMechanism& x, const DatabaseSpace& space);
FullMechanism full_mechanism_from_json(const Json& j);

// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace privopt

#endif  // PRIVOPT_JSON_IO_HPP_

// Copyright 2026 The plmc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "error.hpp"
#include "geometry.hpp"
#include "potentials.hpp"

namespace plmc::config {

using Json = nlohmann::json;

/// A validation failure tied to a location in the config document.
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& field, const std::string& message);
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// One experiment document. Every value is addressed by a JSON pointer
/// ("/chain/eta"); errors name the field in dotted form and the line of its
/// key in the original text.
class Config {
 public:
  static Config parse(const std::string& text);

  /// Replace a scalar field, e.g. ("chain.eta", "0.002"). Only scalars can
  /// be overridden; a missing field is created.
  void set_scalar(const std::string& dotted_path, const std::string& value);

  const Json& root() const noexcept { return root_; }
  bool has(const std::string& pointer) const;
  int line_of(const std::string& pointer) const;

  [[noreturn]] void fail(const std::string& pointer,
                         const std::string& message) const;

  double number(const std::string& pointer) const;
  double number_or(const std::string& pointer, double fallback) const;
  std::optional<double> optional_number(const std::string& pointer) const;
  double positive(const std::string& pointer) const;
  long integer(const std::string& pointer) const;
  long integer_or(const std::string& pointer, long fallback) const;
  std::uint64_t seed(const std::string& pointer, std::uint64_t fallback) const;
  std::string string_or(const std::string& pointer,
                        const std::string& fallback) const;
  Vector vector(const std::string& pointer) const;
  std::vector<double> number_list(const std::string& pointer) const;

  geometry::ConvexBody body(const std::string& pointer = "/body") const;
  potentials::Potential potential(int dim,
                                  const std::string& pointer = "/potential") const;

  /// Document with command-line overrides applied, for echoing into outputs.
  const Json& resolved() const noexcept { return root_; }

 private:
  const Json& at(const std::string& pointer) const;
  Json root_;
  std::map<std::string, int> key_lines_;
  std::set<std::string> overridden_;
};

/// "/chain/eta" -> "chain.eta"
std::string dotted(const std::string& pointer);

}  // namespace plmc::config

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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "theory.hpp"

// Experiment runners. Each command reads one JSON config, writes CSV files
// plus summary.json into the output directory, and returns the summary.
namespace plmc::studies {

inline constexpr const char* kSchemaLine = "# plmc-lab schema v1";

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  /// Dotted scalar overrides, e.g. {"chain.eta", "0.01"}.
  std::vector<std::pair<std::string, std::string>> overrides;
};

struct StudyResult {
  nlohmann::json summary;
  std::vector<theory::BoundReport> reports;
  std::vector<std::string> files;
  /// Every report with an empirical value satisfies the +2 SE rule.
  bool all_satisfied = true;
};

const std::vector<std::string>& command_names();

/// Throws config::ConfigError for invalid input and Error otherwise.
StudyResult run_command(const std::string& command, const std::string& config_text,
                        const RunOptions& options);

/// Fixed-width text table of the reports.
std::string render_table(const std::vector<theory::BoundReport>& reports);

nlohmann::json to_json(const theory::BoundReport& report);

}  // namespace plmc::studies

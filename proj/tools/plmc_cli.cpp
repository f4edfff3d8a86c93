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

// plmc-lab: command-line front end over the plmc C API.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plmc/plmc.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plmc-lab: projected Langevin Monte Carlo experiments"};
  app.set_version_flag("--version", std::string(plmc_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::vector<std::string> overrides;
  bool quiet = false;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"sample", "run the projected chain and write samples"},
      {"coupled-error", "coupled discretization error over a step-size grid"},
      {"localtime", "local time of the reflected reference diffusion"},
      {"warmstart", "Gaussian warm start report"},
      {"w2", "Wasserstein comparison of chain and exact samples"},
      {"schedule", "step size and step count for a target accuracy"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads for replicas")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--set", overrides, "override a scalar field, e.g. chain.eta=0.01");
    sub->add_flag("-q,--quiet", quiet, "do not print the report table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto text = slurp(config_path);
  if (!text) {
    std::cerr << "plmc-lab: cannot read config '" << config_path << "'\n";
    return kExitConfig;
  }

  std::vector<const char*> override_ptrs;
  for (const auto& o : overrides) override_ptrs.push_back(o.c_str());
  plmc_study_options options{};
  options.out_dir = out_dir.c_str();
  options.has_seed = seed.has_value();
  options.seed = seed.value_or(0);
  options.threads = threads.value_or(0);
  options.overrides = override_ptrs.empty() ? nullptr : override_ptrs.data();
  options.override_count = override_ptrs.size();

  plmc_study* study = nullptr;
  const plmc_status status = plmc_run_study(command.c_str(), text->c_str(), &options, &study);
  if (status != PLMC_OK) {
    std::cerr << "plmc-lab " << command << ": " << plmc_last_error() << "\n";
    const bool config_error =
        status == PLMC_ERR_CONFIG || status == PLMC_ERR_INVALID_ARGUMENT;
    return config_error ? kExitConfig : kExitRuntime;
  }
  if (!quiet) {
    std::cout << plmc_study_table(study);
    std::cout << "outputs written to " << out_dir << "\n";
  }
  plmc_study_free(study);
  return 0;
}

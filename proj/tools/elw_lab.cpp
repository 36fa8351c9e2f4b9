// Copyright 2026 The elw-lab Authors
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

// elw-lab: payoffs, entanglement diagnostics, counterstrategies, and pure
// Nash search for quantized two-player matrix games.
//
//   elw-lab <command> --config <path> [--seed <u64>] [--out <path>]
//
// Exit codes: 0 success, 2 configuration error, 3 engine or numerical error.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "elw/config.hpp"
#include "elw/runner.hpp"
#include "elw/version.hpp"

namespace {

int parse_thread_cap(const char* text) {
  const std::string value(text);
  int threads = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), threads);
  if (ec != std::errc() || ptr != value.data() + value.size() || threads < 0) {
    throw elw::ConfigError(
        "config: ELW_LAB_THREADS must be a nonnegative integer, got '" +
        value + "'");
  }
  return threads;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized two-player matrix games: payoffs, entanglement "
               "diagnostics, counterstrategies, and pure-Nash search."};
  app.set_version_flag("--version", elw::kEngineVersion);

  std::string command;
  std::string config_path;
  std::uint64_t seed_value = 0;
  std::string out_path;
  app.add_option("command", command,
                 "One of: payoffs, sweep-entropy, counter, verify, search, "
                 "demo-theorem")
      ->required();
  app.add_option("--config", config_path, "Path to the JSON experiment config")
      ->required();
  CLI::Option* seed_option =
      app.add_option("--seed", seed_value, "Override solver.seed");
  CLI::Option* out_option =
      app.add_option("--out", out_path, "Override output.path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const elw::Command cmd = elw::parse_command(command);
    elw::ExperimentConfig cfg = elw::ExperimentConfig::parse_file(config_path);
    if (seed_option->count() > 0) {
      cfg.solver.seed = elw::RandomSeed{seed_value};
    }
    if (out_option->count() > 0) {
      cfg.output.path = out_path;
    }
    if (const char* env = std::getenv("ELW_LAB_THREADS")) {
      cfg.solver.threads = parse_thread_cap(env);
    }
    const std::string report = elw::run_to_text(cmd, cfg);
    elw::write_report(report, cfg.output.path);
    return 0;
  } catch (const elw::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

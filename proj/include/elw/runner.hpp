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

// Experiment orchestration: runs one command against a resolved
// configuration and renders a machine-readable report.
//
// Reports are deterministic: identical config + seed produce byte-identical
// text.  Every report embeds the engine version and the full resolved
// configuration.  JSON uses shortest-round-trip doubles; CSV uses 17
// significant digits, '.' decimals, LF line ends, and '#' provenance lines.

#ifndef ELW_RUNNER_HPP_
#define ELW_RUNNER_HPP_

#include <string>

#include "elw/config.hpp"

namespace elw {

enum class Command {
  kPayoffs,
  kSweepEntropy,
  kCounter,
  kVerify,
  kSearch,
  kDemoTheorem,
};

// Maps a command-line name ("payoffs", "sweep-entropy", "counter", "verify",
// "search", "demo-theorem") to the command; throws ConfigError for unknown
// names.
Command parse_command(const std::string& name);

const char* command_name(Command cmd);

// Executes the command and returns the complete rendered report in the
// configured format.  Throws ConfigError when the config lacks a block the
// command needs; engine precondition violations propagate unchanged.
std::string run_to_text(Command cmd, const ExperimentConfig& cfg);

// Writes the report to `path`, or to standard output when `path` is empty.
void write_report(const std::string& text, const std::string& path);

}  // namespace elw

#endif  // ELW_RUNNER_HPP_

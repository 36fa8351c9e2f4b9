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

// Experiment configuration: a JSON document describing the game, the gate,
// and the command-specific blocks, with exact-round-trip serialization of
// the resolved values.
//
// Complex matrices are encoded as flat row-major arrays of interleaved
// real/imaginary parts (2*n*n numbers for an n x n matrix).  Payoff tables
// are plain 2-D arrays of reals.

#ifndef ELW_CONFIG_HPP_
#define ELW_CONFIG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "elw/equilibrium.hpp"
#include "elw/game.hpp"
#include "elw/linalg.hpp"
#include "elw/stability.hpp"

namespace elw {

// A malformed or inconsistent configuration.  Parse errors carry
// "<origin>:<line>:" prefixes; semantic errors name the offending key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ReportFormat { kJson, kCsv };

// Gate description as configured (the "max-entangled" preset keeps its name
// here and expands to an explicit matrix only when the gate is built).
struct GateConfig {
  enum class Kind { kN2Gamma, kCartan, kMaxEntangled, kExplicit };

  Kind kind = Kind::kN2Gamma;
  double gamma = 0.0;          // kN2Gamma
  std::vector<double> params;  // kCartan
  Matrix matrix;               // kExplicit

  GateSpec to_spec(int n) const;
};

struct SweepConfig {
  bool present = false;
  double gamma_start = 0.0;
  double gamma_stop = 0.0;
  int steps = 0;
};

struct CounterConfig {
  bool present = false;
  Subsystem side = Subsystem::B;
  Unitary v;
  StrategyPair target;
};

struct DemoConfig {
  bool present = false;
  int candidates = 100;
  std::vector<StrategyPair> include;  // checked alongside the random draws
};

struct OutputConfig {
  std::string path;  // empty = standard output
  ReportFormat format = ReportFormat::kJson;
};

struct ExperimentConfig {
  int n = 2;
  std::optional<std::string> payoff_preset;  // set when a preset was named
  PayoffBimatrix payoffs;                    // always resolved
  GateConfig gate;
  SweepConfig sweep;
  std::vector<StrategyPair> candidates;
  CounterConfig counter;
  DemoConfig demo;
  SolverConfig solver;
  OutputConfig output;

  // Parses and validates a JSON document.  `origin` names the source in
  // error messages (typically the file path).
  static ExperimentConfig parse_string(const std::string& text,
                                       const std::string& origin);
  static ExperimentConfig parse_file(const std::string& path);

  // The fully resolved configuration (defaults applied, presets kept by
  // name), embedded verbatim in every report.
  nlohmann::json to_json() const;

  GameInstance make_game() const;
};

// Interleaved re/im row-major codec for complex matrices.
nlohmann::json encode_matrix(const Matrix& m);
Matrix decode_matrix(const nlohmann::json& values, int rows, int cols,
                     const std::string& path);

}  // namespace elw

#endif  // ELW_CONFIG_HPP_

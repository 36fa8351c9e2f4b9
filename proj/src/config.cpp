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

#include "elw/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

namespace elw {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError("config: " + message);
}

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail("'" + path + "' must be an object");
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (const auto& item : obj.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* key) { return item.key() == key; });
    if (!known) fail("unknown key '" + join_path(path, item.key()) + "'");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require_key(const json& obj, const char* key,
                        const std::string& path) {
  const json* value = find(obj, key);
  if (value == nullptr) {
    fail("missing required key '" + join_path(path, key) + "'");
  }
  return *value;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail("'" + path + "' must be a number");
  return j.get<double>();
}

double as_finite_double(const json& j, const std::string& path) {
  const double value = as_double(j, path);
  if (!std::isfinite(value)) fail("'" + path + "' must be finite");
  return value;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail("'" + path + "' must be an integer");
  return j.get<int>();
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    fail("'" + path + "' must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail("'" + path + "' must be a string");
  return j.get<std::string>();
}

RealMatrix decode_table(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    std::ostringstream os;
    os << "'" << path << "' must be an array of " << n << " rows";
    fail(os.str());
  }
  RealMatrix table(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      std::ostringstream os;
      os << "'" << path << "[" << i << "]' must be an array of " << n
         << " numbers";
      fail(os.str());
    }
    for (int k = 0; k < n; ++k) {
      std::ostringstream cell;
      cell << path << "[" << i << "][" << k << "]";
      table(i, k) = as_finite_double(row[static_cast<std::size_t>(k)],
                                     cell.str());
    }
  }
  return table;
}

json encode_table(const RealMatrix& table) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < table.cols(); ++k) row.push_back(table(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Unitary decode_strategy(const json& j, int n, const std::string& path) {
  const Matrix m = decode_matrix(j, n, n, path);
  try {
    return Unitary::checked(m, /*special=*/true);
  } catch (const std::invalid_argument& e) {
    fail("'" + path + "': " + e.what());
  }
}

StrategyPair decode_pair(const json& j, int n, const std::string& path) {
  require_object(j, path);
  check_keys(j, {"alice", "bob"}, path);
  return StrategyPair{
      decode_strategy(require_key(j, "alice", path), n,
                      join_path(path, "alice")),
      decode_strategy(require_key(j, "bob", path), n, join_path(path, "bob"))};
}

json encode_pair(const StrategyPair& pair) {
  return json{{"alice", encode_matrix(pair.alice.matrix())},
              {"bob", encode_matrix(pair.bob.matrix())}};
}

void parse_game(const json& j, ExperimentConfig& cfg) {
  require_object(j, "game");
  check_keys(j, {"n", "payoffs", "gate"}, "game");

  cfg.n = 2;
  if (const json* n_value = find(j, "n")) {
    cfg.n = as_int(*n_value, "game.n");
    if (cfg.n < 2) fail("'game.n' must be >= 2");
  }

  const json& payoffs = require_key(j, "payoffs", "game");
  if (payoffs.is_string()) {
    const std::string preset = payoffs.get<std::string>();
    if (preset != "pd-3-0-5-1") {
      fail("'game.payoffs': unknown preset '" + preset + "'");
    }
    if (cfg.n != 2) fail("'game.payoffs': preset '" + preset + "' needs n=2");
    cfg.payoff_preset = preset;
    cfg.payoffs = PayoffBimatrix::prisoners_dilemma();
  } else if (payoffs.is_object()) {
    check_keys(payoffs, {"alice", "bob", "symmetric_game"}, "game.payoffs");
    const RealMatrix alice = decode_table(require_key(payoffs, "alice", "game.payoffs"),
                                          cfg.n, "game.payoffs.alice");
    const RealMatrix bob = decode_table(require_key(payoffs, "bob", "game.payoffs"),
                                        cfg.n, "game.payoffs.bob");
    bool symmetric = false;
    if (const json* flag = find(payoffs, "symmetric_game")) {
      if (!flag->is_boolean()) {
        fail("'game.payoffs.symmetric_game' must be a boolean");
      }
      symmetric = flag->get<bool>();
    }
    try {
      cfg.payoffs = PayoffBimatrix::create(alice, bob, symmetric);
    } catch (const std::invalid_argument& e) {
      fail(std::string("'game.payoffs': ") + e.what());
    }
  } else {
    fail("'game.payoffs' must be a preset name or an object");
  }

  const json& gate = require_key(j, "gate", "game");
  require_object(gate, "game.gate");
  check_keys(gate, {"type", "gamma", "params", "matrix"}, "game.gate");
  const std::string type = as_string(require_key(gate, "type", "game.gate"),
                                     "game.gate.type");
  if (type == "n2gamma") {
    if (cfg.n != 2) fail("'game.gate': type 'n2gamma' needs n=2");
    cfg.gate.kind = GateConfig::Kind::kN2Gamma;
    cfg.gate.gamma = as_finite_double(require_key(gate, "gamma", "game.gate"),
                                      "game.gate.gamma");
  } else if (type == "cartan") {
    cfg.gate.kind = GateConfig::Kind::kCartan;
    const json& params = require_key(gate, "params", "game.gate");
    if (!params.is_array()) fail("'game.gate.params' must be an array");
    cfg.gate.params.clear();
    for (std::size_t i = 0; i < params.size(); ++i) {
      std::ostringstream path;
      path << "game.gate.params[" << i << "]";
      cfg.gate.params.push_back(as_finite_double(params[i], path.str()));
    }
  } else if (type == "max-entangled") {
    cfg.gate.kind = GateConfig::Kind::kMaxEntangled;
  } else if (type == "explicit") {
    cfg.gate.kind = GateConfig::Kind::kExplicit;
    const int dim = cfg.n * cfg.n;
    cfg.gate.matrix = decode_matrix(require_key(gate, "matrix", "game.gate"),
                                    dim, dim, "game.gate.matrix");
  } else {
    fail("'game.gate.type': unknown gate type '" + type + "'");
  }

  // Build once now so malformed gates surface as configuration errors.
  try {
    GameInstance::create(cfg.payoffs, build_gate(cfg.gate.to_spec(cfg.n)));
  } catch (const std::invalid_argument& e) {
    fail(std::string("'game.gate': ") + e.what());
  }
}

void parse_sweep(const json& j, ExperimentConfig& cfg) {
  require_object(j, "sweep");
  check_keys(j, {"gamma_start", "gamma_stop", "steps"}, "sweep");
  cfg.sweep.present = true;
  cfg.sweep.gamma_start = as_finite_double(
      require_key(j, "gamma_start", "sweep"), "sweep.gamma_start");
  cfg.sweep.gamma_stop = as_finite_double(require_key(j, "gamma_stop", "sweep"),
                                          "sweep.gamma_stop");
  cfg.sweep.steps = as_int(require_key(j, "steps", "sweep"), "sweep.steps");
  if (cfg.sweep.steps < 1) fail("'sweep.steps' must be >= 1");
  if (cfg.sweep.gamma_stop < cfg.sweep.gamma_start) {
    fail("'sweep.gamma_stop' must be >= 'sweep.gamma_start'");
  }
}

void parse_counter(const json& j, ExperimentConfig& cfg) {
  require_object(j, "counter");
  check_keys(j, {"side", "v", "target"}, "counter");
  cfg.counter.present = true;
  if (const json* side = find(j, "side")) {
    const std::string name = as_string(*side, "counter.side");
    if (name == "A") {
      cfg.counter.side = Subsystem::A;
    } else if (name == "B") {
      cfg.counter.side = Subsystem::B;
    } else {
      fail("'counter.side' must be \"A\" or \"B\"");
    }
  }
  cfg.counter.v =
      decode_strategy(require_key(j, "v", "counter"), cfg.n, "counter.v");
  cfg.counter.target =
      decode_pair(require_key(j, "target", "counter"), cfg.n, "counter.target");
}

void parse_demo(const json& j, ExperimentConfig& cfg) {
  require_object(j, "demo");
  check_keys(j, {"candidates", "include"}, "demo");
  cfg.demo.present = true;
  if (const json* count = find(j, "candidates")) {
    cfg.demo.candidates = as_int(*count, "demo.candidates");
    if (cfg.demo.candidates < 0) fail("'demo.candidates' must be >= 0");
  }
  if (const json* include = find(j, "include")) {
    if (!include->is_array()) fail("'demo.include' must be an array");
    for (std::size_t i = 0; i < include->size(); ++i) {
      std::ostringstream path;
      path << "demo.include[" << i << "]";
      cfg.demo.include.push_back(
          decode_pair((*include)[i], cfg.n, path.str()));
    }
  }
}

void parse_solver(const json& j, ExperimentConfig& cfg) {
  require_object(j, "solver");
  check_keys(j,
             {"restarts", "max_iters", "step_tol", "epsilon", "probe_count",
              "seed"},
             "solver");
  if (const json* v = find(j, "restarts")) {
    cfg.solver.restarts = as_int(*v, "solver.restarts");
  }
  if (const json* v = find(j, "max_iters")) {
    cfg.solver.max_iters = as_int(*v, "solver.max_iters");
  }
  if (const json* v = find(j, "step_tol")) {
    cfg.solver.step_tol = as_finite_double(*v, "solver.step_tol");
  }
  if (const json* v = find(j, "epsilon")) {
    cfg.solver.epsilon = as_finite_double(*v, "solver.epsilon");
  }
  if (const json* v = find(j, "probe_count")) {
    cfg.solver.probe_count = as_int(*v, "solver.probe_count");
  }
  if (const json* v = find(j, "seed")) {
    cfg.solver.seed = RandomSeed{as_seed(*v, "solver.seed")};
  }
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("'solver': ") + e.what());
  }
}

void parse_output(const json& j, ExperimentConfig& cfg) {
  require_object(j, "output");
  check_keys(j, {"path", "format"}, "output");
  if (const json* path = find(j, "path")) {
    cfg.output.path = as_string(*path, "output.path");
  }
  if (const json* format = find(j, "format")) {
    const std::string name = as_string(*format, "output.format");
    if (name == "json") {
      cfg.output.format = ReportFormat::kJson;
    } else if (name == "csv") {
      cfg.output.format = ReportFormat::kCsv;
    } else {
      fail("'output.format' must be \"json\" or \"csv\"");
    }
  }
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

GateSpec GateConfig::to_spec(int n) const {
  switch (kind) {
    case Kind::kN2Gamma:
      return GammaGateSpec{gamma};
    case Kind::kCartan:
      return CartanGateSpec{n, params};
    case Kind::kMaxEntangled:
      return max_entangled_gate(n);
    case Kind::kExplicit:
      return ExplicitGateSpec{matrix};
  }
  throw std::logic_error("gate config: unhandled kind");
}

nlohmann::json encode_matrix(const Matrix& m) {
  json values = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      values.push_back(m(i, j).real());
      values.push_back(m(i, j).imag());
    }
  }
  return values;
}

Matrix decode_matrix(const nlohmann::json& values, int rows, int cols,
                     const std::string& path) {
  const std::size_t expected = 2 * static_cast<std::size_t>(rows) * cols;
  if (!values.is_array() || values.size() != expected) {
    std::ostringstream os;
    os << "'" << path << "' must be a flat array of " << expected
       << " numbers (row-major, re/im interleaved) for a " << rows << "x"
       << cols << " complex matrix";
    fail(os.str());
  }
  Matrix m(rows, cols);
  std::size_t at = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      std::ostringstream cell;
      cell << path << "[" << at << "]";
      const double re = as_finite_double(values[at], cell.str());
      ++at;
      std::ostringstream cell2;
      cell2 << path << "[" << at << "]";
      const double im = as_finite_double(values[at], cell2.str());
      ++at;
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text,
                                                const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << origin << ":" << line_of_byte(text, e.byte) << ": " << e.what();
    throw ConfigError(os.str());
  }
  if (!root.is_object()) {
    throw ConfigError(origin + ": top-level value must be an object");
  }

  ExperimentConfig cfg;
  check_keys(root,
             {"game", "sweep", "candidates", "counter", "demo", "solver",
              "output"},
             "");
  parse_game(require_key(root, "game", ""), cfg);
  if (const json* sweep = find(root, "sweep")) parse_sweep(*sweep, cfg);
  if (const json* candidates = find(root, "candidates")) {
    if (!candidates->is_array()) fail("'candidates' must be an array");
    for (std::size_t i = 0; i < candidates->size(); ++i) {
      std::ostringstream path;
      path << "candidates[" << i << "]";
      cfg.candidates.push_back(decode_pair((*candidates)[i], cfg.n, path.str()));
    }
  }
  if (const json* counter = find(root, "counter")) parse_counter(*counter, cfg);
  if (const json* demo = find(root, "demo")) parse_demo(*demo, cfg);
  if (const json* solver = find(root, "solver")) parse_solver(*solver, cfg);
  if (const json* output = find(root, "output")) parse_output(*output, cfg);
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  json game;
  game["n"] = n;
  if (payoff_preset.has_value()) {
    game["payoffs"] = *payoff_preset;
  } else {
    game["payoffs"] = json{{"alice", encode_table(payoffs.alice)},
                           {"bob", encode_table(payoffs.bob)},
                           {"symmetric_game", payoffs.symmetric_game}};
  }
  json gate_json;
  switch (gate.kind) {
    case GateConfig::Kind::kN2Gamma:
      gate_json = json{{"type", "n2gamma"}, {"gamma", gate.gamma}};
      break;
    case GateConfig::Kind::kCartan:
      gate_json = json{{"type", "cartan"}, {"params", gate.params}};
      break;
    case GateConfig::Kind::kMaxEntangled:
      gate_json = json{{"type", "max-entangled"}};
      break;
    case GateConfig::Kind::kExplicit:
      gate_json = json{{"type", "explicit"},
                       {"matrix", encode_matrix(gate.matrix)}};
      break;
  }
  game["gate"] = std::move(gate_json);
  j["game"] = std::move(game);

  if (sweep.present) {
    j["sweep"] = json{{"gamma_start", sweep.gamma_start},
                      {"gamma_stop", sweep.gamma_stop},
                      {"steps", sweep.steps}};
  }
  if (!candidates.empty()) {
    json list = json::array();
    for (const auto& pair : candidates) list.push_back(encode_pair(pair));
    j["candidates"] = std::move(list);
  }
  if (counter.present) {
    j["counter"] = json{
        {"side", counter.side == Subsystem::A ? "A" : "B"},
        {"v", encode_matrix(counter.v.matrix())},
        {"target", encode_pair(counter.target)}};
  }
  if (demo.present) {
    json demo_json;
    demo_json["candidates"] = demo.candidates;
    if (!demo.include.empty()) {
      json list = json::array();
      for (const auto& pair : demo.include) list.push_back(encode_pair(pair));
      demo_json["include"] = std::move(list);
    }
    j["demo"] = std::move(demo_json);
  }
  j["solver"] = json{{"restarts", solver.restarts},
                     {"max_iters", solver.max_iters},
                     {"step_tol", solver.step_tol},
                     {"epsilon", solver.epsilon},
                     {"probe_count", solver.probe_count},
                     {"seed", solver.seed.value}};
  j["output"] = json{
      {"path", output.path},
      {"format", output.format == ReportFormat::kJson ? "json" : "csv"}};
  return j;
}

GameInstance ExperimentConfig::make_game() const {
  return GameInstance::create(payoffs, build_gate(gate.to_spec(n)));
}

}  // namespace elw

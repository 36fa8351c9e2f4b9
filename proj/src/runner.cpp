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

#include "elw/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elw/entangle.hpp"
#include "elw/equilibrium.hpp"
#include "elw/game.hpp"
#include "elw/stability.hpp"
#include "elw/version.hpp"

namespace elw {

namespace {

using nlohmann::json;

// Substreams for the demo candidates, disjoint from the solver's internal
// stream namespaces.
constexpr std::uint64_t kStreamDemoAlice = 16;
constexpr std::uint64_t kStreamDemoBob = 17;

std::uint64_t stream_tag(std::uint64_t kind, std::uint64_t index) {
  return (kind << 32) | index;
}

// 17 significant digits round-trip any double exactly.
std::string csv_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_number(int value) { return std::to_string(value); }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct CommandOutput {
  json results;
  CsvTable table;
};

const char* side_name(Subsystem side) {
  return side == Subsystem::A ? "A" : "B";
}

const char* status_name(EquilibriumStatus status) {
  switch (status) {
    case EquilibriumStatus::kCertifiedEpsilonEquilibrium:
      return "certified_epsilon_equilibrium";
    case EquilibriumStatus::kRefuted:
      return "refuted";
    case EquilibriumStatus::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

json encode_real_table(const RealMatrix& table) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < table.cols(); ++j) row.push_back(table(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json encode_witness(const DeviationWitness& witness) {
  return json{{"side", side_name(witness.side)},
              {"gain", witness.gain},
              {"strategy", encode_matrix(witness.strategy.matrix())}};
}

// Payoff of `pair` with one side's strategy replaced.
std::pair<double, double> payoffs_with(const GameInstance& game,
                                       const StrategyPair& pair,
                                       Subsystem side,
                                       const Unitary& replacement) {
  if (side == Subsystem::A) {
    return expected_payoffs(game, replacement, pair.bob);
  }
  return expected_payoffs(game, pair.alice, replacement);
}

CommandOutput run_payoffs(const GameInstance& game,
                          const ExperimentConfig& cfg) {
  if (cfg.candidates.empty()) {
    throw ConfigError(
        "config: command 'payoffs' needs a nonempty 'candidates' block");
  }
  CommandOutput out;
  out.results["pairs"] = json::array();
  out.table.header = {"index", "alice_payoff", "bob_payoff"};
  for (int i = 0; i < cfg.n; ++i) {
    for (int j = 0; j < cfg.n; ++j) {
      std::ostringstream name;
      name << "p_" << i << "_" << j;
      out.table.header.push_back(name.str());
    }
  }
  for (std::size_t index = 0; index < cfg.candidates.size(); ++index) {
    const StrategyPair& pair = cfg.candidates[index];
    const auto dist =
        outcome_distribution(final_state(game, pair.alice, pair.bob));
    const auto value = expected_payoffs(dist, game.payoffs);
    out.results["pairs"].push_back(
        json{{"index", index},
             {"alice", value.first},
             {"bob", value.second},
             {"probs", encode_real_table(dist.probs)}});
    std::vector<std::string> row = {csv_number(static_cast<int>(index)),
                                    csv_number(value.first),
                                    csv_number(value.second)};
    for (int i = 0; i < cfg.n; ++i) {
      for (int j = 0; j < cfg.n; ++j) row.push_back(csv_number(dist.probs(i, j)));
    }
    out.table.rows.push_back(std::move(row));
  }
  return out;
}

CommandOutput run_sweep_entropy(const ExperimentConfig& cfg) {
  if (!cfg.sweep.present) {
    throw ConfigError(
        "config: command 'sweep-entropy' needs a 'sweep' block");
  }
  const bool one_parameter =
      cfg.gate.kind == GateConfig::Kind::kN2Gamma ||
      (cfg.gate.kind == GateConfig::Kind::kCartan &&
       cfg.gate.params.size() == 1);
  if (!one_parameter) {
    throw ConfigError(
        "config: 'sweep-entropy' needs a one-parameter gate (n2gamma, or "
        "cartan with a single parameter)");
  }
  if (cfg.gate.kind == GateConfig::Kind::kN2Gamma &&
      (cfg.sweep.gamma_start < 0.0 ||
       cfg.sweep.gamma_stop > std::numbers::pi / 2 + 1e-12)) {
    throw ConfigError(
        "config: 'sweep' range for the n2gamma gate must lie in [0, pi/2]");
  }

  CommandOutput out;
  out.results["rows"] = json::array();
  out.table.header = {"gamma", "entropy", "max_ent_residual"};
  for (int t = 0; t < cfg.sweep.steps; ++t) {
    const double gamma =
        cfg.sweep.steps == 1
            ? cfg.sweep.gamma_start
            : cfg.sweep.gamma_start +
                  (cfg.sweep.gamma_stop - cfg.sweep.gamma_start) * t /
                      (cfg.sweep.steps - 1);
    GateConfig point = cfg.gate;
    if (point.kind == GateConfig::Kind::kN2Gamma) {
      point.gamma = gamma;
    } else {
      point.params[0] = gamma;
    }
    const GameInstance game =
        GameInstance::create(cfg.payoffs, build_gate(point.to_spec(cfg.n)));
    const StateVector psi = initial_state(game);
    const double entropy = entanglement_entropy(psi);
    const double residual =
        CoeffMatrix::of_state(psi).max_entanglement_residual();
    out.results["rows"].push_back(json{{"gamma", gamma},
                                       {"entropy", entropy},
                                       {"max_ent_residual", residual}});
    out.table.rows.push_back(
        {csv_number(gamma), csv_number(entropy), csv_number(residual)});
  }
  return out;
}

CommandOutput run_counter(const GameInstance& game,
                          const ExperimentConfig& cfg) {
  if (!cfg.counter.present) {
    throw ConfigError("config: command 'counter' needs a 'counter' block");
  }
  const StateVector psi = initial_state(game);
  const CoeffMatrix f = CoeffMatrix::of_state(psi);
  const StrategyPair& target = cfg.counter.target;

  Unitary reply;
  StrategyPair realized;
  if (cfg.counter.side == Subsystem::B) {
    reply = counterstrategy(cfg.counter.v, target, f);
    realized = StrategyPair{cfg.counter.v, reply};
  } else {
    reply =
        counterstrategy(cfg.counter.v, StrategyPair{target.bob, target.alice}, f);
    realized = StrategyPair{reply, cfg.counter.v};
  }

  const auto target_dist =
      outcome_distribution(final_state(game, target.alice, target.bob));
  const auto achieved_dist =
      outcome_distribution(final_state(game, realized.alice, realized.bob));
  const double discrepancy =
      (target_dist.probs - achieved_dist.probs).cwiseAbs().maxCoeff();
  const auto target_value = expected_payoffs(target_dist, game.payoffs);
  const auto achieved_value = expected_payoffs(achieved_dist, game.payoffs);

  CommandOutput out;
  out.results = json{
      {"side", side_name(cfg.counter.side)},
      {"counterstrategy", encode_matrix(reply.matrix())},
      {"replay",
       json{{"max_discrepancy", discrepancy},
            {"target", json{{"alice", target_value.first},
                            {"bob", target_value.second}}},
            {"achieved", json{{"alice", achieved_value.first},
                              {"bob", achieved_value.second}}}}}};
  out.table.header = {"side",          "max_discrepancy", "target_alice",
                      "target_bob",    "achieved_alice",  "achieved_bob"};
  std::vector<std::string> row = {side_name(cfg.counter.side),
                                  csv_number(discrepancy),
                                  csv_number(target_value.first),
                                  csv_number(target_value.second),
                                  csv_number(achieved_value.first),
                                  csv_number(achieved_value.second)};
  for (int k = 0; k < 2 * cfg.n * cfg.n; ++k) {
    std::ostringstream name;
    name << "w_" << k;
    out.table.header.push_back(name.str());
  }
  const json reply_values = encode_matrix(reply.matrix());
  for (const auto& value : reply_values) {
    row.push_back(csv_number(value.get<double>()));
  }
  out.table.rows.push_back(std::move(row));
  return out;
}

json report_to_json(const GameInstance& game, const EquilibriumReport& report,
                    const char* index_key, int index) {
  const auto value =
      expected_payoffs(game, report.candidate.alice, report.candidate.bob);
  json j{{index_key, index},
         {"status", status_name(report.status)},
         {"payoff_alice", value.first},
         {"payoff_bob", value.second},
         {"epsilon", report.epsilon},
         {"probes_used", report.probes_used},
         {"candidate",
          json{{"alice", encode_matrix(report.candidate.alice.matrix())},
               {"bob", encode_matrix(report.candidate.bob.matrix())}}}};
  j["witness"] = report.witness ? encode_witness(*report.witness) : json();
  return j;
}

std::vector<std::string> report_to_row(const GameInstance& game,
                                       const EquilibriumReport& report,
                                       int index) {
  const auto value =
      expected_payoffs(game, report.candidate.alice, report.candidate.bob);
  std::vector<std::string> row = {
      csv_number(index),
      status_name(report.status),
      csv_number(value.first),
      csv_number(value.second),
      csv_number(report.epsilon),
      csv_number(report.probes_used),
  };
  if (report.witness) {
    row.push_back(side_name(report.witness->side));
    row.push_back(csv_number(report.witness->gain));
  } else {
    row.push_back("");
    row.push_back("");
  }
  return row;
}

CommandOutput run_verify(const GameInstance& game,
                         const ExperimentConfig& cfg) {
  if (cfg.candidates.empty()) {
    throw ConfigError(
        "config: command 'verify' needs a nonempty 'candidates' block");
  }
  CommandOutput out;
  out.results["reports"] = json::array();
  out.table.header = {"index",       "status",       "payoff_alice",
                      "payoff_bob",  "epsilon",      "probes_used",
                      "witness_side", "witness_gain"};
  for (std::size_t i = 0; i < cfg.candidates.size(); ++i) {
    const EquilibriumReport report =
        verify_equilibrium(game, cfg.candidates[i], cfg.solver);
    out.results["reports"].push_back(
        report_to_json(game, report, "index", static_cast<int>(i)));
    out.table.rows.push_back(report_to_row(game, report, static_cast<int>(i)));
  }
  return out;
}

CommandOutput run_search(const GameInstance& game,
                         const ExperimentConfig& cfg) {
  const auto reports = equilibrium_search(game, cfg.solver);
  CommandOutput out;
  out.results["reports"] = json::array();
  out.table.header = {"restart",     "status",       "payoff_alice",
                      "payoff_bob",  "epsilon",      "probes_used",
                      "witness_side", "witness_gain"};
  for (std::size_t r = 0; r < reports.size(); ++r) {
    out.results["reports"].push_back(
        report_to_json(game, reports[r], "restart", static_cast<int>(r)));
    out.table.rows.push_back(
        report_to_row(game, reports[r], static_cast<int>(r)));
  }
  int certified = 0;
  int refuted = 0;
  int inconclusive = 0;
  for (const auto& report : reports) {
    switch (report.status) {
      case EquilibriumStatus::kCertifiedEpsilonEquilibrium:
        ++certified;
        break;
      case EquilibriumStatus::kRefuted:
        ++refuted;
        break;
      case EquilibriumStatus::kInconclusive:
        ++inconclusive;
        break;
    }
  }
  out.results["summary"] = json{{"certified", certified},
                                {"refuted", refuted},
                                {"inconclusive", inconclusive}};
  return out;
}

CommandOutput run_demo_theorem(const GameInstance& game,
                               const ExperimentConfig& cfg) {
  const CoeffMatrix f = CoeffMatrix::of_state(initial_state(game));
  if (!f.is_maximally_entangled() || !f.is_symmetric()) {
    throw ConfigError(
        "config: 'demo-theorem' needs a maximally entangling gate with a "
        "symmetric coefficient matrix; the steering construction does not "
        "exist elsewhere (run 'verify' or 'search' instead)");
  }

  struct Candidate {
    StrategyPair pair;
    const char* source;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < cfg.demo.candidates; ++i) {
    const std::uint64_t index = static_cast<std::uint64_t>(i);
    candidates.push_back(Candidate{
        StrategyPair{
            haar_random_special_unitary(
                cfg.n, derive_seed(cfg.solver.seed,
                                   stream_tag(kStreamDemoAlice, index))),
            haar_random_special_unitary(
                cfg.n, derive_seed(cfg.solver.seed,
                                   stream_tag(kStreamDemoBob, index)))},
        "haar"});
  }
  for (const auto& pair : cfg.demo.include) {
    candidates.push_back(Candidate{pair, "explicit"});
  }
  if (candidates.empty()) {
    throw ConfigError(
        "config: 'demo-theorem' needs demo.candidates > 0 or a nonempty "
        "demo.include list");
  }

  CommandOutput out;
  out.results["candidates"] = json::array();
  out.table.header = {"index",        "source",       "payoff_alice",
                      "payoff_bob",   "outcome",      "witness_side",
                      "witness_gain"};
  int refuted = 0;
  int trivial = 0;
  double min_gain = 0.0;
  bool have_gain = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const StrategyPair& pair = candidates[i].pair;
    const auto value = expected_payoffs(game, pair.alice, pair.bob);
    const auto witness = nonexistence_witness(game, pair);
    json row{{"index", i},
             {"source", candidates[i].source},
             {"payoff_alice", value.first},
             {"payoff_bob", value.second}};
    std::vector<std::string> csv_row = {
        csv_number(static_cast<int>(i)), candidates[i].source,
        csv_number(value.first), csv_number(value.second)};
    if (witness) {
      // Replay the deviation through the game engine so the reported gain is
      // independent of the construction that produced it.
      const auto deviated = payoffs_with(game, pair, witness->side,
                                         witness->strategy);
      const double replayed_gain =
          (witness->side == Subsystem::A ? deviated.first - value.first
                                         : deviated.second - value.second);
      ++refuted;
      if (!have_gain || replayed_gain < min_gain) min_gain = replayed_gain;
      have_gain = true;
      row["outcome"] = "refuted";
      json w = encode_witness(*witness);
      w["gain"] = replayed_gain;
      row["witness"] = std::move(w);
      csv_row.push_back("refuted");
      csv_row.push_back(side_name(witness->side));
      csv_row.push_back(csv_number(replayed_gain));
    } else {
      ++trivial;
      row["outcome"] = "trivial_optimum";
      row["witness"] = json();
      csv_row.push_back("trivial_optimum");
      csv_row.push_back("");
      csv_row.push_back("");
    }
    out.results["candidates"].push_back(std::move(row));
    out.table.rows.push_back(std::move(csv_row));
  }
  json summary{{"total", candidates.size()},
               {"refuted", refuted},
               {"trivial_optima", trivial},
               {"text", "all candidates refuted or trivially optimal"}};
  if (have_gain) {
    summary["min_witness_gain"] = min_gain;
  } else {
    summary["min_witness_gain"] = json();
  }
  out.results["summary"] = std::move(summary);
  return out;
}

std::string render_json(Command cmd, const ExperimentConfig& cfg,
                        const json& results) {
  json report{{"engine", kEngineVersion},
              {"command", command_name(cmd)},
              {"config", cfg.to_json()},
              {"results", results}};
  return report.dump(2) + "\n";
}

std::string render_csv(Command cmd, const ExperimentConfig& cfg,
                       const CsvTable& table) {
  std::ostringstream os;
  os << "# engine: " << kEngineVersion << "\n";
  os << "# command: " << command_name(cmd) << "\n";
  os << "# config: " << cfg.to_json().dump() << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) os << ",";
    os << table.header[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ",";
      os << row[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "payoffs") return Command::kPayoffs;
  if (name == "sweep-entropy") return Command::kSweepEntropy;
  if (name == "counter") return Command::kCounter;
  if (name == "verify") return Command::kVerify;
  if (name == "search") return Command::kSearch;
  if (name == "demo-theorem") return Command::kDemoTheorem;
  throw ConfigError("config: unknown command '" + name + "'");
}

const char* command_name(Command cmd) {
  switch (cmd) {
    case Command::kPayoffs:
      return "payoffs";
    case Command::kSweepEntropy:
      return "sweep-entropy";
    case Command::kCounter:
      return "counter";
    case Command::kVerify:
      return "verify";
    case Command::kSearch:
      return "search";
    case Command::kDemoTheorem:
      return "demo-theorem";
  }
  return "unknown";
}

std::string run_to_text(Command cmd, const ExperimentConfig& cfg) {
  // The demo block participates in every demo-theorem run (its defaults
  // matter), so it must appear in the embedded provenance.
  ExperimentConfig resolved = cfg;
  if (cmd == Command::kDemoTheorem) resolved.demo.present = true;

  CommandOutput out;
  switch (cmd) {
    case Command::kPayoffs:
      out = run_payoffs(resolved.make_game(), resolved);
      break;
    case Command::kSweepEntropy:
      out = run_sweep_entropy(resolved);
      break;
    case Command::kCounter:
      out = run_counter(resolved.make_game(), resolved);
      break;
    case Command::kVerify:
      out = run_verify(resolved.make_game(), resolved);
      break;
    case Command::kSearch:
      out = run_search(resolved.make_game(), resolved);
      break;
    case Command::kDemoTheorem:
      out = run_demo_theorem(resolved.make_game(), resolved);
      break;
  }
  if (resolved.output.format == ReportFormat::kJson) {
    return render_json(cmd, resolved, out.results);
  }
  return render_csv(cmd, resolved, out.table);
}

void write_report(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream outfile(path, std::ios::binary);
  if (!outfile) {
    throw std::runtime_error("report: cannot open '" + path + "' for writing");
  }
  outfile << text;
  if (!outfile) {
    throw std::runtime_error("report: failed while writing '" + path + "'");
  }
}

}  // namespace elw

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

// End-to-end acceptance gate. Each criterion prints exactly one PASS or
// FAIL line; the process exits nonzero if any criterion fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "elw/config.hpp"
#include "elw/entangle.hpp"
#include "elw/equilibrium.hpp"
#include "elw/game.hpp"
#include "elw/linalg.hpp"
#include "elw/runner.hpp"
#include "elw/stability.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace elw;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

int g_checks = 0;
int g_failed = 0;

#define ACC_CHECK(cond)                                                     \
  do {                                                                      \
    ++g_checks;                                                             \
    if (!(cond)) {                                                          \
      ++g_failed;                                                           \
      if (g_failed <= 5) {                                                  \
        std::printf("        failed check: %s (line %d)\n", #cond,          \
                    __LINE__);                                              \
      }                                                                     \
    }                                                                       \
  } while (0)

bool run_criterion(int index, const std::string& label,
                   const std::function<void()>& body) {
  g_checks = 0;
  g_failed = 0;
  bool threw = false;
  try {
    body();
  } catch (const std::exception& e) {
    threw = true;
    std::printf("        unexpected exception: %s\n", e.what());
  }
  const bool ok = !threw && g_failed == 0;
  std::printf("%s  criterion %d: %s (%d/%d checks)\n", ok ? "PASS" : "FAIL",
              index, label.c_str(), g_checks - g_failed, g_checks);
  std::fflush(stdout);
  return ok;
}

GameInstance pd_game(double gamma) {
  return GameInstance::create(PayoffBimatrix::prisoners_dilemma(),
                              build_gate(GammaGateSpec{gamma}));
}

GameInstance preset_game(int n) {
  RealMatrix zero = RealMatrix::Zero(n, n);
  return GameInstance::create(PayoffBimatrix::create(zero, zero, false),
                              build_gate(max_entangled_gate(n)));
}

// --- Criterion 1: the entangling gate against an independent oracle. -----

void criterion_gate() {
  const Matrix generator = kron(pauli_sigma2(), pauli_sigma2());
  for (int i = 0; i < 50; ++i) {
    const double gamma = (kPi / 2) * static_cast<double>(i) / 49.0;
    const GateOperator gate = build_gate(GammaGateSpec{gamma});
    const Matrix oracle = elw_test::series_exponential(
        Complex(0.0, -gamma / 2.0) * generator, 20);
    ACC_CHECK(max_abs_diff(gate.j.matrix(), oracle) <= 1e-8);
    ACC_CHECK(unitarity_residual(gate.j.matrix()) <= 1e-10);
  }
}

// --- Criterion 2: the maximal-entanglement residual. ----------------------

void criterion_max_entanglement() {
  const StateVector top = initial_state(pd_game(kPi / 2));
  const CoeffMatrix c = CoeffMatrix::of_state(top);
  const Matrix direct =
      2.0 * c.coeffs() * c.coeffs().adjoint() - Matrix::Identity(2, 2);
  ACC_CHECK(max_abs(direct) <= 1e-12);
  ACC_CHECK(c.max_entanglement_residual() <= 1e-12);

  const EntanglementDiagnostic d = diagnose_entanglement(top);
  const Matrix half = 0.5 * Matrix::Identity(2, 2);
  ACC_CHECK(max_abs_diff(d.rho_a, half) <= 1e-12);
  ACC_CHECK(max_abs_diff(d.rho_b, half) <= 1e-12);

  const CoeffMatrix flat = CoeffMatrix::of_state(initial_state(pd_game(0.0)));
  ACC_CHECK(flat.max_entanglement_residual() > 0.9);
}

// --- Criterion 3: the stabilizing pairs and their closure. ----------------

void criterion_stabilizers() {
  struct Setup {
    int n;
    int samples;
  };
  for (const Setup setup : {Setup{2, 1000}, Setup{3, 200}}) {
    const GameInstance game = preset_game(setup.n);
    const StateVector psi = initial_state(game);
    const CoeffMatrix f = CoeffMatrix::of_state(psi);
    Rng rng(RandomSeed{1301});
    Unitary prev_u = Unitary::identity(setup.n);
    Unitary prev_partner = Unitary::identity(setup.n);
    for (int i = 0; i < setup.samples; ++i) {
      const Unitary u = haar_random_special_unitary(setup.n, rng);
      const Unitary partner = stabilizer_partner(u, f);
      const StabilizerCheck check =
          is_stabilizer(StrategyPair::create(u, partner), psi, 1e-10);
      ACC_CHECK(check.residual <= 1e-10);

      const StrategyPair composed =
          compose(StrategyPair::create(u, partner),
                  StrategyPair::create(prev_u, prev_partner));
      ACC_CHECK(is_stabilizer(composed, psi, 1e-10).residual <= 1e-10);
      prev_u = u;
      prev_partner = partner;
    }
  }
}

// --- Criterion 4: the coset decomposition identity. ------------------------

void criterion_decomposition() {
  for (const int n : {2, 3}) {
    const GameInstance game = preset_game(n);
    const StateVector psi = initial_state(game);
    const CoeffMatrix f = CoeffMatrix::of_state(psi);
    Rng rng(RandomSeed{1401});
    for (int i = 0; i < 1000; ++i) {
      const StrategyPair pair =
          StrategyPair::create(haar_random_special_unitary(n, rng),
                               haar_random_special_unitary(n, rng));
      const Unitary v = haar_random_special_unitary(n, rng);
      const CosetDecomposition d = decompose(pair, v, f);
      const StrategyPair product = compose(d.rep_pair, d.stab_pair);
      ACC_CHECK(max_abs_diff(product.alice.matrix(), pair.alice.matrix()) <=
                1e-12);
      ACC_CHECK(max_abs_diff(product.bob.matrix(), pair.bob.matrix()) <=
                1e-12);
      ACC_CHECK(is_stabilizer(d.stab_pair, psi, 1e-10).stabilizes);
    }
  }
}

// --- Criterion 5: counterstrategies and the analytic best response. --------

void criterion_counterstrategies() {
  const GameInstance game = pd_game(kPi / 2);
  const CoeffMatrix f = CoeffMatrix::of_state(initial_state(game));
  Rng rng(RandomSeed{1501});
  for (int i = 0; i < 1000; ++i) {
    const Unitary v = haar_random_special_unitary(2, rng);
    const StrategyPair target =
        StrategyPair::create(haar_random_special_unitary(2, rng),
                             haar_random_special_unitary(2, rng));
    const Unitary w = counterstrategy(v, target, f);
    const OutcomeDistribution achieved =
        outcome_distribution(final_state(game, v, w));
    const OutcomeDistribution wanted =
        outcome_distribution(final_state(game, target.alice, target.bob));
    ACC_CHECK((achieved.probs - wanted.probs).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SolverConfig cfg;
  cfg.seed = RandomSeed{1502};
  Rng alice_rng(RandomSeed{1503});
  for (int i = 0; i < 100; ++i) {
    const Unitary alice = haar_random_special_unitary(2, alice_rng);
    const BestResponseResult br =
        best_response(game, Subsystem::B, alice, cfg);
    ACC_CHECK(std::abs(br.value - 5.0) <= 1e-9);
  }
}

// --- Criterion 6: the no-pure-equilibrium demonstration. -------------------

void criterion_demonstration() {
  ExperimentConfig pd = ExperimentConfig::parse_string(R"({
    "game": {"n": 2, "payoffs": "pd-3-0-5-1",
             "gate": {"type": "n2gamma", "gamma": 1.5707963267948966}},
    "demo": {"candidates": 100},
    "solver": {"seed": 1}
  })",
                                                       "acceptance");
  const json doc =
      json::parse(run_to_text(Command::kDemoTheorem, pd));
  const json& summary = doc["results"]["summary"];
  ACC_CHECK(summary["total"] == 100);
  ACC_CHECK(summary["refuted"] == 100);
  ACC_CHECK(summary["trivial_optima"] == 0);
  for (const json& row : doc["results"]["candidates"]) {
    ACC_CHECK(row["outcome"] == "refuted");
    ACC_CHECK(row["witness"]["gain"].get<double>() > 1e-6);
  }

  // A coordination table whose maximum is shared by both players: the
  // candidate steering to that cell admits no improving deviation.
  ExperimentConfig coord = ExperimentConfig::parse_string(R"({
    "game": {"n": 2,
             "payoffs": {"alice": [[2, 0], [0, 1]],
                         "bob":   [[2, 0], [0, 1]]},
             "gate": {"type": "n2gamma", "gamma": 1.5707963267948966}},
    "demo": {"candidates": 8,
             "include": [{"alice": [1,0, 0,0, 0,0, 1,0],
                          "bob":   [1,0, 0,0, 0,0, 1,0]}]},
    "solver": {"seed": 1}
  })",
                                                          "acceptance");
  const json coord_doc =
      json::parse(run_to_text(Command::kDemoTheorem, coord));
  ACC_CHECK(coord_doc["results"]["summary"]["trivial_optima"].get<int>() >= 1);
  bool found_trivial_with_shared_payoff = false;
  for (const json& row : coord_doc["results"]["candidates"]) {
    if (row["outcome"] == "trivial_optimum" &&
        std::abs(row["payoff_alice"].get<double>() - 2.0) <= 1e-9 &&
        std::abs(row["payoff_bob"].get<double>() - 2.0) <= 1e-9) {
      found_trivial_with_shared_payoff = true;
    }
  }
  ACC_CHECK(found_trivial_with_shared_payoff);
}

// --- Criterion 7: the classical limit of the solver. -----------------------

void criterion_classical_limit() {
  const GameInstance game = pd_game(0.0);
  SolverConfig cfg;
  cfg.seed = RandomSeed{1701};
  cfg.restarts = 8;
  cfg.probe_count = 32;

  const auto reports = equilibrium_search(game, cfg);
  int certified = 0;
  for (const auto& report : reports) {
    if (report.status != EquilibriumStatus::kCertifiedEpsilonEquilibrium) {
      continue;
    }
    ++certified;
    const auto payoffs =
        expected_payoffs(game, report.candidate.alice, report.candidate.bob);
    ACC_CHECK(std::abs(payoffs.first - 1.0) <= 1e-6);
    ACC_CHECK(std::abs(payoffs.second - 1.0) <= 1e-6);
  }
  ACC_CHECK(certified >= 1);

  const StrategyPair cooperate = StrategyPair::create(
      classical_strategy(2, 0), classical_strategy(2, 0));
  const EquilibriumReport verdict = verify_equilibrium(game, cooperate, cfg);
  ACC_CHECK(verdict.status == EquilibriumStatus::kRefuted);
  ACC_CHECK(verdict.witness.has_value());
  if (verdict.witness) {
    ACC_CHECK(verdict.witness->side == Subsystem::B);
    ACC_CHECK(std::abs(verdict.witness->gain - 2.0) <= 1e-6);
  }
}

// --- Criterion 8: the entanglement entropy sweep. ---------------------------

void criterion_entropy() {
  const double at_zero = entanglement_entropy(initial_state(pd_game(0.0)));
  ACC_CHECK(std::abs(at_zero) <= 1e-6);

  const double at_quarter =
      entanglement_entropy(initial_state(pd_game(kPi / 4)));
  const double oracle =
      elw_test::binary_entropy(std::pow(std::cos(kPi / 8), 2));
  ACC_CHECK(std::abs(at_quarter - oracle) <= 1e-6);

  const double at_half = entanglement_entropy(initial_state(pd_game(kPi / 2)));
  ACC_CHECK(std::abs(at_half - std::log(2.0)) <= 1e-6);

  double prev = -1.0;
  bool monotone = true;
  for (int i = 0; i < 50; ++i) {
    const double gamma = (kPi / 2) * static_cast<double>(i) / 49.0;
    const double s = entanglement_entropy(initial_state(pd_game(gamma)));
    if (s < prev - 1e-12) monotone = false;
    prev = s;
  }
  ACC_CHECK(monotone);
}

// --- Criterion 9: byte-identical reports under identical seeds. -------------

void criterion_determinism() {
  const std::string config_text = R"({
    "game": {"n": 2, "payoffs": "pd-3-0-5-1",
             "gate": {"type": "n2gamma", "gamma": 1.5707963267948966}},
    "candidates": [{"alice": [1,0, 0,0, 0,0, 1,0],
                    "bob":   [1,0, 0,0, 0,0, 1,0]},
                   {"alice": [0,0, 1,0, -1,0, 0,0],
                    "bob":   [0,0, 1,0, -1,0, 0,0]}],
    "sweep": {"gamma_start": 0.0, "gamma_stop": 1.5707963267948966,
              "steps": 25},
    "counter": {"side": "B",
                "v": [1,0, 0,0, 0,0, 1,0],
                "target": {"alice": [0,0, 1,0, -1,0, 0,0],
                           "bob":   [1,0, 0,0, 0,0, 1,0]}},
    "demo": {"candidates": 20},
    "solver": {"seed": 11, "restarts": 6, "probe_count": 32}
  })";
  for (const Command command :
       {Command::kPayoffs, Command::kSweepEntropy, Command::kCounter,
        Command::kVerify, Command::kSearch, Command::kDemoTheorem}) {
    const ExperimentConfig first =
        ExperimentConfig::parse_string(config_text, "acceptance");
    const std::string once = run_to_text(command, first);
    const ExperimentConfig second =
        ExperimentConfig::parse_string(config_text, "acceptance");
    const std::string twice = run_to_text(command, second);
    ACC_CHECK(once == twice);
    ACC_CHECK(!once.empty());
  }
}

}  // namespace

int main() {
  std::printf("acceptance gate: elw-lab numerical engine\n");
  int failures = 0;

  failures += !run_criterion(
      1, "gate exponential matches a 20-term series oracle over 50 angles",
      criterion_gate);
  failures += !run_criterion(
      2, "maximal-entanglement residual and reduced densities at the extremes",
      criterion_max_entanglement);
  failures += !run_criterion(
      3, "partner pairs stabilize the entangled state and compose closed",
      criterion_stabilizers);
  failures += !run_criterion(
      4, "coset decomposition reconstructs pairs through a stabilizer factor",
      criterion_decomposition);
  failures += !run_criterion(
      5, "counterstrategies replicate outcomes; analytic response reaches 5",
      criterion_counterstrategies);
  failures += !run_criterion(
      6, "full-entanglement demonstration refutes all sampled candidates",
      criterion_demonstration);
  failures += !run_criterion(
      7, "zero-coupling search certifies mutual defection and refutes "
         "cooperation",
      criterion_classical_limit);
  failures += !run_criterion(
      8, "entropy endpoints, closed-form midpoint, and monotone growth",
      criterion_entropy);
  failures += !run_criterion(
      9, "identical seeds produce byte-identical reports for every command",
      criterion_determinism);

  if (failures == 0) {
    std::printf("all 9 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}

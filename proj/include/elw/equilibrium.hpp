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

// Best responses, pure-equilibrium verification, and constructive
// nonexistence witnesses.
//
// At maximal entanglement the responder holds an exact counterstrategy: it
// steers the joint outcome to any cell a deterministic strategy pair can
// reach, so the best response attains the responder's maximum payoff entry
// outright.  Away from maximal entanglement the solver falls back to
// multi-start gradient ascent over su(n) coordinates.  Every verdict this
// module emits is backed by a strategy the game engine can replay.

#ifndef ELW_EQUILIBRIUM_HPP_
#define ELW_EQUILIBRIUM_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "elw/game.hpp"
#include "elw/linalg.hpp"
#include "elw/stability.hpp"

namespace elw {

// Knobs for the numeric branch, probing, and search dynamics.  `threads`
// bounds worker threads in equilibrium_search (0 = hardware concurrency);
// results never depend on it.  `numeric_projection`, when set, restricts the
// numeric ascent to a strategy subset by projecting the su(n) coordinate
// vector after every accepted step.
struct SolverConfig {
  int restarts = 16;
  int max_iters = 500;
  double step_tol = 1e-9;
  double epsilon = 1e-6;  // equilibrium slack; must exceed step_tol
  int probe_count = 256;
  RandomSeed seed;
  int threads = 0;
  std::function<RealVector(const RealVector&)> numeric_projection;

  // Throws std::invalid_argument unless all counts are positive, tolerances
  // are positive, and epsilon > step_tol.
  void validate() const;
};

enum class ResponseMethod { kAnalyticCounterstrategy, kNumericAscent };

struct BestResponseResult {
  Unitary strategy;
  double value = 0.0;  // responder's expected payoff at `strategy`
  ResponseMethod method = ResponseMethod::kNumericAscent;
  int iterations = 0;      // ascent steps of the winning start (numeric)
  bool converged = false;  // winning start's last step fell below step_tol
  bool fell_back = false;  // analytic route unavailable; see best_response
};

enum class EquilibriumStatus {
  kCertifiedEpsilonEquilibrium,
  kRefuted,
  kInconclusive,
};

// A concrete profitable deviation: `side` switches to `strategy` and gains
// `gain` over the candidate payoff.  Gains are engine-replayed, never quoted
// from solver internals.
struct DeviationWitness {
  Subsystem side = Subsystem::B;
  Unitary strategy;
  double gain = 0.0;
};

struct EquilibriumReport {
  EquilibriumStatus status = EquilibriumStatus::kInconclusive;
  StrategyPair candidate;
  std::optional<DeviationWitness> witness;  // present whenever refuted
  int probes_used = 0;
  double epsilon = 0.0;
};

// A joint outcome cell together with deterministic-basis strategies that
// reach it with probability 1.
struct CellRealization {
  int i = 0;  // row player's outcome index
  int j = 0;  // column player's outcome index
  StrategyPair pair;
};

// Scans all n x n deterministic-basis strategy pairs and returns those whose
// final outcome distribution is a point mass (probability above
// 1 - kGainSlack on one cell), keyed by that cell.  For the two-strategy
// gate family every cell is realized at every entanglement level; other
// gates may realize only a subset.
std::vector<CellRealization> deterministic_cells(const GameInstance& game);

// exp(i * sum_k x(k) T_k) over the traceless Hermitian basis of su(n);
// special-unitary for every coordinate vector.
Unitary strategy_from_coords(int n, const RealVector& x);

// Principal-log coordinates of `u` in the same basis, with the global-phase
// component projected out (payoffs cannot see it).  Inverse of
// strategy_from_coords up to global phase.
RealVector coords_of_strategy(const Unitary& u);

// The responder's optimal reply to a fixed opponent strategy.
//
// If the initial state is maximally entangled with a symmetric coefficient
// matrix, the reply is built analytically: pick the responder's best payoff
// cell, realize it by a deterministic-basis target pair, and counter the
// opponent into that pair's outcome; the value then equals the responder's
// maximum payoff entry.  If that cell has no deterministic realization (or
// the coefficient matrix is unsuitable), the solver falls back to numeric
// ascent and sets `fell_back`.
//
// The numeric branch runs gradient ascent (central differences, step 1e-5,
// backtracking line search) from a fixed portfolio of starts: the identity,
// each deterministic-basis strategy, and four seeded Haar draws.
BestResponseResult best_response(const GameInstance& game, Subsystem side,
                                 const Unitary& opponent,
                                 const SolverConfig& cfg);

// Checks a candidate pair from both sides (B first, then A): a best-response
// gain above cfg.epsilon refutes it with a replayed witness; otherwise the
// candidate must also survive every deterministic-basis strategy and
// cfg.probe_count Haar-random probes per side to be certified.  When nothing
// refutes the candidate but a numeric best response failed to converge, the
// verdict is inconclusive rather than certified.
EquilibriumReport verify_equilibrium(const GameInstance& game,
                                     const StrategyPair& candidate,
                                     const SolverConfig& cfg);

// Constructive refutation at maximal entanglement: for each side (B first),
// steer to that side's best deterministically reachable cell and report the
// deviation if it gains more than kGainSlack.  Returns nothing when neither
// side can improve this way; when every cell is reachable that is exactly
// "both sides already sit at their maximum payoff entries".  Throws
// std::invalid_argument when the initial state is not maximally entangled
// with a symmetric coefficient matrix — use verify_equilibrium there.
std::optional<DeviationWitness> nonexistence_witness(
    const GameInstance& game, const StrategyPair& candidate);

// Alternating best-response dynamics from cfg.restarts Haar-random initial
// pairs.  Each run ends in one of three ways: a fixed point (handed to
// verify_equilibrium), a detected cycle (pair recurrence within 1e-6 in
// phase-insensitive operator distance), or the iteration cap; the latter two
// yield refuted reports whose witness is the last engine-verified improving
// deviation.  Runs may execute concurrently (see SolverConfig::threads); the
// returned list is always in restart order and depends only on (game, cfg).
std::vector<EquilibriumReport> equilibrium_search(const GameInstance& game,
                                                  const SolverConfig& cfg);

}  // namespace elw

#endif  // ELW_EQUILIBRIUM_HPP_

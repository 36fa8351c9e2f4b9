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

#include "elw/equilibrium.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <Eigen/Eigenvalues>

#include "elw/entangle.hpp"

namespace elw {

namespace {

// Substream namespaces so every random draw is keyed by purpose and index,
// never by evaluation order.
constexpr std::uint64_t kStreamAscentStart = 1;
constexpr std::uint64_t kStreamProbeB = 2;
constexpr std::uint64_t kStreamProbeA = 3;
constexpr std::uint64_t kStreamSearchInitA = 4;
constexpr std::uint64_t kStreamSearchInitB = 5;
constexpr std::uint64_t kStreamSearchRun = 6;

std::uint64_t stream_tag(std::uint64_t kind, std::uint64_t index) {
  return (kind << 32) | index;
}

double side_payoff(const std::pair<double, double>& both, Subsystem side) {
  return side == Subsystem::A ? both.first : both.second;
}

// Payoff of the responding side when it plays `strategy` against a fixed
// opponent on the other side.
double respond_payoff(const GameInstance& game, Subsystem side,
                      const Unitary& opponent, const Unitary& strategy) {
  if (side == Subsystem::A) {
    return expected_payoffs(game, strategy, opponent).first;
  }
  return expected_payoffs(game, opponent, strategy).second;
}

void check_opponent(const GameInstance& game, const Unitary& opponent,
                    const char* op) {
  if (opponent.dim() != game.n()) {
    std::ostringstream os;
    os << op << ": opponent dimension " << opponent.dim()
       << " does not match the game dimension " << game.n();
    throw std::invalid_argument(os.str());
  }
}

void check_candidate(const GameInstance& game, const StrategyPair& candidate,
                     const char* op) {
  if (candidate.dim() != game.n()) {
    std::ostringstream os;
    os << op << ": candidate dimension " << candidate.dim()
       << " does not match the game dimension " << game.n();
    throw std::invalid_argument(os.str());
  }
}

StrategyPair swapped(const StrategyPair& pair) {
  return StrategyPair{pair.bob, pair.alice};
}

// The counterstrategy constructor is written from side B's seat; side A's
// reply against a fixed Bob is the same construction on the swapped target
// (valid because the coefficient matrix is symmetric).
Unitary steering_reply(Subsystem side, const Unitary& opponent,
                       const StrategyPair& target, const CoeffMatrix& f) {
  if (side == Subsystem::B) return counterstrategy(opponent, target, f);
  return counterstrategy(opponent, swapped(target), f);
}

struct AscentOutcome {
  RealVector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Gradient ascent with central differences and a backtracking (Armijo) line
// search.  Converged means the accepted step shrank below cfg.step_tol (a
// rejected line search counts: the point is a numerical local maximum).
template <typename Objective>
AscentOutcome ascend(const Objective& f, RealVector x0,
                     const SolverConfig& cfg) {
  const auto project = [&cfg](RealVector x) {
    return cfg.numeric_projection ? cfg.numeric_projection(x) : std::move(x);
  };
  constexpr double kDiffStep = 1e-5;
  constexpr double kArmijoSlope = 1e-4;
  constexpr double kMinScale = 1e-12;

  AscentOutcome out;
  out.x = project(std::move(x0));
  out.value = f(out.x);
  RealVector grad(out.x.size());
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    out.iterations = iter + 1;
    RealVector probe = out.x;
    for (Eigen::Index k = 0; k < probe.size(); ++k) {
      const double saved = probe(k);
      probe(k) = saved + kDiffStep;
      const double up = f(probe);
      probe(k) = saved - kDiffStep;
      const double down = f(probe);
      probe(k) = saved;
      grad(k) = (up - down) / (2.0 * kDiffStep);
    }
    const double slope = grad.squaredNorm();
    double scale = 1.0;
    bool accepted = false;
    RealVector next;
    double next_value = out.value;
    while (scale >= kMinScale) {
      next = project(out.x + scale * grad);
      next_value = f(next);
      if (next_value >= out.value + kArmijoSlope * scale * slope) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    const double step_norm = (next - out.x).norm();
    out.x = std::move(next);
    out.value = next_value;
    if (step_norm < cfg.step_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

EquilibriumReport make_refuted(StrategyPair candidate, DeviationWitness witness,
                               double epsilon, int probes_used) {
  EquilibriumReport report;
  report.status = EquilibriumStatus::kRefuted;
  report.candidate = std::move(candidate);
  report.witness = std::move(witness);
  report.probes_used = probes_used;
  report.epsilon = epsilon;
  return report;
}

// Frobenius-optimal phase alignment, then max-norm distance: payoffs cannot
// distinguish strategies that differ by a global phase, so the search cannot
// either.
double phase_insensitive_distance(const Matrix& u, const Matrix& v) {
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 1e-12
                            ? overlap / std::abs(overlap)
                            : Complex(1.0, 0.0);
  return max_abs_diff(u, phase * v);
}

double pair_distance(const StrategyPair& a, const StrategyPair& b) {
  return std::max(phase_insensitive_distance(a.alice.matrix(), b.alice.matrix()),
                  phase_insensitive_distance(a.bob.matrix(), b.bob.matrix()));
}

}  // namespace

void SolverConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("solver: restarts must be >= 1");
  if (max_iters < 1) {
    throw std::invalid_argument("solver: max_iters must be >= 1");
  }
  if (!(step_tol > 0.0)) {
    throw std::invalid_argument("solver: step tolerance must be > 0");
  }
  if (!(epsilon > step_tol)) {
    throw std::invalid_argument(
        "solver: epsilon must exceed the step tolerance");
  }
  if (probe_count < 1) {
    throw std::invalid_argument("solver: probe_count must be >= 1");
  }
  if (threads < 0) throw std::invalid_argument("solver: threads must be >= 0");
}

std::vector<CellRealization> deterministic_cells(const GameInstance& game) {
  const int n = game.n();
  std::vector<CellRealization> out;
  std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Unitary ua = classical_strategy(n, a);
      const Unitary ub = classical_strategy(n, b);
      const auto dist = outcome_distribution(final_state(game, ua, ub));
      Eigen::Index i = 0;
      Eigen::Index j = 0;
      const double top = dist.probs.maxCoeff(&i, &j);
      const std::size_t flat = static_cast<std::size_t>(i) * n + j;
      if (top >= 1.0 - kGainSlack && !seen[flat]) {
        seen[flat] = true;
        out.push_back(CellRealization{static_cast<int>(i), static_cast<int>(j),
                                      StrategyPair{ua, ub}});
      }
    }
  }
  return out;
}

Unitary strategy_from_coords(int n, const RealVector& x) {
  const auto basis = traceless_hermitian_basis(n);
  if (x.size() != static_cast<Eigen::Index>(basis.size())) {
    std::ostringstream os;
    os << "strategy_from_coords: expected " << basis.size()
       << " coordinates for n = " << n << ", got " << x.size();
    throw std::invalid_argument(os.str());
  }
  Matrix h = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    h += x(static_cast<Eigen::Index>(k)) * basis[k];
  }
  return unitary_from_hermitian(h, 1.0);
}

RealVector coords_of_strategy(const Unitary& u) {
  const int n = u.dim();
  Eigen::ComplexSchur<Matrix> schur(u.matrix());
  if (schur.info() != Eigen::Success) {
    throw std::runtime_error("coords_of_strategy: Schur decomposition failed");
  }
  // A unitary matrix is normal, so the Schur form is diagonal and the
  // principal logarithm is Q diag(arg lambda_k) Q^dagger.
  Vector args(n);
  for (int k = 0; k < n; ++k) {
    args(k) = std::arg(schur.matrixT()(k, k));
  }
  Matrix h = schur.matrixU() * args.asDiagonal() *
             schur.matrixU().adjoint();
  h = 0.5 * (h + Matrix(h.adjoint()));  // symmetrize roundoff
  h -= (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);

  const auto basis = traceless_hermitian_basis(n);
  RealVector x(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    x(static_cast<Eigen::Index>(k)) = 0.5 * (basis[k] * h).trace().real();
  }
  return x;
}

BestResponseResult best_response(const GameInstance& game, Subsystem side,
                                 const Unitary& opponent,
                                 const SolverConfig& cfg) {
  cfg.validate();
  check_opponent(game, opponent, "best_response");
  const int n = game.n();
  const RealMatrix& table =
      side == Subsystem::A ? game.payoffs.alice : game.payoffs.bob;

  BestResponseResult result;

  const StateVector psi = initial_state(game);
  const CoeffMatrix f = CoeffMatrix::of_state(psi);
  if (f.is_maximally_entangled() && f.is_symmetric()) {
    // Analytic route: steer the outcome to the responder's best cell.
    const double best = table.maxCoeff();
    const auto cells = deterministic_cells(game);
    const CellRealization* chosen = nullptr;
    for (const auto& cell : cells) {
      if (table(cell.i, cell.j) >= best) {
        chosen = &cell;
        break;
      }
    }
    if (chosen != nullptr) {
      result.strategy = steering_reply(side, opponent, chosen->pair, f);
      result.value = respond_payoff(game, side, opponent, result.strategy);
      result.method = ResponseMethod::kAnalyticCounterstrategy;
      result.converged = true;
      if (result.value > game.payoffs.max_entry(side) + kGainSlack) {
        throw std::runtime_error(
            "best_response: value exceeds the payoff-table maximum");
      }
      return result;
    }
    result.fell_back = true;  // best cell has no deterministic realization
  } else if (f.is_maximally_entangled()) {
    result.fell_back = true;  // asymmetric coefficient matrix: no steering
  }

  // Numeric route: multi-start ascent over su(n) coordinates.  The start
  // portfolio is the identity, every deterministic-basis strategy, and four
  // seeded Haar draws.
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n - 1;
  std::vector<RealVector> starts;
  starts.push_back(RealVector::Zero(dim));
  for (int k = 1; k < n; ++k) {
    starts.push_back(coords_of_strategy(classical_strategy(n, k)));
  }
  for (std::uint64_t s = 0; s < 4; ++s) {
    starts.push_back(coords_of_strategy(haar_random_special_unitary(
        n, derive_seed(cfg.seed, stream_tag(kStreamAscentStart, s)))));
  }

  const auto objective = [&](const RealVector& x) {
    return respond_payoff(game, side, opponent, strategy_from_coords(n, x));
  };
  AscentOutcome winner;
  bool have_winner = false;
  for (auto& start : starts) {
    AscentOutcome outcome = ascend(objective, std::move(start), cfg);
    if (!have_winner || outcome.value > winner.value) {
      winner = std::move(outcome);
      have_winner = true;
    }
  }
  result.strategy = strategy_from_coords(n, winner.x);
  result.value = winner.value;
  result.method = ResponseMethod::kNumericAscent;
  result.iterations = winner.iterations;
  result.converged = winner.converged;
  if (result.value > game.payoffs.max_entry(side) + kGainSlack) {
    throw std::runtime_error(
        "best_response: value exceeds the payoff-table maximum");
  }
  return result;
}

EquilibriumReport verify_equilibrium(const GameInstance& game,
                                     const StrategyPair& candidate,
                                     const SolverConfig& cfg) {
  cfg.validate();
  check_candidate(game, candidate, "verify_equilibrium");
  const int n = game.n();
  const auto current = expected_payoffs(game, candidate.alice, candidate.bob);

  EquilibriumReport report;
  report.candidate = candidate;
  report.epsilon = cfg.epsilon;

  const Subsystem order[2] = {Subsystem::B, Subsystem::A};
  const auto opponent_of = [&](Subsystem side) -> const Unitary& {
    return side == Subsystem::B ? candidate.alice : candidate.bob;
  };

  // Best responses first; they carry the strongest witnesses.
  bool numeric_trustworthy = true;
  for (const Subsystem side : order) {
    const BestResponseResult br =
        best_response(game, side, opponent_of(side), cfg);
    const double gain = br.value - side_payoff(current, side);
    if (gain > cfg.epsilon) {
      return make_refuted(candidate, DeviationWitness{side, br.strategy, gain},
                          cfg.epsilon, report.probes_used);
    }
    if (br.method == ResponseMethod::kNumericAscent && !br.converged) {
      numeric_trustworthy = false;
    }
  }

  // Probe sweep: deterministic-basis strategies plus seeded Haar draws.
  for (const Subsystem side : order) {
    const std::uint64_t stream =
        side == Subsystem::B ? kStreamProbeB : kStreamProbeA;
    const double base = side_payoff(current, side);
    for (int k = 0; k < n; ++k) {
      const Unitary probe = classical_strategy(n, k);
      ++report.probes_used;
      const double gain =
          respond_payoff(game, side, opponent_of(side), probe) - base;
      if (gain > cfg.epsilon) {
        return make_refuted(candidate, DeviationWitness{side, probe, gain},
                            cfg.epsilon, report.probes_used);
      }
    }
    for (int p = 0; p < cfg.probe_count; ++p) {
      const Unitary probe = haar_random_special_unitary(
          n, derive_seed(cfg.seed,
                         stream_tag(stream, static_cast<std::uint64_t>(p))));
      ++report.probes_used;
      const double gain =
          respond_payoff(game, side, opponent_of(side), probe) - base;
      if (gain > cfg.epsilon) {
        return make_refuted(candidate, DeviationWitness{side, probe, gain},
                            cfg.epsilon, report.probes_used);
      }
    }
  }

  report.status = numeric_trustworthy
                      ? EquilibriumStatus::kCertifiedEpsilonEquilibrium
                      : EquilibriumStatus::kInconclusive;
  return report;
}

std::optional<DeviationWitness> nonexistence_witness(
    const GameInstance& game, const StrategyPair& candidate) {
  check_candidate(game, candidate, "nonexistence_witness");
  const StateVector psi = initial_state(game);
  const CoeffMatrix f = CoeffMatrix::of_state(psi);
  if (!f.is_maximally_entangled() || !f.is_symmetric()) {
    throw std::invalid_argument(
        "nonexistence_witness: initial state is not maximally entangled with "
        "a symmetric coefficient matrix, so no steering construction exists; "
        "use verify_equilibrium instead");
  }
  const auto current = expected_payoffs(game, candidate.alice, candidate.bob);
  const auto cells = deterministic_cells(game);

  const Subsystem order[2] = {Subsystem::B, Subsystem::A};
  for (const Subsystem side : order) {
    const RealMatrix& table =
        side == Subsystem::A ? game.payoffs.alice : game.payoffs.bob;
    const CellRealization* best = nullptr;
    for (const auto& cell : cells) {
      if (best == nullptr || table(cell.i, cell.j) > table(best->i, best->j)) {
        best = &cell;
      }
    }
    // (I, I) deterministically reaches some cell, so `cells` is never empty.
    const double bound = table(best->i, best->j) - side_payoff(current, side);
    if (bound <= kGainSlack) continue;
    const Unitary& opponent =
        side == Subsystem::B ? candidate.alice : candidate.bob;
    const Unitary reply = steering_reply(side, opponent, best->pair, f);
    const double gain =
        respond_payoff(game, side, opponent, reply) - side_payoff(current, side);
    if (gain > kGainSlack) {
      return DeviationWitness{side, reply, gain};
    }
  }
  return std::nullopt;
}

std::vector<EquilibriumReport> equilibrium_search(const GameInstance& game,
                                                  const SolverConfig& cfg) {
  cfg.validate();
  const int n = game.n();

  const auto run_one = [&](int restart) -> EquilibriumReport {
    const std::uint64_t r = static_cast<std::uint64_t>(restart);
    StrategyPair pair{
        haar_random_special_unitary(
            n, derive_seed(cfg.seed, stream_tag(kStreamSearchInitA, r))),
        haar_random_special_unitary(
            n, derive_seed(cfg.seed, stream_tag(kStreamSearchInitB, r)))};
    SolverConfig sub = cfg;
    sub.threads = 1;
    const RandomSeed run_seed =
        derive_seed(cfg.seed, stream_tag(kStreamSearchRun, r));

    struct LastImprovement {
      StrategyPair from;
      DeviationWitness witness;
    };
    std::optional<LastImprovement> last;
    std::vector<StrategyPair> history;
    history.push_back(pair);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      bool improved = false;
      for (const Subsystem side : {Subsystem::B, Subsystem::A}) {
        sub.seed = derive_seed(
            run_seed, (static_cast<std::uint64_t>(iter) << 1) |
                          (side == Subsystem::A ? 1u : 0u));
        const Unitary& opponent =
            side == Subsystem::B ? pair.alice : pair.bob;
        const double base = side_payoff(
            expected_payoffs(game, pair.alice, pair.bob), side);
        const BestResponseResult br =
            best_response(game, side, opponent, sub);
        const double gain = br.value - base;
        if (gain > cfg.epsilon) {
          last = LastImprovement{pair, DeviationWitness{side, br.strategy, gain}};
          if (side == Subsystem::B) {
            pair = StrategyPair{pair.alice, br.strategy};
          } else {
            pair = StrategyPair{br.strategy, pair.bob};
          }
          improved = true;
        }
      }
      if (!improved) {
        sub.seed = run_seed;
        return verify_equilibrium(game, pair, sub);
      }
      for (const StrategyPair& prev : history) {
        if (pair_distance(pair, prev) < 1e-6) {
          // Best-response cycle: the dynamics keep improving without
          // settling, so the point it departed from is refuted.
          return make_refuted(last->from, last->witness, cfg.epsilon, 0);
        }
      }
      history.push_back(pair);
    }
    return make_refuted(last->from, last->witness, cfg.epsilon, 0);
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const int threads = std::min(
      cfg.restarts, cfg.threads > 0 ? cfg.threads : static_cast<int>(hw));

  std::vector<std::optional<EquilibriumReport>> slots(
      static_cast<std::size_t>(cfg.restarts));
  if (threads <= 1) {
    for (int r = 0; r < cfg.restarts; ++r) slots[r] = run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(
        static_cast<std::size_t>(cfg.restarts));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < cfg.restarts;
             r = next.fetch_add(1)) {
          try {
            slots[static_cast<std::size_t>(r)] = run_one(r);
          } catch (...) {
            errors[static_cast<std::size_t>(r)] = std::current_exception();
          }
        }
      });
    }
    for (auto& worker : pool) worker.join();
    for (const auto& error : errors) {
      if (error) std::rethrow_exception(error);
    }
  }

  std::vector<EquilibriumReport> reports;
  reports.reserve(slots.size());
  for (auto& slot : slots) reports.push_back(std::move(*slot));
  return reports;
}

}  // namespace elw

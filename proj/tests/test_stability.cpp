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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "elw/entangle.hpp"
#include "elw/game.hpp"
#include "elw/linalg.hpp"
#include "elw/stability.hpp"

using namespace elw;

namespace {

constexpr double kPi = std::numbers::pi;

GameInstance gamma_game(double gamma) {
  return GameInstance::create(PayoffBimatrix::prisoners_dilemma(),
                              build_gate(GammaGateSpec{gamma}));
}

GameInstance preset_game(int n) {
  RealMatrix zero = RealMatrix::Zero(n, n);
  return GameInstance::create(PayoffBimatrix::create(zero, zero, false),
                              build_gate(max_entangled_gate(n)));
}

CoeffMatrix coeff_of(const GameInstance& game) {
  return CoeffMatrix::of_state(initial_state(game));
}

}  // namespace

TEST_SUITE_BEGIN("stability");

TEST_CASE("strategy pairs validate dimensions and specialness") {
  CHECK_THROWS_AS(
      StrategyPair::create(Unitary::identity(2), Unitary::identity(3)),
      std::invalid_argument);
  Matrix phase = Matrix::Identity(2, 2);
  phase(1, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(
      StrategyPair::create(Unitary::checked(phase), Unitary::identity(2)),
      std::invalid_argument);

  StrategyPair p =
      StrategyPair::create(Unitary::identity(2), Unitary::identity(2));
  CHECK(p.dim() == 2);
}

TEST_CASE("compose multiplies componentwise") {
  Rng rng(RandomSeed{11});
  Unitary a1 = haar_random_special_unitary(2, rng);
  Unitary b1 = haar_random_special_unitary(2, rng);
  Unitary a2 = haar_random_special_unitary(2, rng);
  Unitary b2 = haar_random_special_unitary(2, rng);
  StrategyPair prod = compose(StrategyPair::create(a1, b1),
                              StrategyPair::create(a2, b2));
  CHECK(max_abs_diff(prod.alice.matrix(), a1.matrix() * a2.matrix()) <= 1e-12);
  CHECK(max_abs_diff(prod.bob.matrix(), b1.matrix() * b2.matrix()) <= 1e-12);
}

TEST_CASE("partner pairs fix the maximally entangled state") {
  struct Setup {
    GameInstance game;
    int samples;
  };
  for (const auto& [game, samples] :
       {Setup{gamma_game(kPi / 2), 200}, Setup{preset_game(3), 50}}) {
    CoeffMatrix f = coeff_of(game);
    StateVector psi = initial_state(game);
    Rng rng(RandomSeed{909});
    for (int i = 0; i < samples; ++i) {
      Unitary u = haar_random_special_unitary(f.dim(), rng);
      Unitary partner = stabilizer_partner(u, f);
      StabilizerCheck check =
          is_stabilizer(StrategyPair::create(u, partner), psi, 1e-10);
      CHECK(check.stabilizes);
      CHECK(check.residual <= 1e-10);
    }
  }
}

TEST_CASE("the stabilizer family is closed under composition") {
  for (GameInstance game : {gamma_game(kPi / 2), preset_game(3)}) {
    CoeffMatrix f = coeff_of(game);
    StateVector psi = initial_state(game);
    Rng rng(RandomSeed{910});
    for (int i = 0; i < 50; ++i) {
      Unitary u1 = haar_random_special_unitary(f.dim(), rng);
      Unitary u2 = haar_random_special_unitary(f.dim(), rng);
      StrategyPair p1 =
          StrategyPair::create(u1, stabilizer_partner(u1, f));
      StrategyPair p2 =
          StrategyPair::create(u2, stabilizer_partner(u2, f));
      StabilizerCheck check = is_stabilizer(compose(p1, p2), psi, 1e-10);
      CHECK(check.stabilizes);
      // The partner map is multiplicative, so the composed second component
      // is itself the partner of u1 u2.
      Unitary u12 = project_special(u1.matrix() * u2.matrix());
      CHECK(max_abs_diff(compose(p1, p2).bob.matrix(),
                         stabilizer_partner(u12, f).matrix()) <= 1e-10);
    }
  }
}

TEST_CASE("mirroring a strategy is not enough to stabilize") {
  // At gamma = pi/2 the partner involves conjugation twisted by diag(1, i);
  // the naive pair (u, u) generically moves the state.
  GameInstance game = gamma_game(kPi / 2);
  StateVector psi = initial_state(game);
  Unitary u = haar_random_special_unitary(2, RandomSeed{4242});
  StabilizerCheck check =
      is_stabilizer(StrategyPair::create(u, u), psi, 1e-10);
  CHECK_FALSE(check.stabilizes);
  CHECK(check.residual > 0.1);
}

TEST_CASE("stabilization is judged up to a global phase") {
  GameInstance game = gamma_game(kPi / 2);
  CoeffMatrix f = coeff_of(game);
  StateVector psi = initial_state(game);
  Unitary u = haar_random_special_unitary(2, RandomSeed{31});
  // Negating one member keeps det = 1 at n = 2 and moves psi to -psi: the
  // optimal-phase residual must still vanish.
  Unitary negated = Unitary::checked(-u.matrix(), true);
  StabilizerCheck check = is_stabilizer(
      StrategyPair::create(negated, stabilizer_partner(u, f)), psi, 1e-10);
  CHECK(check.stabilizes);
  CHECK(check.residual <= 1e-10);
}

TEST_CASE("counterstrategies replicate the target outcome exactly") {
  struct Setup {
    GameInstance game;
    int samples;
  };
  for (const auto& [game, samples] :
       {Setup{gamma_game(kPi / 2), 200}, Setup{preset_game(3), 50}}) {
    CoeffMatrix f = coeff_of(game);
    Rng rng(RandomSeed{911});
    for (int i = 0; i < samples; ++i) {
      int n = f.dim();
      Unitary v = haar_random_special_unitary(n, rng);
      StrategyPair target =
          StrategyPair::create(haar_random_special_unitary(n, rng),
                               haar_random_special_unitary(n, rng));
      Unitary w = counterstrategy(v, target, f);

      StateVector achieved = final_state(game, v, w);
      StateVector wanted = final_state(game, target.alice, target.bob);
      CHECK((achieved.amplitudes - wanted.amplitudes).cwiseAbs().maxCoeff() <=
            1e-12);

      OutcomeDistribution da = outcome_distribution(achieved);
      OutcomeDistribution dw = outcome_distribution(wanted);
      CHECK((da.probs - dw.probs).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("decomposition reconstructs the pair through a stabilizer factor") {
  for (GameInstance game : {gamma_game(kPi / 2), preset_game(3)}) {
    CoeffMatrix f = coeff_of(game);
    StateVector psi = initial_state(game);
    Rng rng(RandomSeed{912});
    for (int i = 0; i < 50; ++i) {
      int n = f.dim();
      StrategyPair pair =
          StrategyPair::create(haar_random_special_unitary(n, rng),
                               haar_random_special_unitary(n, rng));
      Unitary v = haar_random_special_unitary(n, rng);
      CosetDecomposition d = decompose(pair, v, f);

      CHECK(max_abs_diff(d.rep_pair.alice.matrix(), v.matrix()) <= 1e-12);
      StrategyPair product = compose(d.rep_pair, d.stab_pair);
      CHECK(max_abs_diff(product.alice.matrix(), pair.alice.matrix()) <= 1e-12);
      CHECK(max_abs_diff(product.bob.matrix(), pair.bob.matrix()) <= 1e-12);

      StabilizerCheck check = is_stabilizer(d.stab_pair, psi, 1e-10);
      CHECK(check.stabilizes);
    }
  }
}

TEST_CASE("the machinery rejects unusable coefficient matrices") {
  // Not maximally entangled: the gamma = 0 product state.
  CoeffMatrix product = coeff_of(gamma_game(0.0));
  Unitary u = haar_random_special_unitary(2, RandomSeed{5});
  CHECK_THROWS_AS(stabilizer_partner(u, product), std::invalid_argument);

  // Maximally entangled but not symmetric: amplitudes (0, 1, i, 0)/sqrt(2).
  Vector amps = Vector::Zero(4);
  amps(1) = Complex(1.0 / std::sqrt(2.0), 0.0);
  amps(2) = Complex(0.0, 1.0 / std::sqrt(2.0));
  CoeffMatrix skew = CoeffMatrix::of_state(StateVector::create(2, amps));
  CHECK(skew.is_maximally_entangled());
  CHECK_FALSE(skew.is_symmetric());
  CHECK_THROWS_AS(stabilizer_partner(u, skew), std::invalid_argument);
  StrategyPair pair = StrategyPair::create(u, u);
  CHECK_THROWS_AS(counterstrategy(u, pair, skew), std::invalid_argument);
  CHECK_THROWS_AS(decompose(pair, u, skew), std::invalid_argument);
}

TEST_CASE("dimension mismatches are rejected") {
  CoeffMatrix f = coeff_of(gamma_game(kPi / 2));
  Unitary u3 = Unitary::identity(3);
  CHECK_THROWS_AS(stabilizer_partner(u3, f), std::invalid_argument);
  StrategyPair p3 = StrategyPair::create(u3, u3);
  CHECK_THROWS_AS(counterstrategy(u3, p3, f), std::invalid_argument);
}

TEST_SUITE_END();

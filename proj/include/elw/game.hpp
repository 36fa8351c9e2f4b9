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

#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "elw/linalg.hpp"

// The quantized two-player game: payoff bimatrix, entangling gate, initial
// and final states, outcome probabilities, expected payoffs.
//
// The row player is Alice and the column player is Bob. The game runs on the
// n^2-dimensional product space with the flat-index convention of linalg.hpp;
// both players start from |C> = e_0.

namespace elw {

/// Two n x n real payoff tables, row index = Alice's outcome, column = Bob's.
struct PayoffBimatrix {
  int n = 0;
  RealMatrix alice;
  RealMatrix bob;
  bool symmetric_game = false;

  static PayoffBimatrix create(RealMatrix alice, RealMatrix bob,
                               bool symmetric_game = false);

  // r,s,t,p payoff tables: alice = [[r,s],[t,p]], bob = [[r,t],[s,p]].
  static PayoffBimatrix from_rstp(double r, double s, double t, double p);

  // The shipped default, preset name "pd-3-0-5-1": (r,s,t,p) = (3,0,5,1),
  // which satisfies the dilemma ordering t > r > p > s.
  static PayoffBimatrix prisoners_dilemma();

  double max_entry(Subsystem side) const;
};

// The two-strategy entangling gate family J(gamma) = exp(-i gamma/2 s2 (x) s2)
// with gamma in [0, pi/2].
struct GammaGateSpec {
  double gamma = 0.0;
};

// General-n family: J = exp(i sum_{a<=b} gamma_ab sym(d_a (x) d_b)) over the
// diagonal traceless generators d_1..d_{n-1}, with sym(X (x) Y) =
// (X (x) Y + Y (x) X)/2. Takes exactly n(n-1)/2 parameters, ordered by the
// lexicographic pair index (a,b), a <= b.
struct CartanGateSpec {
  int n = 0;
  std::vector<double> params;
};

// Any explicit n^2 x n^2 unitary, validated on construction of the gate.
struct ExplicitGateSpec {
  Matrix matrix;
};

using GateSpec = std::variant<GammaGateSpec, CartanGateSpec, ExplicitGateSpec>;

// The explicit gate sending |CC> to the uniform diagonal ket
// (1/sqrt(n)) sum_k |e_k e_k>, completed deterministically by the Householder
// reflection through span(e_0 - target). Its initial state is maximally
// entangled with unit-scaled coefficients for every n.
GateSpec max_entangled_gate(int n);

// The sigma_2 Pauli matrix [[0, -i], [i, 0]] used by the two-strategy gate.
const Matrix& pauli_sigma2();

/// A realized gate operator: the n^2 x n^2 unitary J.
struct GateOperator {
  int n = 0;
  Unitary j;
};

GateOperator build_gate(const GateSpec& spec);

struct GameInstance {
  PayoffBimatrix payoffs;
  GateOperator gate;

  int n() const { return payoffs.n; }

  static GameInstance create(PayoffBimatrix payoffs, GateOperator gate);
};

/// A normalized state of the product space, amplitudes at flat index i*n + j.
struct StateVector {
  int n = 0;
  Vector amplitudes;

  static StateVector create(int n, Vector amplitudes);
};

/// Joint outcome probabilities P(i, j) = |<e_i e_j|psi>|^2.
struct OutcomeDistribution {
  int n = 0;
  RealMatrix probs;
};

// |psi_i> = J (|C> (x) |C>), i.e. column 0 of J.
StateVector initial_state(const GameInstance& game);

// |psi_f> = J+ (U_A (x) U_B) J (|C> (x) |C>). Strategies must be special
// unitaries of dimension n.
StateVector final_state(const GameInstance& game, const Unitary& alice,
                        const Unitary& bob);

// Squared moduli of the amplitudes; negative roundoff is clamped to zero and
// the total is renormalized. Throws if the total drifts from 1 by more than
// kStateNormTol.
OutcomeDistribution outcome_distribution(const StateVector& psi);

// (sum alice(i,j) P(i,j), sum bob(i,j) P(i,j)).
std::pair<double, double> expected_payoffs(const OutcomeDistribution& dist,
                                           const PayoffBimatrix& payoffs);

std::pair<double, double> expected_payoffs(const GameInstance& game,
                                           const Unitary& alice,
                                           const Unitary& bob);

// The deterministic classical-strategy family. For n = 2 this is exactly
// {I, i*sigma_2}; for larger n, strategy k is the cyclic basis shift by k
// rotated into SU(n) by a global phase. classical_strategy(n, 0) is always
// the identity.
Unitary classical_strategy(int n, int k);

}  // namespace elw

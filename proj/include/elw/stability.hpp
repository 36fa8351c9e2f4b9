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

// Stability-subgroup machinery for maximally entangled initial states.
//
// When the initial state's scaled coefficient matrix G = sqrt(n) * C is
// unitary and symmetric, the strategy pairs (U, G * conj(U) * G^dagger) leave
// the state invariant up to phase.  This lets one player cancel the other:
// given the opponent's strategy V and any target pair (U1, U2), the
// counterstrategy W = U2 * G * U1^T * conj(V) * G^dagger makes (V, W)
// reproduce the target pair's outcome distribution exactly.  Every pair then
// factors as (coset representative) * (stabilizer element).
//
// All constructions here are exact identities; determinants are re-phased
// into SU(n) only to absorb floating-point drift.

#ifndef ELW_STABILITY_HPP_
#define ELW_STABILITY_HPP_

#include "elw/entangle.hpp"
#include "elw/game.hpp"
#include "elw/linalg.hpp"

namespace elw {

// A pure strategy profile: one special unitary per player, equal dimensions.
struct StrategyPair {
  Unitary alice;
  Unitary bob;

  // Validates matching dimensions and special-unitarity of both entries.
  static StrategyPair create(Unitary alice, Unitary bob);

  int dim() const { return alice.dim(); }
};

// Componentwise product (a.alice * b.alice, a.bob * b.bob).
StrategyPair compose(const StrategyPair& a, const StrategyPair& b);

// The partner that completes `u` into a pair stabilizing the state behind
// `f`: returns G * conj(u) * G^dagger for G = f.scaled().  Requires f
// maximally entangled (G unitary) and symmetric; throws
// std::invalid_argument otherwise.
Unitary stabilizer_partner(const Unitary& u, const CoeffMatrix& f);

// The strategy W such that (v, W) reproduces the outcome distribution of
// `target` exactly: W = target.bob * G * target.alice^T * conj(v) *
// G^dagger.  Same preconditions as stabilizer_partner.
Unitary counterstrategy(const Unitary& v, const StrategyPair& target,
                        const CoeffMatrix& f);

// A strategy pair split into a coset representative whose first component is
// the prescribed v, times a stabilizer element.
struct CosetDecomposition {
  StrategyPair rep_pair;   // (v, counterstrategy(v, pair, f))
  StrategyPair stab_pair;  // stabilizes the state behind f
};

// Factors `pair` through the prescribed first component `v`:
//   pair = rep_pair o stab_pair  (componentwise product)
// with rep_pair = (v, counterstrategy(v, pair, f)) and
// stab_pair = (v^dagger * pair.alice, its stabilizer partner).
// Verifies both factorization identities before returning and throws
// std::runtime_error if either fails beyond kProductTol-level tolerances.
CosetDecomposition decompose(const StrategyPair& pair, const Unitary& v,
                             const CoeffMatrix& f);

// Outcome of an invariance test on a concrete state.
struct StabilizerCheck {
  bool stabilizes = false;
  double residual = 0.0;  // ||(uA (x) uB) psi - e^{i phi} psi||, optimal phi
};

// Whether `pair` leaves `psi` invariant up to a global phase: the phase is
// read off <psi|(uA (x) uB)|psi> and the residual is the remaining 2-norm
// distance.  True iff residual <= tol.
StabilizerCheck is_stabilizer(const StrategyPair& pair, const StateVector& psi,
                              double tol);

}  // namespace elw

#endif  // ELW_STABILITY_HPP_

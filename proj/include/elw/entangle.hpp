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

// Entanglement diagnostics for bipartite pure states of two n-level systems.
//
// A state |psi> = sum_{ij} c_ij |e_i>|e_j> is summarized by its coefficient
// matrix C with C(i, j) = amplitude at flat index i*n + j.  The state is
// maximally entangled exactly when sqrt(n) * C is unitary, equivalently when
// both reduced density matrices equal I/n; the entanglement entropy derives
// from the spectrum of either reduction.

#ifndef ELW_ENTANGLE_HPP_
#define ELW_ENTANGLE_HPP_

#include "elw/game.hpp"
#include "elw/linalg.hpp"
#include "elw/tolerances.hpp"

namespace elw {

// Coefficient matrix of a bipartite pure state, with its scaled companion
// sqrt(n) * C and the symmetry / maximal-entanglement flags computed once at
// construction.  Frobenius norm of C is 1 (it equals the state norm).
class CoeffMatrix {
 public:
  // Reshapes a normalized state on C^n (x) C^n into its n x n coefficient
  // matrix.  Throws std::invalid_argument if the state is malformed.
  static CoeffMatrix of_state(const StateVector& psi);

  int dim() const { return n_; }

  // The raw coefficient matrix C (Frobenius norm 1).
  const Matrix& coeffs() const { return c_; }

  // sqrt(n) * C; unitary exactly when the state is maximally entangled.
  const Matrix& scaled() const { return scaled_; }

  // Max-norm distance of C from its own transpose.
  double symmetry_residual() const { return symmetry_residual_; }

  // True when C equals its transpose within kSymmetryTol.
  bool is_symmetric() const { return symmetry_residual_ <= kSymmetryTol; }

  // Max-norm of n * C * C^dagger - I; zero exactly for maximally entangled
  // states.
  double max_entanglement_residual() const { return max_ent_residual_; }

  // True when the residual above is within kMaxEntTol.
  bool is_maximally_entangled() const {
    return max_ent_residual_ <= kMaxEntTol;
  }

 private:
  CoeffMatrix(int n, Matrix c);

  int n_ = 0;
  Matrix c_;
  Matrix scaled_;
  double symmetry_residual_ = 0.0;
  double max_ent_residual_ = 0.0;
};

// Result of the maximal-entanglement test.  The reduced density matrices are
// computed by tracing out the full projector |psi><psi| — a route independent
// of the coefficient-matrix residual — and `cross_check_residual` records how
// far the two routes disagree about the reductions.
struct EntanglementDiagnostic {
  bool maximally_entangled = false;
  double residual = 0.0;              // ||n C C^dagger - I||_max
  double cross_check_residual = 0.0;  // partial-trace route vs. C-route
  Matrix rho_a;                       // reduction onto side A
  Matrix rho_b;                       // reduction onto side B
};

// Full diagnostic: true iff ||n C C^dagger - I||_max <= tol, with both
// reduced density matrices attached.  Throws std::invalid_argument for
// tol <= 0 and std::runtime_error if the two reduction routes disagree
// beyond kTraceTol (an internal-consistency failure).
EntanglementDiagnostic diagnose_entanglement(const StateVector& psi,
                                             double tol = kMaxEntTol);

// Convenience wrapper around diagnose_entanglement.
bool is_maximally_entangled(const StateVector& psi, double tol = kMaxEntTol);

// Inverse reshape: rebuilds the state whose coefficient matrix is `c`.
// Round-trips exactly with CoeffMatrix::of_state.
StateVector state_of(const CoeffMatrix& c);

// Projector |psi><psi| onto a pure state: Hermitian, trace 1, PSD.
Matrix density_of(const StateVector& psi);

// Reduced density matrix of one side of a bipartite pure state, computed
// directly from the coefficient matrix: rho_A = C C^dagger and
// rho_B = C^T conj(C).
Matrix reduced_density(const StateVector& psi, Subsystem keep);

// Von Neumann entropy -sum lambda_k ln lambda_k of either reduced density
// matrix (both sides share a spectrum for a pure state).  Natural log;
// eigenvalues below kEntropyEigenFloor contribute zero.  Range [0, ln n].
double entanglement_entropy(const StateVector& psi);

}  // namespace elw

#endif  // ELW_ENTANGLE_HPP_

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

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "elw/tolerances.hpp"

// Deterministic complex dense linear algebra: Kronecker products, matrix
// exponentials of Hermitian generators, Haar-random special unitaries, and
// partial traces.
//
// Basis convention (shared by every module): the product ket |e_i> (x) |e_j>
// lives at flat index i*n + j. |C> is e_0.

namespace elw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct RandomSeed {
  std::uint64_t value = 0;
};

// Deterministically derives an independent seed for the named substream.
// Depends only on (base, stream), so concurrent consumers drawing from their
// own derived seeds produce schedule-independent results.
RandomSeed derive_seed(RandomSeed base, std::uint64_t stream);

double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& m);

// ||M M+ - I||_max; infinity for non-square input.
double unitarity_residual(const Matrix& m);

/// A validated unitary matrix. Construction checks ||U U+ - I||_max against
/// kUnitaryTol and, when the special flag is requested, |det U - 1| against
/// kSpecialDetTol.
class Unitary {
 public:
  Unitary() = default;

  static Unitary checked(Matrix m, bool special = false);
  static Unitary identity(int n);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  bool is_special() const { return special_; }

  Unitary adjoint() const;

 private:
  Matrix m_;
  bool special_ = false;
};

// Kronecker product, entry ((i*b.rows+k),(j*b.cols+l)) = a(i,j)*b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// exp(i*scale*h) for Hermitian h, computed by eigendecomposition (exact for
// normal matrices; no truncated series). Throws if ||h - h+||_max exceeds
// kHermitianTol. The special flag of the result reflects the actual
// determinant.
Unitary unitary_from_hermitian(const Matrix& h, double scale);

// Rotates a unitary into SU(n) by an n-th-root global phase when its
// determinant has drifted from 1.
Unitary project_special(Matrix u);

/// Value-carrying deterministic random generator. Uniform and Gaussian
/// variates are derived from raw mt19937_64 output with fixed arithmetic
/// (no implementation-defined distribution adapters), so a seed pins the
/// exact sampling sequence.
class Rng {
 public:
  explicit Rng(RandomSeed seed);

  // Independent deterministic substream; depends only on the original seed
  // and the stream index, not on how much the parent has drawn.
  Rng fork(std::uint64_t stream) const;

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal, Box-Muller

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Haar-distributed on U(n) via QR of a complex Gaussian matrix with the
// R-diagonal phase correction, then rotated into SU(n) by a global n-th-root
// phase. Deterministic per seed.
Unitary haar_random_special_unitary(int n, Rng& rng);
Unitary haar_random_special_unitary(int n, RandomSeed seed);

enum class Subsystem { A, B };

// Traces the named subsystem out of an n^2 x n^2 density matrix and returns
// the n x n reduced density matrix of the other one. The input must be
// Hermitian with unit trace.
Matrix partial_trace(const Matrix& rho, Subsystem traced, int n);

// Orthogonal traceless Hermitian basis of su(n), tr(T_a T_b) = 2 delta_ab:
// the n(n-1)/2 symmetric and n(n-1)/2 antisymmetric off-diagonal generators
// followed by the n-1 diagonal ones.
std::vector<Matrix> traceless_hermitian_basis(int n);

// The diagonal generators alone: d_k = sqrt(2/(k(k+1))) diag(1,..,1,-k,0,..).
std::vector<Matrix> cartan_diagonal_basis(int n);

}  // namespace elw

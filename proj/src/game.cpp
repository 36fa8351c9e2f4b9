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

#include "elw/game.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace elw {

namespace {

[[noreturn]] void fail_invalid(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_table(const RealMatrix& t, int n, const char* name) {
  if (t.rows() != n || t.cols() != n) {
    std::ostringstream os;
    os << "payoffs: " << name << " table must be " << n << "x" << n;
    fail_invalid(os.str());
  }
  if (!t.allFinite()) fail_invalid("payoffs: table entries must be finite");
}

}  // namespace

PayoffBimatrix PayoffBimatrix::create(RealMatrix alice, RealMatrix bob,
                                      bool symmetric_game) {
  if (alice.rows() < 1) fail_invalid("payoffs: empty table");
  const int n = static_cast<int>(alice.rows());
  check_table(alice, n, "alice");
  check_table(bob, n, "bob");
  if (symmetric_game && (bob - alice.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    fail_invalid("payoffs: symmetric_game set but bob != transpose(alice)");
  }
  PayoffBimatrix p;
  p.n = n;
  p.alice = std::move(alice);
  p.bob = std::move(bob);
  p.symmetric_game = symmetric_game;
  return p;
}

PayoffBimatrix PayoffBimatrix::from_rstp(double r, double s, double t,
                                         double p) {
  RealMatrix alice(2, 2), bob(2, 2);
  alice << r, s, t, p;
  bob << r, t, s, p;
  return create(std::move(alice), std::move(bob), true);
}

PayoffBimatrix PayoffBimatrix::prisoners_dilemma() {
  return from_rstp(3.0, 0.0, 5.0, 1.0);
}

double PayoffBimatrix::max_entry(Subsystem side) const {
  return side == Subsystem::A ? alice.maxCoeff() : bob.maxCoeff();
}

const Matrix& pauli_sigma2() {
  static const Matrix s2 = [] {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
  }();
  return s2;
}

GateSpec max_entangled_gate(int n) {
  if (n < 2) fail_invalid("max_entangled_gate: n must be >= 2");
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  Vector target = Vector::Zero(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) target(static_cast<Eigen::Index>(k) * n + k) = amp;
  Vector v = -target;
  v(0) += 1.0;  // v = e_0 - target
  Matrix j = Matrix::Identity(dim, dim);
  const double vv = v.squaredNorm();
  if (vv > 0.0) j -= (2.0 / vv) * (v * v.adjoint());
  return ExplicitGateSpec{std::move(j)};
}

GateOperator build_gate(const GateSpec& spec) {
  if (const auto* g = std::get_if<GammaGateSpec>(&spec)) {
    if (!(g->gamma >= 0.0 && g->gamma <= std::numbers::pi / 2)) {
      fail_invalid("gate: gamma must lie in [0, pi/2]");
    }
    const Matrix generator = kron(pauli_sigma2(), pauli_sigma2());
    return GateOperator{2, unitary_from_hermitian(generator, -g->gamma / 2)};
  }
  if (const auto* c = std::get_if<CartanGateSpec>(&spec)) {
    const int n = c->n;
    if (n < 2) fail_invalid("gate: cartan spec needs n >= 2");
    const std::size_t expected =
        static_cast<std::size_t>(n) * (n - 1) / 2;
    if (c->params.size() != expected) {
      std::ostringstream os;
      os << "gate: cartan spec for n = " << n << " takes " << expected
         << " parameters, got " << c->params.size();
      fail_invalid(os.str());
    }
    const auto diag = cartan_diagonal_basis(n);
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
    Matrix generator = Matrix::Zero(dim, dim);
    std::size_t idx = 0;
    for (std::size_t a = 0; a < diag.size(); ++a) {
      for (std::size_t b = a; b < diag.size(); ++b) {
        const Matrix sym =
            0.5 * (kron(diag[a], diag[b]) + kron(diag[b], diag[a]));
        generator += c->params[idx++] * sym;
      }
    }
    return GateOperator{n, unitary_from_hermitian(generator, 1.0)};
  }
  const auto& e = std::get<ExplicitGateSpec>(spec);
  const Eigen::Index dim = e.matrix.rows();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (dim < 4 || static_cast<Eigen::Index>(n) * n != dim ||
      e.matrix.cols() != dim) {
    fail_invalid("gate: explicit matrix must be n^2 x n^2 with n >= 2");
  }
  return GateOperator{n, Unitary::checked(e.matrix)};
}

GameInstance GameInstance::create(PayoffBimatrix payoffs, GateOperator gate) {
  if (gate.n != payoffs.n) {
    fail_invalid("game: gate dimension does not match the payoff tables");
  }
  return GameInstance{std::move(payoffs), std::move(gate)};
}

StateVector StateVector::create(int n, Vector amplitudes) {
  if (n < 1 || amplitudes.size() != static_cast<Eigen::Index>(n) * n) {
    fail_invalid("state: amplitude vector must have length n^2");
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kStateNormTol) {
    std::ostringstream os;
    os << "state: norm " << norm << " is not 1 within " << kStateNormTol;
    fail_invalid(os.str());
  }
  return StateVector{n, std::move(amplitudes)};
}

StateVector initial_state(const GameInstance& game) {
  return StateVector::create(game.n(), game.gate.j.matrix().col(0));
}

namespace {

void check_strategy(const Unitary& u, int n, const char* who) {
  if (u.dim() != n) {
    std::ostringstream os;
    os << "strategy: " << who << " has dimension " << u.dim()
       << ", game needs " << n;
    fail_invalid(os.str());
  }
  const Complex det = u.matrix().determinant();
  if (std::abs(det - Complex(1.0, 0.0)) > kSpecialDetTol) {
    std::ostringstream os;
    os << "strategy: " << who << " is not special unitary (|det - 1| = "
       << std::abs(det - Complex(1.0, 0.0)) << ")";
    fail_invalid(os.str());
  }
}

}  // namespace

StateVector final_state(const GameInstance& game, const Unitary& alice,
                        const Unitary& bob) {
  check_strategy(alice, game.n(), "alice");
  check_strategy(bob, game.n(), "bob");
  const Matrix& j = game.gate.j.matrix();
  const Vector psi_i = j.col(0);
  const Vector moved = kron(alice.matrix(), bob.matrix()) * psi_i;
  return StateVector::create(game.n(), j.adjoint() * moved);
}

OutcomeDistribution outcome_distribution(const StateVector& psi) {
  const int n = psi.n;
  RealMatrix probs(n, n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double p = std::norm(psi.amplitudes(static_cast<Eigen::Index>(i) * n + j));
      if (p < 0.0) p = 0.0;  // roundoff guard
      probs(i, j) = p;
      total += p;
    }
  }
  if (std::abs(total - 1.0) > kStateNormTol) {
    std::ostringstream os;
    os << "outcome_distribution: total probability " << total
       << " drifted from 1 beyond " << kStateNormTol;
    throw std::runtime_error(os.str());
  }
  probs /= total;
  return OutcomeDistribution{n, std::move(probs)};
}

std::pair<double, double> expected_payoffs(const OutcomeDistribution& dist,
                                           const PayoffBimatrix& payoffs) {
  if (dist.n != payoffs.n) {
    fail_invalid("expected_payoffs: distribution and payoff dimensions differ");
  }
  return {payoffs.alice.cwiseProduct(dist.probs).sum(),
          payoffs.bob.cwiseProduct(dist.probs).sum()};
}

std::pair<double, double> expected_payoffs(const GameInstance& game,
                                           const Unitary& alice,
                                           const Unitary& bob) {
  return expected_payoffs(outcome_distribution(final_state(game, alice, bob)),
                          game.payoffs);
}

Unitary classical_strategy(int n, int k) {
  if (n < 2) fail_invalid("classical_strategy: n must be >= 2");
  if (k < 0 || k >= n) fail_invalid("classical_strategy: k must lie in [0, n)");
  if (k == 0) return Unitary::identity(n);
  if (n == 2) {
    return Unitary::checked(Complex(0.0, 1.0) * pauli_sigma2(), true);
  }
  Matrix shift = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) shift((m + k) % n, m) = 1.0;
  return project_special(std::move(shift));
}

}  // namespace elw

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

#include "elw/stability.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elw {

namespace {

void check_special(const Unitary& u, const char* who) {
  const Complex det = u.matrix().determinant();
  if (std::abs(det - Complex(1.0, 0.0)) > kSpecialDetTol) {
    std::ostringstream os;
    os << "strategy pair: " << who << " is not special unitary (|det - 1| = "
       << std::abs(det - Complex(1.0, 0.0)) << ")";
    throw std::invalid_argument(os.str());
  }
}

// The constructions below conjugate by the scaled coefficient matrix G and
// rely on G * conj(G) = I, which needs G both unitary and symmetric.
void check_usable(const CoeffMatrix& f, const char* op) {
  if (!f.is_maximally_entangled()) {
    std::ostringstream os;
    os << op
       << ": state is not maximally entangled (scaled coefficient matrix is "
          "not unitary; residual "
       << f.max_entanglement_residual() << ")";
    throw std::invalid_argument(os.str());
  }
  if (!f.is_symmetric()) {
    std::ostringstream os;
    os << op << ": coefficient matrix is not symmetric (residual "
       << f.symmetry_residual() << ")";
    throw std::invalid_argument(os.str());
  }
}

void check_dim(int have, int want, const char* op) {
  if (have != want) {
    std::ostringstream os;
    os << op << ": strategy dimension " << have
       << " does not match the state dimension " << want;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

StrategyPair StrategyPair::create(Unitary alice, Unitary bob) {
  if (alice.dim() != bob.dim()) {
    throw std::invalid_argument("strategy pair: dimensions differ");
  }
  check_special(alice, "alice");
  check_special(bob, "bob");
  return StrategyPair{std::move(alice), std::move(bob)};
}

StrategyPair compose(const StrategyPair& a, const StrategyPair& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("compose: pair dimensions differ");
  }
  return StrategyPair::create(
      project_special(a.alice.matrix() * b.alice.matrix()),
      project_special(a.bob.matrix() * b.bob.matrix()));
}

Unitary stabilizer_partner(const Unitary& u, const CoeffMatrix& f) {
  check_usable(f, "stabilizer_partner");
  check_dim(u.dim(), f.dim(), "stabilizer_partner");
  check_special(u, "u");
  const Matrix& g = f.scaled();
  return project_special(g * u.matrix().conjugate() * g.adjoint());
}

Unitary counterstrategy(const Unitary& v, const StrategyPair& target,
                        const CoeffMatrix& f) {
  check_usable(f, "counterstrategy");
  check_dim(v.dim(), f.dim(), "counterstrategy");
  check_dim(target.dim(), f.dim(), "counterstrategy");
  check_special(v, "v");
  const Matrix& g = f.scaled();
  return project_special(target.bob.matrix() * g *
                         target.alice.matrix().transpose() *
                         v.matrix().conjugate() * g.adjoint());
}

CosetDecomposition decompose(const StrategyPair& pair, const Unitary& v,
                             const CoeffMatrix& f) {
  check_usable(f, "decompose");
  check_dim(pair.dim(), f.dim(), "decompose");
  check_dim(v.dim(), f.dim(), "decompose");

  const Unitary stab_alice =
      project_special(v.adjoint().matrix() * pair.alice.matrix());
  CosetDecomposition result{
      StrategyPair::create(v, counterstrategy(v, pair, f)),
      StrategyPair::create(stab_alice, stabilizer_partner(stab_alice, f))};

  // Both factorization identities are exact up to roundoff; verify them so a
  // silent convention slip cannot escape this function.
  const StrategyPair product = compose(result.rep_pair, result.stab_pair);
  const double recon =
      std::max(max_abs_diff(product.alice.matrix(), pair.alice.matrix()),
               max_abs_diff(product.bob.matrix(), pair.bob.matrix()));
  if (recon > kUnitaryTol) {
    std::ostringstream os;
    os << "decompose: factor product misses the input by " << recon;
    throw std::runtime_error(os.str());
  }
  const auto check = is_stabilizer(result.stab_pair, state_of(f), kUnitaryTol);
  if (!check.stabilizes) {
    std::ostringstream os;
    os << "decompose: stabilizer factor moves the state by " << check.residual;
    throw std::runtime_error(os.str());
  }
  return result;
}

StabilizerCheck is_stabilizer(const StrategyPair& pair, const StateVector& psi,
                              double tol) {
  if (!(tol >= 0.0)) {
    throw std::invalid_argument("is_stabilizer: tol must be >= 0");
  }
  check_dim(pair.dim(), psi.n, "is_stabilizer");
  const Vector moved =
      kron(pair.alice.matrix(), pair.bob.matrix()) * psi.amplitudes;
  const Complex overlap = psi.amplitudes.dot(moved);
  const Complex phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
  StabilizerCheck check;
  check.residual = (moved - phase * psi.amplitudes).norm();
  check.stabilizes = check.residual <= tol;
  return check;
}

}  // namespace elw

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

#include "elw/entangle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace elw {

CoeffMatrix::CoeffMatrix(int n, Matrix c) : n_(n), c_(std::move(c)) {
  scaled_ = std::sqrt(static_cast<double>(n_)) * c_;
  symmetry_residual_ = max_abs_diff(c_, c_.transpose());
  max_ent_residual_ = max_abs_diff(
      static_cast<double>(n_) * (c_ * c_.adjoint()), Matrix::Identity(n_, n_));
}

CoeffMatrix CoeffMatrix::of_state(const StateVector& psi) {
  const int n = psi.n;
  if (n < 1 || psi.amplitudes.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("coeff_matrix: state has wrong length");
  }
  const double norm = psi.amplitudes.norm();
  if (std::abs(norm - 1.0) > kStateNormTol) {
    throw std::invalid_argument("coeff_matrix: state is not normalized");
  }
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      c(i, j) = psi.amplitudes(static_cast<Eigen::Index>(i) * n + j);
    }
  }
  return CoeffMatrix(n, std::move(c));
}

EntanglementDiagnostic diagnose_entanglement(const StateVector& psi,
                                             double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("diagnose_entanglement: tol must be > 0");
  }
  const auto c = CoeffMatrix::of_state(psi);
  EntanglementDiagnostic diag;
  diag.residual = c.max_entanglement_residual();
  diag.maximally_entangled = diag.residual <= tol;

  // Independent route: trace the full projector down to each side and compare
  // with the coefficient-matrix reductions C C^dagger and C^T conj(C).
  const Matrix rho = density_of(psi);
  diag.rho_a = partial_trace(rho, Subsystem::B, psi.n);
  diag.rho_b = partial_trace(rho, Subsystem::A, psi.n);
  const Matrix from_c_a = c.coeffs() * c.coeffs().adjoint();
  const Matrix from_c_b = c.coeffs().transpose() * c.coeffs().conjugate();
  diag.cross_check_residual = std::max(max_abs_diff(diag.rho_a, from_c_a),
                                       max_abs_diff(diag.rho_b, from_c_b));
  if (diag.cross_check_residual > kTraceTol) {
    std::ostringstream os;
    os << "diagnose_entanglement: reduction routes disagree by "
       << diag.cross_check_residual;
    throw std::runtime_error(os.str());
  }
  return diag;
}

bool is_maximally_entangled(const StateVector& psi, double tol) {
  return diagnose_entanglement(psi, tol).maximally_entangled;
}

StateVector state_of(const CoeffMatrix& c) {
  const int n = c.dim();
  Vector amplitudes(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      amplitudes(static_cast<Eigen::Index>(i) * n + j) = c.coeffs()(i, j);
    }
  }
  return StateVector::create(n, std::move(amplitudes));
}

Matrix density_of(const StateVector& psi) {
  if (psi.amplitudes.size() !=
      static_cast<Eigen::Index>(psi.n) * psi.n) {
    throw std::invalid_argument("density_of: state has wrong length");
  }
  return psi.amplitudes * psi.amplitudes.adjoint();
}

Matrix reduced_density(const StateVector& psi, Subsystem keep) {
  const auto c = CoeffMatrix::of_state(psi);
  if (keep == Subsystem::A) return c.coeffs() * c.coeffs().adjoint();
  return c.coeffs().transpose() * c.coeffs().conjugate();
}

double entanglement_entropy(const StateVector& psi) {
  const Matrix rho = reduced_density(psi, Subsystem::A);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error(
        "entanglement_entropy: eigen decomposition failed");
  }
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda > kEntropyEigenFloor) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

}  // namespace elw

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

#include "elw/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace elw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

[[noreturn]] void fail_invalid(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  return max_abs(a - b);
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

double unitarity_residual(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const Matrix gram = m * m.adjoint();
  return max_abs_diff(gram, Matrix::Identity(m.rows(), m.cols()));
}

Unitary Unitary::checked(Matrix m, bool special) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail_invalid("unitary: matrix must be square and nonempty");
  }
  if (!all_finite(m)) fail_invalid("unitary: entries must be finite");
  const double res = unitarity_residual(m);
  if (res > kUnitaryTol) {
    std::ostringstream os;
    os << "unitary: ||U U+ - I||_max = " << res << " exceeds " << kUnitaryTol;
    fail_invalid(os.str());
  }
  if (special) {
    const Complex det = m.determinant();
    if (std::abs(det - Complex(1.0, 0.0)) > kSpecialDetTol) {
      std::ostringstream os;
      os << "unitary: |det - 1| = " << std::abs(det - Complex(1.0, 0.0))
         << " exceeds " << kSpecialDetTol << " for a special unitary";
      fail_invalid(os.str());
    }
  }
  Unitary u;
  u.m_ = std::move(m);
  u.special_ = special;
  return u;
}

Unitary Unitary::identity(int n) {
  return checked(Matrix::Identity(n, n), true);
}

Unitary Unitary::adjoint() const {
  return checked(m_.adjoint(), special_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  constexpr Eigen::Index kMaxDim = 1 << 20;
  if (a.size() == 0 || b.size() == 0) {
    fail_invalid("kron: factors must be nonempty");
  }
  if (a.rows() > kMaxDim / b.rows() || a.cols() > kMaxDim / b.cols()) {
    fail_invalid("kron: result dimensions overflow the supported size");
  }
  return Eigen::kroneckerProduct(a, b);
}

Unitary unitary_from_hermitian(const Matrix& h, double scale) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    fail_invalid("unitary_from_hermitian: generator must be square");
  }
  const double herm = max_abs_diff(h, h.adjoint());
  if (herm > kHermitianTol) {
    std::ostringstream os;
    os << "unitary_from_hermitian: ||H - H+||_max = " << herm << " exceeds "
       << kHermitianTol;
    fail_invalid(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::Index n = h.rows();
  Vector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases(i) = std::exp(Complex(0.0, scale * es.eigenvalues()(i)));
  }
  Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  const bool special =
      std::abs(u.determinant() - Complex(1.0, 0.0)) <= kSpecialDetTol;
  return Unitary::checked(std::move(u), special);
}

Unitary project_special(Matrix u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    fail_invalid("project_special: matrix must be square");
  }
  const Complex det = u.determinant();
  if (std::abs(det) < 0.5) {
    fail_invalid("project_special: input is far from unitary");
  }
  const double drift = std::abs(det - Complex(1.0, 0.0));
  if (drift > 1e-13) {
    const double n = static_cast<double>(u.rows());
    u *= std::polar(1.0, -std::arg(det) / n);
  }
  return Unitary::checked(std::move(u), true);
}

RandomSeed derive_seed(RandomSeed base, std::uint64_t stream) {
  return RandomSeed{splitmix64(base.value ^ splitmix64(stream + 1))};
}

Rng::Rng(RandomSeed seed) : seed_(seed.value), gen_(seed.value) {}

Rng Rng::fork(std::uint64_t stream) const {
  return Rng(derive_seed(RandomSeed{seed_}, stream));
}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the log stays finite.
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

Unitary haar_random_special_unitary(int n, Rng& rng) {
  if (n < 2) fail_invalid("haar_random_special_unitary: n must be >= 2");
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  // Fix the phase ambiguity of QR so q is Haar on U(n).
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const Complex lambda = std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
    q.col(i) *= lambda;
  }
  return project_special(std::move(q));
}

Unitary haar_random_special_unitary(int n, RandomSeed seed) {
  Rng rng(seed);
  return haar_random_special_unitary(n, rng);
}

Matrix partial_trace(const Matrix& rho, Subsystem traced, int n) {
  if (n < 1) fail_invalid("partial_trace: n must be positive");
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  if (rho.rows() != rho.cols()) {
    fail_invalid("partial_trace: density matrix must be square");
  }
  if (rho.rows() != dim) {
    fail_invalid("partial_trace: dimension must be a perfect square n^2");
  }
  if (max_abs_diff(rho, rho.adjoint()) > kHermitianTol) {
    fail_invalid("partial_trace: density matrix must be Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kTraceTol) {
    fail_invalid("partial_trace: density matrix must have unit trace");
  }
  Matrix out = Matrix::Zero(n, n);
  if (traced == Subsystem::A) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        Complex s = 0.0;
        for (int i = 0; i < n; ++i) {
          s += rho(static_cast<Eigen::Index>(i) * n + j,
                   static_cast<Eigen::Index>(i) * n + l);
        }
        out(j, l) = s;
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        Complex s = 0.0;
        for (int j = 0; j < n; ++j) {
          s += rho(static_cast<Eigen::Index>(i) * n + j,
                   static_cast<Eigen::Index>(k) * n + j);
        }
        out(i, k) = s;
      }
    }
  }
  return out;
}

std::vector<Matrix> cartan_diagonal_basis(int n) {
  if (n < 2) fail_invalid("cartan_diagonal_basis: n must be >= 2");
  std::vector<Matrix> basis;
  basis.reserve(n - 1);
  for (int k = 1; k < n; ++k) {
    Matrix d = Matrix::Zero(n, n);
    const double norm = std::sqrt(2.0 / (static_cast<double>(k) * (k + 1)));
    for (int i = 0; i < k; ++i) d(i, i) = norm;
    d(k, k) = -norm * static_cast<double>(k);
    basis.push_back(std::move(d));
  }
  return basis;
}

std::vector<Matrix> traceless_hermitian_basis(int n) {
  if (n < 2) fail_invalid("traceless_hermitian_basis: n must be >= 2");
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Matrix x = Matrix::Zero(n, n);
      x(i, j) = 1.0;
      x(j, i) = 1.0;
      basis.push_back(std::move(x));
      Matrix y = Matrix::Zero(n, n);
      y(i, j) = Complex(0.0, -1.0);
      y(j, i) = Complex(0.0, 1.0);
      basis.push_back(std::move(y));
    }
  }
  for (auto& d : cartan_diagonal_basis(n)) basis.push_back(std::move(d));
  return basis;
}

}  // namespace elw

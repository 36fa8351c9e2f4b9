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

// All numerical tolerances used by the engine, in one place.

namespace elw {

// Construction-time unitarity check: ||U U+ - I||_max.
inline constexpr double kUnitaryTol = 1e-10;

// Freshly synthesized products of validated unitaries must stay within this.
inline constexpr double kProductTol = 1e-12;

// |det(U) - 1| for members of SU(n).
inline constexpr double kSpecialDetTol = 1e-8;

// ||H - H+||_max for Hermitian generators.
inline constexpr double kHermitianTol = 1e-10;

// |  ||psi||_2 - 1  | for state vectors.
inline constexpr double kStateNormTol = 1e-10;

// Trace and Hermiticity checks on density matrices.
inline constexpr double kTraceTol = 1e-10;

// Default residual bound for the maximal-entanglement criterion
// ||n F F+ - I||_max, and for the coefficient-symmetry flag.
inline constexpr double kMaxEntTol = 1e-8;
inline constexpr double kSymmetryTol = 1e-8;

// Reduced-density eigenvalues below this contribute zero entropy.
inline constexpr double kEntropyEigenFloor = 1e-14;

// Slack for "already at the maximum payoff entry" comparisons.
inline constexpr double kGainSlack = 1e-9;

}  // namespace elw

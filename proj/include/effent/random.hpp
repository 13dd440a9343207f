// Copyright 2026 The effent Authors
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

// Seeded random generators for states, unitaries and isometries. Every
// stochastic component in the library draws from an explicitly passed Rng.

#pragma once

#include <cstdint>
#include <random>

#include "effent/qcore.hpp"

namespace effent {

using Rng = std::mt19937_64;

inline ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

/// Haar-random isometry (orthonormal columns), rows >= cols.
inline ComplexMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (rows < cols) throw ValidationError("random_isometry: rows must be >= cols");
  const ComplexMatrix g = random_ginibre(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  // Fix the phase ambiguity of QR so the distribution is Haar.
  const ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  return random_isometry(n, n, rng);
}

inline PureState random_pure_state(const Dims& dims, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  return PureState::normalized(random_ginibre(n, 1, rng).col(0), dims);
}

/// Random density matrix of the given rank (Ginibre-induced measure).
inline DensityMatrix random_density_matrix(const Dims& dims, std::size_t rank, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  const ComplexMatrix g = random_ginibre(n, static_cast<Eigen::Index>(rank), rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = (rho + rho.adjoint()) / 2.0;
  return DensityMatrix(std::move(rho), dims);
}

inline DensityMatrix random_density_matrix(const Dims& dims, Rng& rng) {
  return random_density_matrix(dims, product(dims), rng);
}

/// Random Hermitian matrix with Gaussian entries.
inline ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace effent

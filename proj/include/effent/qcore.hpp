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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace effent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Default absolute tolerance for validity checks (hermiticity, positivity, trace).
inline constexpr double kDefaultTol = 1e-9;

/// Bad input: wrong dimensions, out-of-range parameters, invalid states.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation failed to meet its numerical contract (truncation, convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//------------------------------------------------------------------------------
// Small matrix helpers
//------------------------------------------------------------------------------

inline std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs(a - b) <= tol;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

/// Computational basis vector |i> in dimension d.
inline ComplexVector ket(std::size_t d, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

inline ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// exp(-i angle sigma_x / 2)
inline ComplexMatrix rotation_x(double angle) {
  ComplexMatrix m(2, 2);
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  m << c, Complex(0, -s), Complex(0, -s), c;
  return m;
}

/// exp(-i angle sigma_z / 2)
inline ComplexMatrix rotation_z(double angle) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -angle / 2);
  m(1, 1) = std::polar(1.0, angle / 2);
  return m;
}

//------------------------------------------------------------------------------
// Kronecker product and subsystem bookkeeping
//------------------------------------------------------------------------------

/// Kronecker product; the indices of `a` vary slowest.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

namespace detail {

// Splits a flat index into per-subsystem digits (first subsystem most significant).
inline void unflatten(std::size_t flat, const Dims& dims, std::vector<std::size_t>& digits) {
  digits.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = flat % dims[k];
    flat /= dims[k];
  }
}

inline void check_keep(const Dims& dims, const std::vector<std::size_t>& keep) {
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dims.size()) {
      throw ValidationError("partial_trace: subsystem index " + std::to_string(keep[i]) +
                            " out of range for " + std::to_string(dims.size()) + " subsystems");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw ValidationError("partial_trace: keep indices must be strictly increasing");
    }
  }
}

}  // namespace detail

/// Traces out every subsystem not listed in `keep` (strictly increasing indices).
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                                   const std::vector<std::size_t>& keep) {
  detail::check_keep(dims, keep);
  const std::size_t n = product(dims);
  if (static_cast<std::size_t>(m.rows()) != n || m.rows() != m.cols()) {
    throw ValidationError("partial_trace: matrix size does not match subsystem dimensions");
  }
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[k] = true;

  Dims keep_dims, traced_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? keep_dims : traced_dims).push_back(dims[k]);
  const std::size_t nk = product(keep_dims);
  const std::size_t nt = product(traced_dims);

  // Precompute the flat index for each (kept, traced) digit combination.
  std::vector<std::size_t> flat(nk * nt);
  std::vector<std::size_t> dk, dt;
  for (std::size_t a = 0; a < nk; ++a) {
    detail::unflatten(a, keep_dims, dk);
    for (std::size_t b = 0; b < nt; ++b) {
      detail::unflatten(b, traced_dims, dt);
      std::size_t idx = 0, ik = 0, it = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        idx = idx * dims[k] + (kept[k] ? dk[ik++] : dt[it++]);
      }
      flat[a * nt + b] = idx;
    }
  }

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(nk), static_cast<Eigen::Index>(nk));
  for (std::size_t a = 0; a < nk; ++a) {
    for (std::size_t c = 0; c < nk; ++c) {
      Complex acc = 0;
      for (std::size_t b = 0; b < nt; ++b) {
        acc += m(static_cast<Eigen::Index>(flat[a * nt + b]), static_cast<Eigen::Index>(flat[c * nt + b]));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

/// Partial transpose of the subsystems listed in `which`.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims,
                                       const std::vector<std::size_t>& which) {
  const std::size_t n = product(dims);
  if (static_cast<std::size_t>(m.rows()) != n || m.rows() != m.cols()) {
    throw ValidationError("partial_transpose: matrix size does not match subsystem dimensions");
  }
  std::vector<bool> flip(dims.size(), false);
  for (auto k : which) {
    if (k >= dims.size()) throw ValidationError("partial_transpose: subsystem index out of range");
    flip[k] = true;
  }
  ComplexMatrix out(m.rows(), m.cols());
  std::vector<std::size_t> di, dj;
  for (std::size_t i = 0; i < n; ++i) {
    detail::unflatten(i, dims, di);
    for (std::size_t j = 0; j < n; ++j) {
      detail::unflatten(j, dims, dj);
      std::size_t ii = 0, jj = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        const auto a = flip[k] ? dj[k] : di[k];
        const auto b = flip[k] ? di[k] : dj[k];
        ii = ii * dims[k] + a;
        jj = jj * dims[k] + b;
      }
      out(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

//------------------------------------------------------------------------------
// Spectral helpers
//------------------------------------------------------------------------------

struct Eigensystem {
  RealVector values;      // descending
  ComplexMatrix vectors;  // column k belongs to values(k)
};

inline Eigensystem eig_hermitian(const ComplexMatrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) throw ValidationError("eig_hermitian: matrix is not square");
  if (!is_hermitian(m, tol)) throw ValidationError("eig_hermitian: matrix is not Hermitian");
  const ComplexMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: eigensolver failed");
  const Eigen::Index n = m.rows();
  Eigensystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Applies f to the spectrum of a Hermitian matrix.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((m + m.adjoint()) / 2.0);
  const auto& v = solver.eigenvectors();
  RealVector mapped = solver.eigenvalues().unaryExpr(f);
  return v * mapped.cast<Complex>().asDiagonal() * v.adjoint();
}

inline bool is_psd(const ComplexMatrix& m, double tol = kDefaultTol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol;
}

//------------------------------------------------------------------------------
// States
//------------------------------------------------------------------------------

class PureState {
 public:
  PureState(ComplexVector amplitudes, Dims dims, double tol = kDefaultTol)
      : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (product(dims_) != static_cast<std::size_t>(amplitudes_.size())) {
      throw ValidationError("PureState: amplitude count does not match subsystem dimensions");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > tol) {
      throw ValidationError("PureState: amplitudes are not normalized");
    }
  }

  /// Normalizes the given vector before validating it.
  static PureState normalized(const ComplexVector& v, Dims dims) {
    const double n = v.norm();
    if (n == 0.0) throw ValidationError("PureState: zero vector");
    return PureState(v / n, std::move(dims));
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  ComplexMatrix projector() const { return effent::projector(amplitudes_); }

 private:
  ComplexVector amplitudes_;
  Dims dims_;
};

class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix m, Dims dims, double tol = kDefaultTol)
      : matrix_(std::move(m)), dims_(std::move(dims)) {
    if (matrix_.rows() != matrix_.cols()) throw ValidationError("DensityMatrix: matrix is not square");
    if (product(dims_) != static_cast<std::size_t>(matrix_.rows())) {
      throw ValidationError("DensityMatrix: dims product " + std::to_string(product(dims_)) +
                            " does not match matrix dimension " + std::to_string(matrix_.rows()));
    }
    if (!is_hermitian(matrix_, tol)) throw ValidationError("DensityMatrix: matrix is not Hermitian");
    if (std::abs(matrix_.trace() - Complex(1.0)) > tol) {
      throw ValidationError("DensityMatrix: trace is not 1");
    }
    if (min_eigenvalue(matrix_) < -tol) throw ValidationError("DensityMatrix: matrix is not positive semidefinite");
  }

  DensityMatrix(const PureState& psi)  // NOLINT(google-explicit-constructor)
      : matrix_(psi.projector()), dims_(psi.dims()) {}

  static DensityMatrix maximally_mixed(Dims dims) {
    const auto n = product(dims);
    return DensityMatrix(identity(n) / static_cast<double>(n), std::move(dims));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  double purity() const { return (matrix_ * matrix_).trace().real(); }
  bool is_pure(double tol = kDefaultTol) const { return std::abs(purity() - 1.0) <= tol; }

  /// Dominant eigenvector; exact state when is_pure().
  PureState principal_state() const {
    const auto es = eig_hermitian(matrix_);
    return PureState::normalized(es.vectors.col(0), dims_);
  }

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(tensor(a.matrix(), b.matrix()), std::move(dims));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  Dims kept;
  detail::check_keep(rho.dims(), keep);
  for (auto k : keep) kept.push_back(rho.dims()[k]);
  return DensityMatrix(partial_trace(rho.matrix(), rho.dims(), keep), std::move(kept));
}

/// (1/sqrt(d)) sum_k |kk>
inline PureState max_entangled(std::size_t d) {
  if (d < 2) throw ValidationError("max_entangled: dimension must be at least 2");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k * d + k)) = a;
  return PureState(std::move(v), {d, d});
}

/// A(i, j) = <i j | psi>.
inline ComplexMatrix coefficient_matrix(const PureState& psi, std::size_t dA, std::size_t dB) {
  if (dA * dB != psi.dim()) throw ValidationError("coefficient_matrix: dA * dB does not match amplitude count");
  ComplexMatrix a(static_cast<Eigen::Index>(dA), static_cast<Eigen::Index>(dB));
  for (std::size_t i = 0; i < dA; ++i) {
    for (std::size_t j = 0; j < dB; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          psi.amplitudes()(static_cast<Eigen::Index>(i * dB + j));
    }
  }
  return a;
}

/// Inverse of coefficient_matrix (row-major flattening).
inline ComplexVector flatten(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  }
  return v;
}

inline double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ValidationError("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((rho - sigma + (rho - sigma).adjoint()) / 2.0,
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

}  // namespace effent

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

// G-concurrence for pure states, the two-qubit closed form for mixed states,
// and a numerical convex-roof minimizer for the general mixed case.

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "effent/qcore.hpp"
#include "effent/random.hpp"

namespace effent {

//------------------------------------------------------------------------------
// Pure states
//------------------------------------------------------------------------------

namespace detail {

// d * (prod_k s_k^2)^(1/d) over the d = min(rows, cols) singular values.
inline double g_concurrence_from_singular_values(const RealVector& s) {
  const auto d = static_cast<double>(s.size());
  double log_sum = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) <= 0.0) return 0.0;
    log_sum += 2.0 * std::log(s(k));
  }
  return std::clamp(d * std::exp(log_sum / d), 0.0, 1.0);
}

}  // namespace detail

/// d (det A^dagger A)^(1/d) for the coefficient matrix A, with d = min(dA, dB).
inline double g_concurrence_pure(const PureState& psi, std::size_t dA, std::size_t dB) {
  const ComplexMatrix a = coefficient_matrix(psi, dA, dB);
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return detail::g_concurrence_from_singular_values(svd.singularValues());
}

inline double g_concurrence_pure(const PureState& psi) {
  if (psi.dims().size() != 2) throw ValidationError("g_concurrence_pure: state must be bipartite");
  return g_concurrence_pure(psi, psi.dims()[0], psi.dims()[1]);
}

//------------------------------------------------------------------------------
// Two qubits
//------------------------------------------------------------------------------

namespace detail {
inline void require_two_qubits(const DensityMatrix& rho, const char* who) {
  if (rho.dims() != Dims{2, 2}) throw ValidationError(std::string(who) + ": state must have dims [2, 2]");
}
}  // namespace detail

/// Wootters concurrence max(0, l1 - l2 - l3 - l4).
///
/// The l_k are the square roots of the eigenvalues of rho (Y (x) Y) rho* (Y (x) Y).
/// Writing rho = W W^dagger, they equal the singular values of W^T (Y (x) Y) W,
/// which avoids square roots of eigensolver noise on rank-deficient states.
inline double concurrence_wootters(const DensityMatrix& rho) {
  detail::require_two_qubits(rho, "concurrence_wootters");
  const auto es = eig_hermitian(rho.matrix());
  ComplexMatrix w(4, 4);
  for (Eigen::Index k = 0; k < 4; ++k) w.col(k) = es.vectors.col(k) * std::sqrt(std::max(es.values(k), 0.0));
  const ComplexMatrix yy = tensor(pauli_y(), pauli_y());
  const ComplexMatrix tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<ComplexMatrix> svd(tau);
  const RealVector& l = svd.singularValues();
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

inline double binary_entropy(double p) {
  auto term = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log2(x); };
  return term(p) + term(1.0 - p);
}

/// h((1 + sqrt(1 - C^2)) / 2) with C the Wootters concurrence.
inline double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

inline double entanglement_of_formation_2q(const DensityMatrix& rho) {
  return eof_from_concurrence(concurrence_wootters(rho));
}

//------------------------------------------------------------------------------
// Convex roof
//------------------------------------------------------------------------------

struct RoofOptions {
  int restarts = 16;
  int max_iters = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int terms = 0;  // decomposition length m; 0 selects 2 * rank

  void validate() const {
    if (restarts < 1) throw ValidationError("roof options: restarts must be >= 1");
    if (max_iters < 1) throw ValidationError("roof options: max_iters must be >= 1");
    if (!(tol > 0.0)) throw ValidationError("roof options: tol must be positive");
    if (terms < 0) throw ValidationError("roof options: terms must be >= 0");
  }
};

struct RoofResult {
  double value = 0;
  std::string method;           // "pure" or "roof"
  int iters = 0;                // total descent iterations over all restarts
  int best_restart = 0;
  std::vector<double> history;  // best objective seen, one entry per iteration
};

namespace detail {

// Decompositions of rho = sum_j lambda_j |e_j><e_j| are parametrized by an
// m x r isometry V: |psi~_i> = sum_j V_ij sqrt(lambda_j) |e_j>. The weighted
// term p_i G(psi_i) equals d * det(A~_i^dagger A~_i)^(1/d) for the unnormalized
// coefficient matrix A~_i, so the objective is a sum of homogeneous terms.
class RoofObjective {
 public:
  RoofObjective(std::vector<ComplexMatrix> basis, std::size_t d) : basis_(std::move(basis)), d_(static_cast<double>(d)) {}

  std::size_t rank() const { return basis_.size(); }

  // Smoothed objective sum_i d (h_i + eps^2)^power; power 1/d with eps = 0 is
  // the exact value. Other powers share its zero set and serve as surrogates.
  double value(const ComplexMatrix& v, double eps, double power = 0) const {
    if (power == 0) power = 1.0 / d_;
    double total = 0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const ComplexMatrix a = term(v, i);
      Eigen::JacobiSVD<ComplexMatrix> svd(a);
      total += d_ * std::pow(gram_det(svd.singularValues()) + eps * eps, power);
    }
    return total;
  }

  // Euclidean gradient (real inner product Re tr(X^dagger Y)) of the smoothed objective.
  ComplexMatrix gradient(const ComplexMatrix& v, double eps, double power = 0) const {
    if (power == 0) power = 1.0 / d_;
    ComplexMatrix g = ComplexMatrix::Zero(v.rows(), v.cols());
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const ComplexMatrix a = term(v, i);
      Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const RealVector& s = svd.singularValues();
      const double h = gram_det(s);
      const double scale = d_ * power * std::pow(h + eps * eps, power - 1.0);
      // d h / d conj(A) = sum_k s_k prod_{l != k} s_l^2 u_k w_k^dagger
      RealVector coeff(s.size());
      for (Eigen::Index k = 0; k < s.size(); ++k) {
        double c = s(k);
        for (Eigen::Index l = 0; l < s.size(); ++l) {
          if (l != k) c *= s(l) * s(l);
        }
        coeff(k) = c;
      }
      const ComplexMatrix dh =
          svd.matrixU() * coeff.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
      for (std::size_t j = 0; j < basis_.size(); ++j) {
        const Complex inner = (basis_[j].adjoint() * dh).trace();
        g(i, static_cast<Eigen::Index>(j)) = 2.0 * scale * inner;
      }
    }
    return g;
  }

 private:
  ComplexMatrix term(const ComplexMatrix& v, Eigen::Index i) const {
    ComplexMatrix a = ComplexMatrix::Zero(basis_.front().rows(), basis_.front().cols());
    for (std::size_t j = 0; j < basis_.size(); ++j) a += v(i, static_cast<Eigen::Index>(j)) * basis_[j];
    return a;
  }

  static double gram_det(const RealVector& s) {
    double h = 1;
    for (Eigen::Index k = 0; k < s.size(); ++k) h *= s(k) * s(k);
    return h;
  }

  std::vector<ComplexMatrix> basis_;
  double d_;
};

// Polar retraction onto the Stiefel manifold.
inline ComplexMatrix retract(const ComplexMatrix& y) {
  Eigen::JacobiSVD<ComplexMatrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline ComplexMatrix tangent_projection(const ComplexMatrix& v, const ComplexMatrix& x) {
  const ComplexMatrix vx = v.adjoint() * x;
  return x - v * ((vx + vx.adjoint()) / 2.0);
}

inline ComplexMatrix riemannian_gradient(const ComplexMatrix& v, const ComplexMatrix& g) {
  return tangent_projection(v, g);
}

inline double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace detail

/// Upper bound on the convex-roof G-concurrence of rho on d x d.
///
/// Random-restart Armijo descent over decomposition isometries, with a
/// smoothing continuation for the non-differentiable zero set. Restart 0 starts
/// from the eigendecomposition; the rest from Haar isometries drawn from `seed`.
inline RoofResult g_concurrence_mixed(const DensityMatrix& rho, std::size_t d, const RoofOptions& opts = {}) {
  opts.validate();
  if (d < 2 || rho.dim() != d * d) {
    throw ValidationError("g_concurrence_mixed: state dimension " + std::to_string(rho.dim()) +
                          " is not d*d for d = " + std::to_string(d));
  }
  const auto es = eig_hermitian(rho.matrix());
  const double cutoff = 1e-14;
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) <= cutoff) break;
    const auto psi = PureState::normalized(es.vectors.col(k), {d, d});
    basis.push_back(std::sqrt(es.values(k)) * coefficient_matrix(psi, d, d));
  }
  RoofResult result;
  if (basis.size() == 1) {
    result.method = "pure";
    result.value = g_concurrence_pure(rho.principal_state(), d, d);
    result.history = {result.value};
    return result;
  }
  result.method = "roof";

  const auto r = static_cast<Eigen::Index>(basis.size());
  Eigen::Index m = opts.terms > 0 ? opts.terms : 2 * r;
  m = std::clamp<Eigen::Index>(m, r, 2 * r * r);
  const detail::RoofObjective objective(std::move(basis), d);

  // Stage 0 minimizes sum_i h_i, which is smooth and shares the zero set of the
  // true objective; later stages anneal the smoothing of sum_i d h_i^(1/d).
  struct Stage {
    double power;
    double eps;
  };
  const double exact_power = 1.0 / static_cast<double>(d);
  const std::vector<Stage> stages = {
      {1.0, 0.0}, {exact_power, 1e-3}, {exact_power, 1e-5}, {exact_power, 1e-7}, {exact_power, 1e-9}};
  const int per_stage = std::max(1, opts.max_iters / static_cast<int>(stages.size()));

  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < opts.restarts; ++restart) {
    ComplexMatrix v = restart == 0 ? ComplexMatrix(ComplexMatrix::Identity(m, r)) : random_isometry(m, r, rng);
    int used = 0;
    auto record = [&](const ComplexMatrix& x) {
      const double exact = objective.value(x, 0.0);
      if (exact < best) {
        best = exact;
        result.best_restart = restart;
      }
      result.history.push_back(best);
    };
    record(v);
    for (std::size_t k = 0; k < stages.size() && used < opts.max_iters; ++k) {
      const auto [power, eps] = stages[k];
      const int budget = k + 1 == stages.size() ? opts.max_iters - used : per_stage;
      double step = 0.1;
      double f = objective.value(v, eps, power);
      ComplexMatrix grad_prev, dir;
      for (int it = 0; it < budget; ++it) {
        const ComplexMatrix grad = detail::riemannian_gradient(v, objective.gradient(v, eps, power));
        const double gnorm2 = grad.squaredNorm();
        if (gnorm2 == 0.0) break;
        // Polak-Ribiere+ conjugate direction, transported by tangent projection.
        if (it == 0) {
          dir = -grad;
        } else {
          const ComplexMatrix prev_t = detail::tangent_projection(v, grad_prev);
          const ComplexMatrix dir_t = detail::tangent_projection(v, dir);
          const double beta = std::max(0.0, detail::real_inner(grad, grad - prev_t) / grad_prev.squaredNorm());
          dir = -grad + beta * dir_t;
          if (detail::real_inner(grad, dir) >= 0.0) dir = -grad;
        }
        const double slope = -detail::real_inner(grad, dir);
        bool accepted = false;
        ComplexMatrix candidate;
        double fc = f;
        for (int halving = 0; halving < 40; ++halving) {
          candidate = detail::retract(v + step * dir);
          fc = objective.value(candidate, eps, power);
          if (fc <= f - 1e-4 * step * slope) {
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        ++used;
        if (!accepted) break;
        const double decrease = f - fc;
        v = std::move(candidate);
        f = fc;
        grad_prev = grad;
        step = std::min(step * 2.0, 10.0);
        record(v);
        if (decrease < opts.tol * std::max(f, 1e-3)) break;
      }
    }
    result.iters += used;
  }
  result.value = std::clamp(best, 0.0, 1.0);
  return result;
}

}  // namespace effent

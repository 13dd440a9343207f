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

// Completely positive maps in Kraus form, their Heisenberg-picture adjoints,
// Choi states, and the stock noise channels.

#pragma once

#include <set>
#include <vector>

#include "effent/qcore.hpp"
#include "effent/random.hpp"

namespace effent {

class KrausChannel {
 public:
  /// Validates shapes, and trace preservation when `cptp` is set.
  KrausChannel(std::vector<ComplexMatrix> kraus, bool cptp = true, double tol = kDefaultTol)
      : kraus_(std::move(kraus)), cptp_(cptp) {
    if (kraus_.empty()) throw ValidationError("KrausChannel: no Kraus operators");
    d_out_ = static_cast<std::size_t>(kraus_.front().rows());
    d_in_ = static_cast<std::size_t>(kraus_.front().cols());
    for (const auto& k : kraus_) {
      if (static_cast<std::size_t>(k.rows()) != d_out_ || static_cast<std::size_t>(k.cols()) != d_in_) {
        throw ValidationError("KrausChannel: Kraus operators have inconsistent dimensions");
      }
    }
    if (cptp_ && completeness_defect() > tol) {
      throw ValidationError("KrausChannel: sum of K^dagger K differs from identity (channel is not trace preserving)");
    }
  }

  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  bool cptp() const { return cptp_; }
  bool is_square() const { return d_in_ == d_out_; }

  /// max-norm distance of sum_j K_j^dagger K_j from the identity.
  double completeness_defect() const {
    ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_in_), static_cast<Eigen::Index>(d_in_));
    for (const auto& k : kraus_) s += k.adjoint() * k;
    return max_abs(s - identity(d_in_));
  }

  /// True iff every Kraus operator is proportional to the identity.
  bool is_identity_map(double tol = kDefaultTol) const {
    if (!is_square()) return false;
    double weight = 0;
    for (const auto& k : kraus_) {
      const Complex c = k(0, 0);
      if (max_abs(k - c * identity(d_in_)) > tol) return false;
      weight += std::norm(c);
    }
    return std::abs(weight - 1.0) <= tol;
  }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t d_in_ = 0;
  std::size_t d_out_ = 0;
  bool cptp_ = true;
};

/// A finite POVM: PSD elements summing to the identity on a declared composite space.
class PovmSet {
 public:
  PovmSet(std::vector<ComplexMatrix> elements, Dims space_dims, double tol = kDefaultTol)
      : elements_(std::move(elements)), space_dims_(std::move(space_dims)) {
    if (elements_.empty()) throw ValidationError("PovmSet: no elements");
    const auto d = product(space_dims_);
    ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& e : elements_) {
      if (static_cast<std::size_t>(e.rows()) != d || e.rows() != e.cols()) {
        throw ValidationError("PovmSet: element dimension does not match space dims");
      }
      if (!is_hermitian(e, tol)) throw ValidationError("PovmSet: element is not Hermitian");
      if (const double m = min_eigenvalue(e); m < -tol) {
        throw ValidationError("PovmSet: element is not positive semidefinite (min eigenvalue " + std::to_string(m) + ")");
      }
      sum += e;
    }
    if (max_abs(sum - identity(d)) > tol) throw ValidationError("PovmSet: elements do not sum to the identity");
  }

  /// The one-outcome POVM {I}.
  static PovmSet trivial(Dims space_dims) {
    const auto d = product(space_dims);
    return PovmSet({identity(d)}, std::move(space_dims));
  }

  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const Dims& space_dims() const { return space_dims_; }
  std::size_t dim() const { return product(space_dims_); }
  std::size_t size() const { return elements_.size(); }
  const ComplexMatrix& operator[](std::size_t k) const { return elements_[k]; }

 private:
  std::vector<ComplexMatrix> elements_;
  Dims space_dims_;
};

//------------------------------------------------------------------------------
// Application
//------------------------------------------------------------------------------

/// Schrodinger picture: sum_j K_j rho K_j^dagger.
inline ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (static_cast<std::size_t>(rho.rows()) != ch.d_in() || rho.rows() != rho.cols()) {
    throw ValidationError("apply: input dimension " + std::to_string(rho.rows()) +
                          " does not match channel d_in " + std::to_string(ch.d_in()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(ch.d_out()), static_cast<Eigen::Index>(ch.d_out()));
  for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

inline DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (!ch.cptp()) throw ValidationError("apply: a density-matrix result requires a CPTP channel");
  ComplexMatrix out = effent::apply(ch, rho.matrix());
  out = (out + out.adjoint()) / 2.0;
  return DensityMatrix(std::move(out), ch.is_square() ? rho.dims() : Dims{ch.d_out()});
}

/// Heisenberg picture: sum_j K_j^dagger P K_j.
inline ComplexMatrix adjoint_apply(const KrausChannel& ch, const ComplexMatrix& p) {
  if (static_cast<std::size_t>(p.rows()) != ch.d_out() || p.rows() != p.cols()) {
    throw ValidationError("adjoint_apply: operator dimension " + std::to_string(p.rows()) +
                          " does not match channel d_out " + std::to_string(ch.d_out()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(ch.d_in()), static_cast<Eigen::Index>(ch.d_in()));
  for (const auto& k : ch.kraus()) out.noalias() += k.adjoint() * p * k;
  return out;
}

inline PovmSet adjoint_apply(const KrausChannel& ch, const PovmSet& povm) {
  if (!ch.cptp()) throw ValidationError("adjoint_apply: POVM images require a CPTP (unital adjoint) channel");
  std::vector<ComplexMatrix> out;
  out.reserve(povm.size());
  for (const auto& e : povm.elements()) out.push_back(adjoint_apply(ch, e));
  return PovmSet(std::move(out), ch.is_square() ? povm.space_dims() : Dims{ch.d_in()});
}

/// Kraus set {K_i (x) L_j}.
inline KrausChannel tensor_channels(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& k : a.kraus()) {
    for (const auto& l : b.kraus()) ops.push_back(tensor(k, l));
  }
  return KrausChannel(std::move(ops), a.cptp() && b.cptp());
}

/// The map rho -> second(first(rho)).
inline KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (first.d_out() != second.d_in()) throw ValidationError("compose: dimension mismatch");
  std::vector<ComplexMatrix> ops;
  for (const auto& k : second.kraus()) {
    for (const auto& l : first.kraus()) ops.push_back(k * l);
  }
  return KrausChannel(std::move(ops), first.cptp() && second.cptp());
}

/// (1 (x) $)|phi_d><phi_d|: the channel acts on the second factor.
inline DensityMatrix choi_state(const KrausChannel& ch) {
  if (!ch.is_square()) throw ValidationError("choi_state: channel must have d_in == d_out");
  if (!ch.cptp()) throw ValidationError("choi_state: channel must be CPTP");
  const auto d = ch.d_in();
  const ComplexVector phi = max_entangled(d).amplitudes();
  const ComplexMatrix one = identity(d);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  for (const auto& k : ch.kraus()) {
    const ComplexVector v = tensor(one, k) * phi;
    out.noalias() += v * v.adjoint();
  }
  out = (out + out.adjoint()) / 2.0;
  return DensityMatrix(std::move(out), {d, d});
}

//------------------------------------------------------------------------------
// Constructors
//------------------------------------------------------------------------------

inline KrausChannel identity_channel(std::size_t d) { return KrausChannel({identity(d)}); }

namespace detail {
inline void check_rate(double r, const char* what) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw ValidationError(std::string(what) + ": rate " + std::to_string(r) + " outside [0, 1]");
  }
}
}  // namespace detail

/// Photon loss: E0 = |0><0| + sqrt(1-gamma)|1><1|, E1 = sqrt(gamma)|0><1|.
inline KrausChannel amplitude_damping(double gamma) {
  detail::check_rate(gamma, "amplitude_damping");
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2), e1 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - gamma);
  e1(0, 1) = std::sqrt(gamma);
  return KrausChannel({e0, e1});
}

/// E0 = |0><0| + sqrt(1-lambda)|1><1|, E1 = sqrt(lambda)|1><1|.
inline KrausChannel phase_damping(double lambda) {
  detail::check_rate(lambda, "phase_damping");
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2), e1 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - lambda);
  e1(1, 1) = std::sqrt(lambda);
  return KrausChannel({e0, e1});
}

/// Number-sector dephasing sum_n Pi_n rho Pi_n. `blocks` must partition {0, ..., d-1}
/// where d is one more than the largest index.
inline KrausChannel ssr_dephasing(const std::vector<std::vector<std::size_t>>& blocks) {
  std::set<std::size_t> seen;
  std::size_t total = 0;
  for (const auto& b : blocks) {
    if (b.empty()) throw ValidationError("ssr_dephasing: empty block");
    for (auto i : b) {
      if (!seen.insert(i).second) throw ValidationError("ssr_dephasing: blocks overlap at index " + std::to_string(i));
    }
    total += b.size();
  }
  if (seen.empty() || *seen.rbegin() + 1 != total) throw ValidationError("ssr_dephasing: blocks do not partition the basis");
  std::vector<ComplexMatrix> ops;
  for (const auto& b : blocks) {
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (auto i : b) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    ops.push_back(std::move(p));
  }
  return KrausChannel(std::move(ops));
}

/// Dephasing in the computational basis of a d-level system.
inline KrausChannel completely_dephasing(std::size_t d) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < d; ++i) blocks.push_back({i});
  return ssr_dephasing(blocks);
}

inline KrausChannel unitary_channel(const ComplexMatrix& u, double tol = kDefaultTol) {
  if (u.rows() != u.cols() || max_abs(u.adjoint() * u - identity(static_cast<std::size_t>(u.rows()))) > tol) {
    throw ValidationError("unitary_channel: matrix is not unitary");
  }
  return KrausChannel({u});
}

/// rho -> (1-p) rho + p I/d, realized with the d^2 Weyl operators X^a Z^b.
inline KrausChannel depolarizing(double p, std::size_t d = 2) {
  detail::check_rate(p, "depolarizing");
  if (d < 2) throw ValidationError("depolarizing: dimension must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix shift = ComplexMatrix::Zero(n, n), clock = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    shift((k + 1) % n, k) = 1.0;
    clock(k, k) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(d));
  }
  const double dd = static_cast<double>(d * d);
  std::vector<ComplexMatrix> ops;
  ComplexMatrix xa = identity(d);
  for (std::size_t a = 0; a < d; ++a) {
    ComplexMatrix w = xa;
    for (std::size_t b = 0; b < d; ++b) {
      const double weight = (a == 0 && b == 0) ? 1.0 - p + p / dd : p / dd;
      if (weight > 0) ops.push_back(std::sqrt(weight) * w);
      w = w * clock;
    }
    xa = shift * xa;
  }
  return KrausChannel(std::move(ops));
}

/// Random CPTP channel with `n_kraus` operators, from a Haar isometry.
inline KrausChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t n_kraus, Rng& rng) {
  if (d_out * n_kraus < d_in) throw ValidationError("random_channel: need d_out * n_kraus >= d_in");
  const auto rows = static_cast<Eigen::Index>(d_out * n_kraus);
  const ComplexMatrix v = random_isometry(rows, static_cast<Eigen::Index>(d_in), rng);
  std::vector<ComplexMatrix> ops;
  for (std::size_t j = 0; j < n_kraus; ++j) {
    ops.push_back(v.block(static_cast<Eigen::Index>(j * d_out), 0, static_cast<Eigen::Index>(d_out),
                          static_cast<Eigen::Index>(d_in)));
  }
  return KrausChannel(std::move(ops));
}

/// Random full-rank POVM with n outcomes: G_x G_x^+ normalized by S^{-1/2}.
inline PovmSet random_povm(const Dims& space_dims, std::size_t n, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(product(space_dims));
  std::vector<ComplexMatrix> raw;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t x = 0; x < n; ++x) {
    const ComplexMatrix g = random_ginibre(d, d, rng);
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  const ComplexMatrix s = hermitian_function(sum, [](double l) { return 1.0 / std::sqrt(l); });
  for (auto& e : raw) {
    e = s * e * s;
    e = (e + e.adjoint()) / 2.0;
  }
  return PovmSet(std::move(raw), space_dims);
}

}  // namespace effent

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

// A condensate as a phase reference. Alice rotates her mode by coupling it to
// an ancilla mode c prepared in a mixture of coherent states |alpha e^{i phi}>
// with phase density p(phi). After tracing c out the rotation is only as good
// as the phase is sharp, which is captured by g = -i int p(phi) e^{i phi}.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "effent/channels.hpp"
#include "effent/effective.hpp"

namespace effent {

//------------------------------------------------------------------------------
// Phase distributions
//------------------------------------------------------------------------------

struct DeltaPhase {
  double phi0 = 0;
};
struct UniformPhase {};
struct WrappedNormalPhase {
  double mu = 0;
  double sigma = 0;  // sigma = 0 is a delta at mu
};
// Two blocks of width w, one starting at delta/2 and its mirror image ending
// at 2pi - delta/2, each carrying density 1/(2w).
struct DoubleRectPhase {
  double w = 0;
  double delta = 0;
};
struct DeltaMixturePhase {
  std::vector<std::pair<double, double>> atoms;  // (phi_i, weight_i)
};

class PhaseDistribution {
 public:
  using Variant = std::variant<DeltaPhase, UniformPhase, WrappedNormalPhase, DoubleRectPhase, DeltaMixturePhase>;

  PhaseDistribution(Variant v) : v_(std::move(v)) { validate(); }  // NOLINT(google-explicit-constructor)

  static PhaseDistribution delta(double phi0) { return {DeltaPhase{phi0}}; }
  static PhaseDistribution uniform() { return {UniformPhase{}}; }
  static PhaseDistribution wrapped_normal(double mu, double sigma) { return {WrappedNormalPhase{mu, sigma}}; }
  static PhaseDistribution double_rect(double w, double delta) { return {DoubleRectPhase{w, delta}}; }
  static PhaseDistribution delta_mixture(std::vector<std::pair<double, double>> atoms) {
    return {DeltaMixturePhase{std::move(atoms)}};
  }

  const Variant& variant() const { return v_; }
  bool is_single_delta() const {
    if (std::holds_alternative<DeltaPhase>(v_)) return true;
    if (const auto* wn = std::get_if<WrappedNormalPhase>(&v_)) return wn->sigma == 0;
    return false;
  }

  /// int p(phi) e^{i k phi} dphi in closed form.
  Complex moment(int k) const {
    const double kk = k;
    return std::visit(
        [kk](const auto& d) -> Complex {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, DeltaPhase>) {
            return std::polar(1.0, kk * d.phi0);
          } else if constexpr (std::is_same_v<T, UniformPhase>) {
            return kk == 0 ? Complex(1) : Complex(0);
          } else if constexpr (std::is_same_v<T, WrappedNormalPhase>) {
            return std::polar(std::exp(-kk * kk * d.sigma * d.sigma / 2), kk * d.mu);
          } else if constexpr (std::is_same_v<T, DoubleRectPhase>) {
            if (kk == 0) return 1.0;
            // The second block mirrors the first, so the sum is real.
            const double a = d.delta / 2;
            return (std::sin(kk * (a + d.w)) - std::sin(kk * a)) / (kk * d.w);
          } else {
            Complex s = 0;
            for (const auto& [phi, wt] : d.atoms) s += wt * std::polar(1.0, kk * phi);
            return s;
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, DeltaPhase>) return "delta";
          else if constexpr (std::is_same_v<T, UniformPhase>) return "uniform";
          else if constexpr (std::is_same_v<T, WrappedNormalPhase>) return "wrapped-normal";
          else if constexpr (std::is_same_v<T, DoubleRectPhase>) return "double-rect";
          else return "delta-mixture";
        },
        v_);
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, WrappedNormalPhase>) {
            if (!(d.sigma >= 0) || !std::isfinite(d.sigma)) throw ValidationError("wrapped_normal: sigma must be >= 0");
          } else if constexpr (std::is_same_v<T, DoubleRectPhase>) {
            if (!(d.w > 0)) throw ValidationError("double_rect: w must be > 0");
            if (!(d.delta >= 0)) throw ValidationError("double_rect: delta must be >= 0");
            if (d.delta + 2 * d.w > 2 * std::numbers::pi + 1e-12) {
              throw ValidationError("double_rect: blocks overlap (need delta + 2w <= 2pi)");
            }
          } else if constexpr (std::is_same_v<T, DeltaMixturePhase>) {
            if (d.atoms.empty()) throw ValidationError("delta_mixture: no atoms");
            double total = 0;
            for (const auto& a : d.atoms) {
              if (!(a.second >= 0)) throw ValidationError("delta_mixture: negative weight");
              total += a.second;
            }
            if (std::abs(total - 1) > 1e-12) throw ValidationError("delta_mixture: weights must sum to 1");
          }
        },
        v_);
  }

  Variant v_;
};

/// g = -i int p(phi) e^{i phi} dphi.
inline Complex g_factor(const PhaseDistribution& dist) { return Complex(0, -1) * dist.moment(1); }

namespace detail {

inline double wrapped_normal_density(double phi, double mu, double sigma) {
  const double norm = 1.0 / (sigma * std::sqrt(2 * std::numbers::pi));
  double s = 0;
  for (int k = -6; k <= 6; ++k) {
    const double x = phi - mu + 2 * std::numbers::pi * k;
    s += std::exp(-x * x / (2 * sigma * sigma));
  }
  return norm * s;
}

// Composite Simpson of e^{i phi} over [a, b] with n (even) intervals.
inline Complex simpson_phase(double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  Complex s = std::polar(1.0, a) + std::polar(1.0, b);
  for (std::size_t j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * std::polar(1.0, a + h * static_cast<double>(j));
  return s * h / 3.0;
}

}  // namespace detail

/// Numerical g: periodic trapezoid for smooth densities, Simpson per block for
/// the piecewise one, direct sums for deltas.
inline Complex g_factor_quadrature(const PhaseDistribution& dist, std::size_t n) {
  if (n < 64) throw ValidationError("g_factor_quadrature: need n >= 64 points");
  const Complex mi(0, -1);
  const Complex m1 = std::visit(
      [n](const auto& d) -> Complex {
        using T = std::decay_t<decltype(d)>;
        const double two_pi = 2 * std::numbers::pi;
        const double h = two_pi / static_cast<double>(n);
        if constexpr (std::is_same_v<T, DeltaPhase>) {
          return std::polar(1.0, d.phi0);
        } else if constexpr (std::is_same_v<T, UniformPhase>) {
          Complex s = 0;
          for (std::size_t j = 0; j < n; ++j) s += std::polar(1.0, h * static_cast<double>(j));
          return s * h / two_pi;
        } else if constexpr (std::is_same_v<T, WrappedNormalPhase>) {
          if (d.sigma == 0) return std::polar(1.0, d.mu);
          Complex s = 0;
          for (std::size_t j = 0; j < n; ++j) {
            const double phi = h * static_cast<double>(j);
            s += detail::wrapped_normal_density(phi, d.mu, d.sigma) * std::polar(1.0, phi);
          }
          return s * h;
        } else if constexpr (std::is_same_v<T, DoubleRectPhase>) {
          const double a = d.delta / 2;
          return (detail::simpson_phase(a, a + d.w, n) + detail::simpson_phase(two_pi - a - d.w, two_pi - a, n)) /
                 (2 * d.w);
        } else {
          Complex s = 0;
          for (const auto& [phi, wt] : d.atoms) s += wt * std::polar(1.0, phi);
          return s;
        }
      },
      dist.variant());
  return mi * m1;
}

//------------------------------------------------------------------------------
// Channels
//------------------------------------------------------------------------------

/// int p(phi) R_z(phi) R_x(theta) rho R_x(theta)^+ R_z(phi)^+ dphi.
///
/// The coherence <1|rho_R|0> is multiplied by c = int p e^{i phi} = i g and
/// populations are untouched. With canonicalize set the deterministic R_z(arg c)
/// is dropped, leaving R_x(theta) followed by phase damping with factor |g|.
inline KrausChannel gamma_channel(const PhaseDistribution& dist, double theta, bool canonicalize = false) {
  const Complex c = dist.moment(1);
  const double mag = std::min(1.0, std::abs(c));
  const ComplexMatrix rx = rotation_x(theta);
  const ComplexMatrix rz = canonicalize || mag == 0 ? identity(2) : rotation_z(std::arg(c));
  std::vector<ComplexMatrix> kraus{std::sqrt(mag) * rz * rx};
  if (mag < 1) {
    const double r = std::sqrt(1 - mag);
    kraus.push_back(r * projector(ket(2, 0)) * rx);
    kraus.push_back(r * projector(ket(2, 1)) * rx);
  }
  return KrausChannel(std::move(kraus));
}

/// R_x(theta)^+ Gamma[rho] R_x(theta); its quality factor is |g|.
inline KrausChannel ssr_lifting_channel(const PhaseDistribution& dist, double theta, bool canonicalize = false) {
  return compose(unitary_channel(rotation_x(theta).adjoint()), gamma_channel(dist, theta, canonicalize));
}

//------------------------------------------------------------------------------
// Exact evolution on truncated Fock space
//------------------------------------------------------------------------------

struct BecParams {
  double alpha_sq = 0;  // mean occupation of the condensate mode
  double theta = 0;     // target omega t, omega = Omega |alpha| / 2

  /// Omega t.
  double omega_t_product() const { return 2 * theta / std::sqrt(alpha_sq); }
};

struct BecSimulation {
  DensityMatrix state;
  double leakage = 0;    // weight of mode a outside {|0>, |1>}
  double norm_loss = 0;  // coherent-state weight cut off by the truncation
  double unitarity_defect = 0;
};

/// Smallest accepted truncation for the condensate mode.
inline std::size_t min_truncation(double alpha_sq) {
  return static_cast<std::size_t>(std::ceil(alpha_sq + 6 * std::sqrt(alpha_sq)));
}

/// Truncated coherent-state amplitudes <n|alpha e^{i phi}>, n < n_trunc.
inline ComplexVector coherent_amplitudes(double alpha_sq, double phi, std::size_t n_trunc) {
  ComplexVector out(static_cast<Eigen::Index>(n_trunc));
  const double log_alpha = 0.5 * std::log(alpha_sq);
  for (std::size_t n = 0; n < n_trunc; ++n) {
    const double nn = static_cast<double>(n);
    const double log_mag =
        -alpha_sq / 2 + (alpha_sq > 0 ? nn * log_alpha : (n == 0 ? 0.0 : -INFINITY)) - 0.5 * std::lgamma(nn + 1);
    out(static_cast<Eigen::Index>(n)) = std::polar(std::exp(log_mag), nn * phi);
  }
  return out;
}

/// Evolves rho (x) |alpha e^{i phi}><.| under H = Omega/2 (a^+ c + c^+ a) for
/// Omega t = 2 theta / |alpha|, traces c out and projects mode a back onto
/// {|0>, |1>}.
///
/// a_cutoff = 2 treats mode a as hard-core (no double occupancy); larger
/// values give a free boson mode with the excess reported as leakage.
inline BecSimulation simulate_bec_exact(const BecParams& params, double phi, std::size_t n_trunc,
                                        const DensityMatrix& input, std::size_t a_cutoff = 2) {
  if (!(params.alpha_sq > 0)) throw ValidationError("simulate_bec_exact: alpha_sq must be > 0");
  if (input.dims() != Dims{2}) throw ValidationError("simulate_bec_exact: input must be a single qubit");
  if (a_cutoff < 2) throw ValidationError("simulate_bec_exact: a_cutoff must be >= 2");
  if (static_cast<double>(n_trunc) < params.alpha_sq + 6 * std::sqrt(params.alpha_sq)) {
    throw ValidationError("simulate_bec_exact: n_trunc must be >= alpha_sq + 6 sqrt(alpha_sq)");
  }
  const ComplexVector coh = coherent_amplitudes(params.alpha_sq, phi, n_trunc);
  BecSimulation out{DensityMatrix::maximally_mixed({2})};
  out.norm_loss = std::max(0.0, 1 - coh.squaredNorm());
  if (out.norm_loss > 1e-6) throw NumericalError("simulate_bec_exact: truncation too small, norm loss " + std::to_string(out.norm_loss));

  const double omega_t = params.omega_t_product();
  const auto na = static_cast<Eigen::Index>(a_cutoff), nc = static_cast<Eigen::Index>(n_trunc);
  // psi[k](i, m): amplitude of |i>_a |m>_c after evolving |k>_a |alpha>.
  std::vector<ComplexMatrix> psi(2, ComplexMatrix::Zero(na, nc));
  // Total number N is conserved; sector N holds |i, N - i> with N - i < n_trunc.
  for (Eigen::Index total = 0; total < na + nc - 1; ++total) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, total - nc + 1), hi = std::min<Eigen::Index>(na - 1, total);
    if (lo > 1 || hi < 0) continue;
    const Eigen::Index size = hi - lo + 1;
    ComplexMatrix h = ComplexMatrix::Zero(size, size);
    for (Eigen::Index i = lo; i < hi; ++i) {
      // <i+1, N-i-1| a^+ c |i, N-i> = sqrt(i+1) sqrt(N-i)
      const double amp = 0.5 * std::sqrt(static_cast<double>((i + 1) * (total - i)));
      h(i + 1 - lo, i - lo) = amp;
      h(i - lo, i + 1 - lo) = amp;
    }
    const Eigensystem es = eig_hermitian(h);
    ComplexVector phases(size);
    for (Eigen::Index j = 0; j < size; ++j) phases(j) = std::polar(1.0, -es.values(j) * omega_t);
    const ComplexMatrix u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
    out.unitarity_defect = std::max(out.unitarity_defect, max_abs(u * u.adjoint() - ComplexMatrix::Identity(size, size)));
    for (Eigen::Index k = 0; k <= 1; ++k) {
      if (k < lo || k > hi) continue;
      const Complex c0 = coh(total - k);
      for (Eigen::Index i = lo; i <= hi; ++i) psi[static_cast<std::size_t>(k)](i, total - i) += u(i - lo, k - lo) * c0;
    }
  }
  if (out.unitarity_defect > 1e-8) throw NumericalError("simulate_bec_exact: unitarity defect too large");

  const ComplexMatrix& rho = input.matrix();
  ComplexMatrix reduced = ComplexMatrix::Zero(na, na);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t l = 0; l < 2; ++l) {
      reduced += rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * psi[k] * psi[l].adjoint();
    }
  }
  const double kept_total = reduced.trace().real();
  ComplexMatrix qubit = reduced.topLeftCorner(2, 2);
  const double kept = qubit.trace().real();
  out.leakage = std::max(0.0, 1 - kept / kept_total);
  if (!(kept > 0)) throw NumericalError("simulate_bec_exact: no weight left on the qubit subspace");
  qubit /= kept;
  qubit = (qubit + qubit.adjoint()) / 2.0;
  out.state = DensityMatrix(std::move(qubit), {2});
  return out;
}

/// Large-|alpha| limit of the evolution at phase phi:
/// |0> -> cos(theta)|0> - i e^{i phi} sin(theta)|1>, i.e. R_z(phi) R_x(2 theta) R_z(-phi).
inline ComplexMatrix bec_limit_map(double theta, double phi) {
  return rotation_z(phi) * rotation_x(2 * theta) * rotation_z(-phi);
}

/// Truncated condensate state int p(phi) |alpha e^{i phi}><.| in the number basis.
inline ComplexMatrix bec_reference_state(const PhaseDistribution& dist, double alpha_sq, std::size_t n_trunc) {
  const ComplexVector mags = coherent_amplitudes(alpha_sq, 0, n_trunc);
  const auto n = static_cast<Eigen::Index>(n_trunc);
  std::vector<Complex> moments(n_trunc);
  for (std::size_t k = 0; k < n_trunc; ++k) moments[k] = dist.moment(static_cast<int>(k));
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex m = i >= j ? moments[static_cast<std::size_t>(i - j)] : std::conj(moments[static_cast<std::size_t>(j - i)]);
      out(i, j) = mags(i).real() * mags(j).real() * m;
    }
  }
  return out;
}

/// Largest |<n|rho|m>| with n != m, i.e. coherence between number sectors.
inline double max_number_coherence(const ComplexMatrix& rho) {
  double best = 0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if (i != j) best = std::max(best, std::abs(rho(i, j)));
    }
  }
  return best;
}

//------------------------------------------------------------------------------
// Sweeps
//------------------------------------------------------------------------------

struct SweepRow {
  double param = 0;
  double g_abs = 0;
  double q_factor = 0;
};

inline std::vector<SweepRow> g_sweep(const std::function<PhaseDistribution(double)>& family,
                                     const std::vector<double>& grid, double theta = 0) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    const PhaseDistribution dist = family(x);
    rows.push_back({x, std::abs(g_factor(dist)), quality_factor(ssr_lifting_channel(dist, theta), 2)});
  }
  return rows;
}

}  // namespace effent

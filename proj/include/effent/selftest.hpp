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

// Acceptance checks shared by the acceptance test binary and `effent selftest`.
// Every check is deterministic: the random draws come from fixed seeds.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "effent/bec.hpp"
#include "effent/channels.hpp"
#include "effent/effective.hpp"
#include "effent/entanglement.hpp"
#include "effent/games.hpp"
#include "effent/random.hpp"

namespace effent::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

inline CriterionResult damping_quality() {
  double worst = 0;
  for (int k = 0; k <= 10; ++k) {
    const double r = k / 10.0;
    worst = std::max(worst, std::abs(quality_factor(amplitude_damping(r), 2) - std::sqrt(1 - r)));
    worst = std::max(worst, std::abs(quality_factor(phase_damping(r), 2) - std::sqrt(1 - r)));
  }
  return {1, "damping channel quality factors", worst < 1e-9, fmt("max error %.3g (tol 1e-9)", worst)};
}

inline CriterionResult heisenberg_duality() {
  Rng rng(101);
  std::uniform_int_distribution<std::size_t> dim(2, 4), nk(1, 4);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t din = dim(rng), dout = dim(rng);
    const KrausChannel ch = random_channel(din, dout, std::max(nk(rng), (din + dout - 1) / dout), rng);
    const PovmSet povm = random_povm({dout}, 3, rng);
    const DensityMatrix rho = random_density_matrix({din}, rng);
    const ComplexMatrix out = effent::apply(ch, rho.matrix());
    for (const auto& p : povm.elements()) {
      const Complex lhs = (adjoint_apply(ch, p) * rho.matrix()).trace();
      const Complex rhs = (p * out).trace();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {2, "Heisenberg duality of channels and effects", worst < 1e-12, fmt("max |difference| %.3g (tol 1e-12)", worst)};
}

inline CriterionResult roof_vs_wootters() {
  Rng rng(202);
  std::uniform_int_distribution<std::size_t> rank(2, 4);
  double lo = INFINITY, hi = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = random_density_matrix({2, 2}, rank(rng), rng);
    const double diff = g_concurrence_mixed(rho, 2).value - concurrence_wootters(rho);
    lo = std::min(lo, diff);
    hi = std::max(hi, diff);
  }
  const bool ok = lo >= -1e-9 && hi <= 1e-3;
  return {3, "convex roof agrees with Wootters concurrence", ok,
          fmt("roof - wootters in [%.3g, %.3g] (allowed [-1e-9, 1e-3])", lo, hi)};
}

inline CriterionResult one_sided_exactness() {
  Rng rng(303);
  std::uniform_int_distribution<std::size_t> nk(1, 4);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix psi(random_pure_state({2, 2}, rng));
    const KrausChannel ch = random_channel(2, 2, nk(rng), rng);
    const bool on_a = trial % 2 == 0;
    const DensityMatrix eff =
        on_a ? effective_state(psi, ch, identity_channel(2)) : effective_state(psi, identity_channel(2), ch);
    const double expect = quality_factor(ch, 2) * concurrence_wootters(psi);
    worst = std::max(worst, std::abs(concurrence_wootters(eff) - expect));
  }
  return {4, "one-sided restriction of pure states is exact", worst < 1e-9, fmt("max error %.3g (tol 1e-9)", worst)};
}

inline CriterionResult two_sided_bound() {
  Rng rng(404);
  std::uniform_int_distribution<std::size_t> nk(1, 3);
  double worst = -INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const PureState psi = random_pure_state({2, 2}, rng);
    const KrausChannel a = random_channel(2, 2, nk(rng), rng);
    const KrausChannel b = random_channel(2, 2, nk(rng), rng);
    const DensityMatrix eff = effective_state(DensityMatrix(psi), a, b);
    const double lhs = eff.is_pure() ? g_concurrence_pure(eff.principal_state(), 2, 2) : g_concurrence_mixed(eff, 2).value;
    const double rhs = quality_factor(a, 2) * quality_factor(b, 2) * g_concurrence_pure(psi);
    worst = std::max(worst, lhs - rhs);
  }
  return {5, "two-sided restriction is bounded by Q_A Q_B G", worst <= 2e-3,
          fmt("max (roof - bound) %.3g (allowed 2e-3)", worst)};
}

inline CriterionResult bec_g_factors() {
  double worst = 0;
  for (double sigma : {0.1, 0.5, 1.0, 2.0}) {
    const auto d = PhaseDistribution::wrapped_normal(0.0, sigma);
    worst = std::max(worst, std::abs(std::abs(g_factor(d)) - std::exp(-sigma * sigma / 2)));
    worst = std::max(worst, std::abs(g_factor(d) - g_factor_quadrature(d, 2048)));
  }
  const double uni = std::abs(g_factor_quadrature(PhaseDistribution::uniform(), 2048));
  const auto anti = PhaseDistribution::delta_mixture({{0.7, 0.5}, {0.7 + std::numbers::pi, 0.5}});
  const double antipodal = std::max(std::abs(g_factor(anti)), std::abs(g_factor_quadrature(anti, 2048)));
  const bool ok = worst < 1e-8 && uni < 1e-14 && antipodal < 1e-14;
  char buf[160];
  std::snprintf(buf, sizeof buf, "wrapped-normal error %.3g, uniform |g| %.3g, antipodal |g| %.3g", worst, uni, antipodal);
  return {6, "condensate g-factors", ok, buf};
}

inline std::vector<PhaseDistribution> sample_distributions() {
  return {PhaseDistribution::delta(0.0),           PhaseDistribution::delta(1.3),
          PhaseDistribution::uniform(),            PhaseDistribution::wrapped_normal(0.0, 0.3),
          PhaseDistribution::wrapped_normal(0.5, 1.0), PhaseDistribution::wrapped_normal(-1.0, 1.7),
          PhaseDistribution::double_rect(0.5, 0.3), PhaseDistribution::double_rect(1.0, 2.0),
          PhaseDistribution::delta_mixture({{0.0, 0.75}, {std::numbers::pi, 0.25}}),
          PhaseDistribution::delta_mixture({{0.2, 0.4}, {1.1, 0.6}})};
}

inline CriterionResult ssr_lifting_quality() {
  double worst = 0, spread = 0;
  for (const auto& d : sample_distributions()) {
    const double g = std::abs(g_factor(d));
    double lo = INFINITY, hi = -INFINITY;
    for (double theta : {0.4, 2.1}) {
      const double q = quality_factor(ssr_lifting_channel(d, theta), 2);
      worst = std::max(worst, std::abs(q - g));
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    spread = std::max(spread, hi - lo);
  }
  return {7, "lifting channel quality equals |g|", worst < 1e-6 && spread < 1e-9,
          fmt("max |Q - |g|| %.3g (tol 1e-6), theta spread %.3g (tol 1e-9)", worst, spread)};
}

inline CriterionResult exact_fock_convergence() {
  const double theta = std::numbers::pi / 4;
  const DensityMatrix in(PureState(ket(2, 0), {2}));
  ComplexVector target(2);
  target << std::cos(theta), Complex(0, -std::sin(theta));
  const ComplexMatrix limit = projector(target);
  std::vector<double> dist;
  for (double a2 : {25.0, 100.0, 400.0}) {
    const std::size_t trunc = std::max<std::size_t>(170, min_truncation(a2) + 10);
    dist.push_back(trace_distance(simulate_bec_exact({a2, theta}, 0.0, trunc, in).state.matrix(), limit));
  }
  const bool ok = dist[1] < 1e-2 && dist[0] > dist[1] && dist[1] > dist[2];
  char buf[160];
  std::snprintf(buf, sizeof buf, "trace distance %.3g, %.3g, %.3g at alpha_sq 25, 100, 400", dist[0], dist[1], dist[2]);
  return {8, "exact evolution approaches the limit map", ok, buf};
}

inline CriterionResult strict_ssr() {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = h;
  v(2) = h;
  const DensityMatrix psi(PureState(v, {2, 2}));
  const NumberBlocks blocks{{0}, {1}};
  const double wv = wiseman_vaccaro(psi, blocks, blocks).value;
  double worst = 0;
  for (double sigma : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const auto d = PhaseDistribution::wrapped_normal(0.0, sigma);
    const DensityMatrix eff = effective_state(psi, ssr_lifting_channel(d, 0.9), identity_channel(2));
    worst = std::max(worst, std::abs(concurrence_wootters(eff) - std::abs(g_factor(d))));
  }
  return {9, "single-particle entanglement under number superselection", wv == 0.0 && worst < 1e-6,
          fmt("number-block measure %.3g (want 0), max |C - |g|| %.3g (tol 1e-6)", wv, worst)};
}

inline CriterionResult game_properties() {
  Rng rng(1010);
  const GameSpec base = bell_statistics_game();
  // Constant payoff on the same questions.
  const GameSpec constant(base.p(), base.q(), base.zeta(), base.eta(), 2, 3,
                          std::vector<double>(base.n_s() * base.n_t() * 2 * 3, 0.37));
  double const_err = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density_matrix({2, 2}, rng);
    const PovmSet a = random_povm({2, 2}, 2, rng), b = random_povm({2, 2}, 3, rng);
    const_err = std::max(const_err, std::abs(payoff(constant, rho, a, b) - 0.37));
  }

  SeesawOptions opts;
  opts.seed = 11;
  const DensityMatrix phi(max_entangled(2));
  const SeesawResult ent = maximize_payoff(base, phi, opts);
  const SeesawResult mixed = maximize_payoff(base, DensityMatrix::maximally_mixed({2, 2}), opts);
  bool monotone = true;
  for (const auto* r : {&ent, &mixed}) {
    for (std::size_t k = 1; k < r->history.size(); ++k) monotone = monotone && r->history[k] >= r->history[k - 1] - 1e-12;
  }
  const double margin = ent.value - mixed.value;

  // Full dephasing on both sides leaves (|00><00| + |11><11|) / 2.
  ComplexMatrix deph = ComplexMatrix::Zero(4, 4);
  deph(0, 0) = deph(3, 3) = 0.5;
  const double direct = maximize_payoff(base, DensityMatrix(deph, {2, 2}), opts).value;
  const double restricted = restricted_payoff(base, phi, phase_damping(1), phase_damping(1), opts, true).value;
  const double restr_err = std::abs(direct - restricted);

  const bool ok = const_err < 1e-12 && monotone && margin > 0 && restr_err < 1e-6;
  char buf[224];
  std::snprintf(buf, sizeof buf,
                "constant error %.3g, monotone %s, value(phi) - value(I/4) = %.6g, restricted vs dephased %.3g", const_err,
                monotone ? "yes" : "no", margin, restr_err);
  return {10, "game payoff properties", ok, buf};
}

}  // namespace detail

inline std::vector<std::function<CriterionResult()>> criteria() {
  return {detail::damping_quality,    detail::heisenberg_duality, detail::roof_vs_wootters, detail::one_sided_exactness,
          detail::two_sided_bound,    detail::bec_g_factors,      detail::ssr_lifting_quality,
          detail::exact_fock_convergence, detail::strict_ssr,     detail::game_properties};
}

/// Runs one check; exceptions count as failures.
inline CriterionResult run_one(int id) {
  const auto all = criteria();
  if (id < 1 || id > static_cast<int>(all.size())) throw ValidationError("selftest: no criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = all[static_cast<std::size_t>(id - 1)]();
  } catch (const std::exception& e) {
    r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(criteria().size()); ++id) out.push_back(run_one(id));
  return out;
}

}  // namespace effent::selftest

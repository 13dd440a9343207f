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

// Semiquantum nonlocal games.
//
// The referee sends question states zeta^s to Alice and eta^t to Bob; each
// player measures their question jointly with their share of rho. All
// operators live on the ordered space (question_A, rho_A, rho_B, question_B):
// Alice's POVM acts on the first two factors and Bob's on the last two.

#pragma once

#include <limits>
#include <vector>

#include "effent/channels.hpp"
#include "effent/effective.hpp"
#include "effent/random.hpp"

namespace effent {

class GameSpec {
 public:
  /// `payoff` is indexed [s][t][x][y] and flattened row-major.
  GameSpec(std::vector<double> p, std::vector<double> q, std::vector<DensityMatrix> zeta, std::vector<DensityMatrix> eta,
           std::size_t n_x, std::size_t n_y, std::vector<double> payoff)
      : p_(std::move(p)), q_(std::move(q)), zeta_(std::move(zeta)), eta_(std::move(eta)), n_x_(n_x), n_y_(n_y),
        payoff_(std::move(payoff)) {
    check_distribution(p_, "p");
    check_distribution(q_, "q");
    if (zeta_.size() != p_.size()) throw ValidationError("GameSpec: zeta count must equal the size of p");
    if (eta_.size() != q_.size()) throw ValidationError("GameSpec: eta count must equal the size of q");
    for (const auto& z : zeta_) {
      if (z.dim() != zeta_.front().dim()) throw ValidationError("GameSpec: question states zeta differ in dimension");
    }
    for (const auto& e : eta_) {
      if (e.dim() != eta_.front().dim()) throw ValidationError("GameSpec: question states eta differ in dimension");
    }
    if (n_x_ == 0 || n_y_ == 0) throw ValidationError("GameSpec: answer sets must be non-empty");
    if (payoff_.size() != n_s() * n_t() * n_x_ * n_y_) {
      throw ValidationError("GameSpec: payoff tensor size does not match n_s * n_t * n_x * n_y");
    }
  }

  std::size_t n_s() const { return p_.size(); }
  std::size_t n_t() const { return q_.size(); }
  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  std::size_t d_zeta() const { return zeta_.front().dim(); }
  std::size_t d_eta() const { return eta_.front().dim(); }
  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& q() const { return q_; }
  const std::vector<DensityMatrix>& zeta() const { return zeta_; }
  const std::vector<DensityMatrix>& eta() const { return eta_; }

  double payoff(std::size_t s, std::size_t t, std::size_t x, std::size_t y) const {
    return payoff_[((s * n_t() + t) * n_x_ + x) * n_y_ + y];
  }

 private:
  static void check_distribution(const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ValidationError(std::string("GameSpec: ") + name + " is empty");
    double sum = 0;
    for (double x : v) {
      if (x < 0) throw ValidationError(std::string("GameSpec: ") + name + " has a negative entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError(std::string("GameSpec: ") + name + " does not sum to 1");
  }

  std::vector<double> p_, q_;
  std::vector<DensityMatrix> zeta_, eta_;
  std::size_t n_x_, n_y_;
  std::vector<double> payoff_;
};

namespace detail {

inline void check_play(const GameSpec& game, const DensityMatrix& rho, std::size_t alice_dim, std::size_t alice_n,
                       std::size_t bob_dim, std::size_t bob_n) {
  if (rho.dims().size() != 2) throw ValidationError("payoff: resource state must be bipartite");
  const auto da = rho.dims()[0], db = rho.dims()[1];
  if (alice_dim != game.d_zeta() * da) throw ValidationError("payoff: Alice's POVM must act on question_A (x) rho_A");
  if (bob_dim != db * game.d_eta()) throw ValidationError("payoff: Bob's POVM must act on rho_B (x) question_B");
  if (alice_n != game.n_x()) throw ValidationError("payoff: Alice's POVM outcome count differs from n_x");
  if (bob_n != game.n_y()) throw ValidationError("payoff: Bob's POVM outcome count differs from n_y");
}

// sigma[t][y] = Tr_{B, qB}[(I_A (x) P_y)(rho (x) eta_t)], on rho_A.
inline std::vector<std::vector<ComplexMatrix>> bob_reductions(const GameSpec& game, const DensityMatrix& rho,
                                                              const std::vector<ComplexMatrix>& bob) {
  const auto da = rho.dims()[0], db = rho.dims()[1], de = game.d_eta();
  std::vector<std::vector<ComplexMatrix>> out(game.n_t());
  for (std::size_t t = 0; t < game.n_t(); ++t) {
    const ComplexMatrix joint = tensor(rho.matrix(), game.eta()[t].matrix());
    for (const auto& py : bob) {
      out[t].push_back(partial_trace(tensor(identity(da), py) * joint, {da, db, de}, {0}));
    }
  }
  return out;
}

// tau[s][x] = Tr_{qA, A}[(P_x (x) I_B)(zeta_s (x) rho)], on rho_B.
inline std::vector<std::vector<ComplexMatrix>> alice_reductions(const GameSpec& game, const DensityMatrix& rho,
                                                                const std::vector<ComplexMatrix>& alice) {
  const auto da = rho.dims()[0], db = rho.dims()[1], dz = game.d_zeta();
  std::vector<std::vector<ComplexMatrix>> out(game.n_s());
  for (std::size_t s = 0; s < game.n_s(); ++s) {
    const ComplexMatrix joint = tensor(game.zeta()[s].matrix(), rho.matrix());
    for (const auto& px : alice) {
      out[s].push_back(partial_trace(tensor(px, identity(db)) * joint, {dz, da, db}, {2}));
    }
  }
  return out;
}

// C_x with payoff = sum_x Tr[P_x C_x] for fixed Bob.
inline std::vector<ComplexMatrix> alice_coefficients(const GameSpec& game, const DensityMatrix& rho,
                                                     const std::vector<ComplexMatrix>& bob) {
  const auto sigma = bob_reductions(game, rho, bob);
  const auto dim = static_cast<Eigen::Index>(game.d_zeta() * rho.dims()[0]);
  std::vector<ComplexMatrix> c(game.n_x(), ComplexMatrix::Zero(dim, dim));
  for (std::size_t s = 0; s < game.n_s(); ++s) {
    for (std::size_t t = 0; t < game.n_t(); ++t) {
      const double w = game.p()[s] * game.q()[t];
      if (w == 0) continue;
      for (std::size_t y = 0; y < game.n_y(); ++y) {
        const ComplexMatrix block = tensor(game.zeta()[s].matrix(), sigma[t][y]);
        for (std::size_t x = 0; x < game.n_x(); ++x) {
          const double v = game.payoff(s, t, x, y);
          if (v != 0) c[x] += (w * v) * block;
        }
      }
    }
  }
  return c;
}

// D_y with payoff = sum_y Tr[P_y D_y] for fixed Alice.
inline std::vector<ComplexMatrix> bob_coefficients(const GameSpec& game, const DensityMatrix& rho,
                                                   const std::vector<ComplexMatrix>& alice) {
  const auto tau = alice_reductions(game, rho, alice);
  const auto dim = static_cast<Eigen::Index>(rho.dims()[1] * game.d_eta());
  std::vector<ComplexMatrix> c(game.n_y(), ComplexMatrix::Zero(dim, dim));
  for (std::size_t s = 0; s < game.n_s(); ++s) {
    for (std::size_t t = 0; t < game.n_t(); ++t) {
      const double w = game.p()[s] * game.q()[t];
      if (w == 0) continue;
      for (std::size_t x = 0; x < game.n_x(); ++x) {
        const ComplexMatrix block = tensor(tau[s][x], game.eta()[t].matrix());
        for (std::size_t y = 0; y < game.n_y(); ++y) {
          const double v = game.payoff(s, t, x, y);
          if (v != 0) c[y] += (w * v) * block;
        }
      }
    }
  }
  return c;
}

inline double linear_value(const std::vector<ComplexMatrix>& povm, const std::vector<ComplexMatrix>& coeff) {
  double v = 0;
  for (std::size_t k = 0; k < povm.size(); ++k) v += (povm[k] * coeff[k]).trace().real();
  return v;
}

}  // namespace detail

/// mu(x, y | s, t) = Tr[(P_x (x) P_y)(zeta_s (x) rho (x) eta_t)], as an n_x x n_y table.
inline Eigen::MatrixXd outcome_probabilities(const GameSpec& game, const DensityMatrix& rho, const PovmSet& alice,
                                             const PovmSet& bob, std::size_t s, std::size_t t) {
  detail::check_play(game, rho, alice.dim(), alice.size(), bob.dim(), bob.size());
  if (s >= game.n_s() || t >= game.n_t()) throw ValidationError("outcome_probabilities: question index out of range");
  const auto da = rho.dims()[0];
  const ComplexMatrix joint = tensor(rho.matrix(), game.eta()[t].matrix());
  Eigen::MatrixXd mu(game.n_x(), game.n_y());
  for (std::size_t y = 0; y < game.n_y(); ++y) {
    const ComplexMatrix sigma =
        partial_trace(tensor(identity(da), bob[y]) * joint, {da, rho.dims()[1], game.d_eta()}, {0});
    const ComplexMatrix local = tensor(game.zeta()[s].matrix(), sigma);
    for (std::size_t x = 0; x < game.n_x(); ++x) {
      mu(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = (alice[x] * local).trace().real();
    }
  }
  return mu;
}

/// sum_{s,t,x,y} p(s) q(t) payoff(s,t,x,y) mu(x,y|s,t) for fixed measurements.
inline double payoff(const GameSpec& game, const DensityMatrix& rho, const PovmSet& alice, const PovmSet& bob) {
  detail::check_play(game, rho, alice.dim(), alice.size(), bob.dim(), bob.size());
  return detail::linear_value(alice.elements(), detail::alice_coefficients(game, rho, bob.elements()));
}

/// E_k = Tr_1[P_k (rho1 (x) I)]: the POVM on system 2 reproducing the joint
/// statistics against rho1 (x) rho2.
inline PovmSet effective_povm(const PovmSet& joint, const DensityMatrix& rho1) {
  const auto& dims = joint.space_dims();
  const auto k = rho1.dims().size();
  if (dims.size() <= k || !std::equal(rho1.dims().begin(), rho1.dims().end(), dims.begin())) {
    throw ValidationError("effective_povm: leading POVM space dims must match rho1 dims");
  }
  const Dims rest(dims.begin() + static_cast<std::ptrdiff_t>(k), dims.end());
  std::vector<std::size_t> keep;
  for (std::size_t i = k; i < dims.size(); ++i) keep.push_back(i);
  const ComplexMatrix embedded = tensor(rho1.matrix(), identity(product(rest)));
  std::vector<ComplexMatrix> out;
  out.reserve(joint.size());
  for (const auto& p : joint.elements()) {
    ComplexMatrix e = partial_trace(p * embedded, dims, keep);
    out.push_back((e + e.adjoint()) / 2.0);
  }
  return PovmSet(std::move(out), rest, 1e-8);
}

//------------------------------------------------------------------------------
// Seesaw maximization
//------------------------------------------------------------------------------

struct SeesawOptions {
  int seesaw_rounds = 60;
  int inner_iters = 200;
  int restarts = 8;
  std::uint64_t seed = 0;
  double tol = 1e-9;

  void validate() const {
    if (seesaw_rounds < 1 || inner_iters < 1 || restarts < 1) {
      throw ValidationError("seesaw options: rounds, inner_iters and restarts must be >= 1");
    }
    if (!(tol > 0)) throw ValidationError("seesaw options: tol must be positive");
  }
};

struct SeesawResult {
  double value = 0;
  PovmSet alice;
  PovmSet bob;
  int rounds = 0;         // rounds run by the winning restart
  int restarts_used = 0;
  int best_restart = 0;
  std::vector<double> history;  // payoff after each round of the winning restart
};

namespace detail {

// Fixed-point ascent for max sum_x Tr[P_x C_x] over POVMs. With C'_x = C_x + cI
// positive definite, P_x <- L^{-1/2} C'_x P_x C'_x L^{-1/2}, L = sum_x C'_x P_x C'_x.
// Updates that do not increase the objective are rejected.
inline std::vector<ComplexMatrix> maximize_linear(const std::vector<ComplexMatrix>& coeff,
                                                  std::vector<ComplexMatrix> povm, int iters, double tol) {
  const auto dim = static_cast<std::size_t>(coeff.front().rows());
  double lowest = std::numeric_limits<double>::infinity(), scale = 0;
  for (const auto& c : coeff) {
    lowest = std::min(lowest, min_eigenvalue(c));
    scale = std::max(scale, max_abs(c));
  }
  const double shift = std::max(0.0, -lowest) + 1e-6 * std::max(scale, 1e-12);
  std::vector<ComplexMatrix> shifted;
  for (const auto& c : coeff) shifted.push_back(c + shift * identity(dim));

  double current = linear_value(povm, coeff);
  for (int it = 0; it < iters; ++it) {
    ComplexMatrix lambda = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < povm.size(); ++x) lambda += shifted[x] * povm[x] * shifted[x];
    const double top = max_abs(lambda);
    const ComplexMatrix inv_sqrt = hermitian_function(lambda, [top](double l) {
      return l > 1e-12 * top ? 1.0 / std::sqrt(l) : 0.0;
    });
    std::vector<ComplexMatrix> next;
    ComplexMatrix total = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < povm.size(); ++x) {
      // Clip roundoff negativity amplified by an ill-conditioned L.
      ComplexMatrix e = hermitian_function(inv_sqrt * shifted[x] * povm[x] * shifted[x] * inv_sqrt,
                                           [](double l) { return std::max(l, 0.0); });
      total += e;
      next.push_back(std::move(e));
    }
    // Whatever lies outside the support of L goes to the outcome that values it most.
    const ComplexMatrix missing =
        hermitian_function(identity(dim) - total, [](double l) { return std::max(l, 0.0); });
    if (max_abs(missing) > 1e-12) {
      std::size_t best = 0;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < coeff.size(); ++x) {
        const double gain = (coeff[x] * missing).trace().real();
        if (gain > best_gain) {
          best_gain = gain;
          best = x;
        }
      }
      next[best] += missing;
      total += missing;
    }
    // Restore exact completeness; total is close to I here.
    const ComplexMatrix fix = hermitian_function(total, [](double l) { return 1.0 / std::sqrt(l); });
    for (auto& e : next) {
      e = fix * e * fix;
      e = (e + e.adjoint()) / 2.0;
    }
    const double value = linear_value(next, coeff);
    if (!(value > current)) break;
    const double gain = value - current;
    povm = std::move(next);
    current = value;
    if (gain < tol) break;
  }
  return povm;
}

inline std::vector<ComplexMatrix> identity_split(std::size_t dim, std::size_t n) {
  return std::vector<ComplexMatrix>(n, identity(dim) / static_cast<double>(n));
}

// Rank-1 projectors of a Haar-random basis, dealt round-robin to the outcomes,
// plus a little of the identity split. The fixed-point update cannot raise
// the rank of an element, so the seed has to be full rank.
inline std::vector<ComplexMatrix> random_projective(std::size_t dim, std::size_t n, Rng& rng) {
  const ComplexMatrix u = random_unitary(dim, rng);
  std::vector<ComplexMatrix> out(n, ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
  for (std::size_t k = 0; k < dim; ++k) out[k % n] += projector(u.col(static_cast<Eigen::Index>(k)));
  for (auto& e : out) e = 0.9 * e + 0.1 / static_cast<double>(n) * identity(dim);
  return out;
}

}  // namespace detail

/// Lower bound on the optimal payoff by alternating (seesaw) optimization of
/// Alice's and Bob's POVMs. Restart 0 starts from identity-split POVMs, the
/// others from random projective measurements blended with the identity split.
/// Deterministic for a fixed seed.
inline SeesawResult maximize_payoff(const GameSpec& game, const DensityMatrix& rho, const SeesawOptions& opts = {}) {
  opts.validate();
  if (rho.dims().size() != 2) throw ValidationError("maximize_payoff: resource state must be bipartite");
  const auto dim_a = game.d_zeta() * rho.dims()[0];
  const auto dim_b = rho.dims()[1] * game.d_eta();
  const Dims dims_a{game.d_zeta(), rho.dims()[0]}, dims_b{rho.dims()[1], game.d_eta()};

  Rng rng(opts.seed);
  SeesawResult best{-std::numeric_limits<double>::infinity(), PovmSet::trivial(dims_a), PovmSet::trivial(dims_b), 0, 0, 0, {}};
  for (int restart = 0; restart < opts.restarts; ++restart) {
    std::vector<ComplexMatrix> alice, bob;
    if (restart == 0) {
      alice = detail::identity_split(dim_a, game.n_x());
      bob = detail::identity_split(dim_b, game.n_y());
    } else {
      alice = detail::random_projective(dim_a, game.n_x(), rng);
      bob = detail::random_projective(dim_b, game.n_y(), rng);
    }
    double value = detail::linear_value(alice, detail::alice_coefficients(game, rho, bob));
    std::vector<double> history{value};
    int rounds = 0;
    for (; rounds < opts.seesaw_rounds;) {
      alice = detail::maximize_linear(detail::alice_coefficients(game, rho, bob), std::move(alice), opts.inner_iters, opts.tol);
      bob = detail::maximize_linear(detail::bob_coefficients(game, rho, alice), std::move(bob), opts.inner_iters, opts.tol);
      const double next = detail::linear_value(bob, detail::bob_coefficients(game, rho, alice));
      ++rounds;
      history.push_back(std::max(next, value));
      const double gain = next - value;
      value = std::max(next, value);
      if (gain < opts.tol) break;
    }
    ++best.restarts_used;
    if (value > best.value) {
      best.value = value;
      best.alice = PovmSet(alice, dims_a, 1e-8);
      best.bob = PovmSet(bob, dims_b, 1e-8);
      best.rounds = rounds;
      best.best_restart = restart;
      best.history = std::move(history);
    }
  }
  return best;
}

struct RestrictedPayoff {
  double value = 0;
  SeesawResult play;                    // optimum found on the effective state
  std::optional<double> verify_defect;  // |payoff via $^dagger[P] on rho - payoff on $[rho]|
};

/// Optimal payoff when the detectors on rho are restricted by local channels:
/// unrestricted play on the effective state ($_A (x) $_B)[rho]. With `verify`,
/// the winning measurements are pulled back through the adjoint channels and
/// replayed on rho itself; a mismatch above 1e-10 raises NumericalError.
inline RestrictedPayoff restricted_payoff(const GameSpec& game, const DensityMatrix& rho, const KrausChannel& ch_a,
                                          const KrausChannel& ch_b, const SeesawOptions& opts = {}, bool verify = false) {
  const DensityMatrix effective = effective_state(rho, ch_a, ch_b);
  RestrictedPayoff out{0, maximize_payoff(game, effective, opts), std::nullopt};
  out.value = out.play.value;
  if (verify) {
    const PovmSet pulled_a = adjoint_apply(tensor_channels(identity_channel(game.d_zeta()), ch_a), out.play.alice);
    const PovmSet pulled_b = adjoint_apply(tensor_channels(ch_b, identity_channel(game.d_eta())), out.play.bob);
    const PovmSet alice(pulled_a.elements(), {game.d_zeta(), ch_a.d_in()}, 1e-8);
    const PovmSet bob(pulled_b.elements(), {ch_b.d_in(), game.d_eta()}, 1e-8);
    const double direct = payoff(game, rho, alice, bob);
    const double via_state = payoff(game, effective, out.play.alice, out.play.bob);
    out.verify_defect = std::abs(direct - via_state);
    if (*out.verify_defect > 1e-10) {
      throw NumericalError("restricted_payoff: Heisenberg and Schrodinger payoffs disagree by " +
                           std::to_string(*out.verify_defect));
    }
  }
  return out;
}

//------------------------------------------------------------------------------
// Stock games
//------------------------------------------------------------------------------

/// Witness game on two qubits. Each player receives one of the four qubit
/// states {|0>, |1>, |+>, |+i>} and answers 0 or 1; the payoff for a joint
/// "1, 1" answer is -beta_st / (p q) where W = I/2 - |phi_2><phi_2| =
/// sum_st beta_st tau_s^T (x) tau_t^T. Every strategy on a separable resource
/// scores at most 0; a Bell measurement on |phi_2> scores 1/8.
inline GameSpec bell_statistics_game() {
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<ComplexVector> kets = {ket(2, 0), ket(2, 1), (ket(2, 0) + ket(2, 1)) * h,
                                     (ket(2, 0) + Complex(0, 1) * ket(2, 1)) * h};
  std::vector<DensityMatrix> states;
  for (const auto& k : kets) states.emplace_back(projector(k), Dims{2});

  const ComplexMatrix phi = max_entangled(2).projector();
  const ComplexMatrix witness = identity(4) / 2.0 - phi;
  ComplexMatrix system(16, 16);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t t = 0; t < 4; ++t) {
      system.col(static_cast<Eigen::Index>(s * 4 + t)) =
          flatten(tensor(states[s].matrix().transpose(), states[t].matrix().transpose()));
    }
  }
  const ComplexVector beta = system.fullPivLu().solve(flatten(witness));

  const std::vector<double> prior(4, 0.25);
  std::vector<double> pay(4 * 4 * 2 * 2, 0.0);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t t = 0; t < 4; ++t) {
      pay[((s * 4 + t) * 2 + 1) * 2 + 1] = -beta(static_cast<Eigen::Index>(s * 4 + t)).real() / (prior[s] * prior[t]);
    }
  }
  return GameSpec(prior, prior, states, states, 2, 2, std::move(pay));
}

}  // namespace effent

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

// Effective entanglement under measurement restrictions modelled by local
// CPMs. A restriction $ on the detectors is equivalent to playing with the
// effective state ($_A (x) $_B)[rho] and unrestricted detectors; the
// G-concurrence of that state is attenuated by the quality factor Q($), the
// G-concurrence of the channel's Choi state.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "effent/channels.hpp"
#include "effent/entanglement.hpp"

namespace effent {

enum class Method { kWootters, kRoof };

struct QualityFactor {
  double q = 0;
  Method method = Method::kWootters;  // kRoof values are upper estimates
};

/// G_d of the Choi state. Exact (Wootters) for d = 2, convex-roof estimate above.
inline QualityFactor quality_factor_detail(const KrausChannel& ch, std::size_t d, const RoofOptions& opts = {}) {
  if (!ch.is_square() || ch.d_in() != d) {
    throw ValidationError("quality_factor: channel dimensions " + std::to_string(ch.d_in()) + "->" +
                          std::to_string(ch.d_out()) + " do not match d = " + std::to_string(d));
  }
  const DensityMatrix choi = choi_state(ch);
  if (d == 2) return {concurrence_wootters(choi), Method::kWootters};
  return {g_concurrence_mixed(choi, d, opts).value, Method::kRoof};
}

inline double quality_factor(const KrausChannel& ch, std::size_t d, const RoofOptions& opts = {}) {
  return quality_factor_detail(ch, d, opts).q;
}

/// ($_A (x) $_B)[rho] for a bipartite rho.
inline DensityMatrix effective_state(const DensityMatrix& rho, const KrausChannel& ch_a, const KrausChannel& ch_b) {
  if (rho.dims().size() != 2 || rho.dims()[0] != ch_a.d_in() || rho.dims()[1] != ch_b.d_in()) {
    throw ValidationError("effective_state: state dims do not match channel input dimensions");
  }
  const KrausChannel both = tensor_channels(ch_a, ch_b);
  ComplexMatrix out = effent::apply(both, rho.matrix());
  out = (out + out.adjoint()) / 2.0;
  return DensityMatrix(std::move(out), {ch_a.d_out(), ch_b.d_out()});
}

/// G_d(rho): pure formula, Wootters at d = 2, convex roof otherwise.
inline double g_concurrence(const DensityMatrix& rho, std::size_t d, const RoofOptions& opts = {}) {
  if (rho.dims() != Dims{d, d}) throw ValidationError("g_concurrence: state dims must be [d, d]");
  if (rho.is_pure()) return g_concurrence_pure(rho.principal_state(), d, d);
  if (d == 2) return concurrence_wootters(rho);
  return g_concurrence_mixed(rho, d, opts).value;
}

enum class BoundKind { kExact, kUpperBound };

inline const char* to_string(BoundKind k) { return k == BoundKind::kExact ? "exact" : "upper_bound"; }

struct EffectiveConcurrence {
  double value = 0;
  BoundKind kind = BoundKind::kUpperBound;
  double q_a = 1;
  double q_b = 1;
  double g = 0;  // G_d(rho) before attenuation
};

/// Q($_A) Q($_B) G_d(rho). Exact when rho is pure and at most one side is
/// restricted; otherwise an upper bound on the effective G-concurrence.
inline EffectiveConcurrence effective_g_concurrence(const DensityMatrix& rho, const KrausChannel& ch_a,
                                                    const KrausChannel& ch_b, std::size_t d,
                                                    const RoofOptions& opts = {}) {
  if (rho.dims() != Dims{d, d}) throw ValidationError("effective_g_concurrence: state dims must be [d, d]");
  EffectiveConcurrence out;
  const bool id_a = ch_a.is_identity_map();
  const bool id_b = ch_b.is_identity_map();
  out.q_a = id_a ? 1.0 : quality_factor(ch_a, d, opts);
  out.q_b = id_b ? 1.0 : quality_factor(ch_b, d, opts);
  out.g = g_concurrence(rho, d, opts);
  out.value = out.q_a * out.q_b * out.g;
  out.kind = (rho.is_pure() && (id_a || id_b)) ? BoundKind::kExact : BoundKind::kUpperBound;
  return out;
}

//------------------------------------------------------------------------------
// Superselection rules
//------------------------------------------------------------------------------

using NumberBlocks = std::vector<std::vector<std::size_t>>;

enum class BlockMeasure { kAuto, kEof, kGConcurrence };

struct SsrEntanglement {
  double value = 0;
  bool upper_bound = false;  // set for mixed input states
};

namespace detail {

inline void check_partition(const NumberBlocks& blocks, std::size_t d, const char* side) {
  std::vector<int> hits(d, 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw ValidationError(std::string("wiseman_vaccaro: empty block for ") + side);
    for (auto i : b) {
      if (i >= d) throw ValidationError(std::string("wiseman_vaccaro: block index out of range for ") + side);
      ++hits[i];
    }
  }
  for (auto h : hits) {
    if (h != 1) throw ValidationError(std::string("wiseman_vaccaro: blocks do not partition the basis of ") + side);
  }
}

inline double block_entanglement(const DensityMatrix& block, BlockMeasure measure, const RoofOptions& opts) {
  const auto ka = block.dims()[0], kb = block.dims()[1];
  if (ka == 1 || kb == 1) return 0.0;
  if (measure == BlockMeasure::kAuto) measure = (ka == 2 && kb == 2) ? BlockMeasure::kEof : BlockMeasure::kGConcurrence;
  if (measure == BlockMeasure::kEof) {
    if (ka != 2 || kb != 2) throw ValidationError("wiseman_vaccaro: entanglement of formation needs 2x2 blocks");
    return entanglement_of_formation_2q(block);
  }
  if (block.is_pure()) return g_concurrence_pure(block.principal_state(), ka, kb);
  if (ka != kb) throw ValidationError("wiseman_vaccaro: mixed G-concurrence needs square blocks");
  return g_concurrence(block, ka, opts);
}

}  // namespace detail

/// sum_n p_n E(rho_n / p_n) over local number blocks Pi_n = P_i (x) P_j.
///
/// The input is assumed to have a fixed global particle number, so the local
/// block pairs enumerate its number sectors.
inline SsrEntanglement wiseman_vaccaro(const DensityMatrix& rho, const NumberBlocks& blocks_a,
                                       const NumberBlocks& blocks_b, BlockMeasure measure = BlockMeasure::kAuto,
                                       const RoofOptions& opts = {}) {
  if (rho.dims().size() != 2) throw ValidationError("wiseman_vaccaro: state must be bipartite");
  const auto da = rho.dims()[0], db = rho.dims()[1];
  detail::check_partition(blocks_a, da, "party A");
  detail::check_partition(blocks_b, db, "party B");

  SsrEntanglement out;
  out.upper_bound = !rho.is_pure();
  for (const auto& ba : blocks_a) {
    for (const auto& bb : blocks_b) {
      const auto ka = static_cast<Eigen::Index>(ba.size()), kb = static_cast<Eigen::Index>(bb.size());
      ComplexMatrix sub(ka * kb, ka * kb);
      for (Eigen::Index i = 0; i < ka * kb; ++i) {
        const auto gi = static_cast<Eigen::Index>(ba[static_cast<std::size_t>(i / kb)] * db + bb[static_cast<std::size_t>(i % kb)]);
        for (Eigen::Index j = 0; j < ka * kb; ++j) {
          const auto gj = static_cast<Eigen::Index>(ba[static_cast<std::size_t>(j / kb)] * db + bb[static_cast<std::size_t>(j % kb)]);
          sub(i, j) = rho.matrix()(gi, gj);
        }
      }
      const double p = sub.trace().real();
      if (p < 1e-12) continue;
      const DensityMatrix block(sub / p, {ba.size(), bb.size()});
      out.value += p * detail::block_entanglement(block, measure, opts);
    }
  }
  return out;
}

//------------------------------------------------------------------------------
// Entanglement breaking
//------------------------------------------------------------------------------

struct BreakingProbe {
  double q = 0;
  std::optional<bool> ppt_separable;  // d = 2 only: Choi state has positive partial transpose
};

inline BreakingProbe entanglement_breaking_probe(const KrausChannel& ch, std::size_t d, double tol = kDefaultTol,
                                                 const RoofOptions& opts = {}) {
  BreakingProbe out;
  out.q = quality_factor(ch, d, opts);
  if (d == 2) {
    const ComplexMatrix pt = partial_transpose(choi_state(ch).matrix(), {2, 2}, {1});
    out.ppt_separable = min_eigenvalue(pt) >= -tol;
  }
  return out;
}

}  // namespace effent

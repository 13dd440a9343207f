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


#include <gtest/gtest.h>

#include <cmath>

#include "effent/channels.hpp"
#include "effent/random.hpp"

namespace effent {
namespace {

TEST(KrausChannel, RejectsIncompleteSets) {
  EXPECT_THROW(KrausChannel({identity(2) * 0.5}), ValidationError);
  EXPECT_NO_THROW(KrausChannel({identity(2) * 0.5}, false));
  EXPECT_THROW(KrausChannel({identity(2), identity(3)}), ValidationError);
  EXPECT_THROW(KrausChannel(std::vector<ComplexMatrix>{}), ValidationError);
}

TEST(AmplitudeDamping, ActsAsExpected) {
  const double g = 0.3;
  ComplexMatrix rho(2, 2);
  rho << 0.4, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.6;
  ComplexMatrix expect(2, 2);
  expect << 0.4 + g * 0.6, std::sqrt(1 - g) * Complex(0.1, 0.2), std::sqrt(1 - g) * Complex(0.1, -0.2), (1 - g) * 0.6;
  EXPECT_TRUE(approx_equal(effent::apply(amplitude_damping(g), rho), expect, 1e-15));
}

TEST(PhaseDamping, ScalesCoherences) {
  const double l = 0.64;
  ComplexMatrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  const ComplexMatrix out = effent::apply(phase_damping(l), rho);
  EXPECT_NEAR(out(0, 1).real(), 0.5 * std::sqrt(1 - l), 1e-15);
  EXPECT_NEAR(out(0, 0).real(), 0.5, 1e-15);
}

TEST(Rates, OutOfRangeThrows) {
  EXPECT_THROW(amplitude_damping(-0.1), ValidationError);
  EXPECT_THROW(phase_damping(1.5), ValidationError);
  EXPECT_THROW(depolarizing(1.2), ValidationError);
}

TEST(Depolarizing, MixesWithIdentity) {
  Rng rng(1);
  for (std::size_t d : {2u, 3u}) {
    const DensityMatrix rho = random_density_matrix({d}, rng);
    const double p = 0.35;
    const ComplexMatrix expect = (1 - p) * rho.matrix() + p * identity(d) / static_cast<double>(d);
    EXPECT_TRUE(approx_equal(effent::apply(depolarizing(p, d), rho.matrix()), expect, 1e-14));
  }
}

TEST(SsrDephasing, KillsCrossBlockCoherence) {
  Rng rng(2);
  const DensityMatrix rho = random_density_matrix({3}, rng);
  const ComplexMatrix out = effent::apply(ssr_dephasing({{0}, {1, 2}}), rho.matrix());
  EXPECT_NEAR(std::abs(out(0, 1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(out(0, 2)), 0, 1e-15);
  EXPECT_NEAR(std::abs(out(1, 2) - rho.matrix()(1, 2)), 0, 1e-15);
  EXPECT_THROW(ssr_dephasing({{0}, {0, 1}}), ValidationError);
  EXPECT_THROW(ssr_dephasing({{0}, {2}}), ValidationError);
}

TEST(Choi, IdentityGivesMaximallyEntangledState) {
  const DensityMatrix choi = choi_state(identity_channel(3));
  EXPECT_TRUE(approx_equal(choi.matrix(), max_entangled(3).projector(), 1e-14));
}

TEST(Choi, ActsOnSecondFactor) {
  // (1 (x) $)|phi><phi| for amplitude damping, written out entrywise.
  const double g = 0.25;
  const DensityMatrix choi = choi_state(amplitude_damping(g));
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = 0.5;
  expect(0, 3) = expect(3, 0) = 0.5 * std::sqrt(1 - g);
  expect(2, 2) = 0.5 * g;
  expect(3, 3) = 0.5 * (1 - g);
  EXPECT_TRUE(approx_equal(choi.matrix(), expect, 1e-15));
}

TEST(Adjoint, DualityOnRandomTriples) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const KrausChannel ch = random_channel(3, 2, 3, rng);
    const DensityMatrix rho = random_density_matrix({3}, rng);
    const ComplexMatrix p = random_hermitian(2, rng);
    const Complex lhs = (adjoint_apply(ch, p) * rho.matrix()).trace();
    const Complex rhs = (p * effent::apply(ch, rho.matrix())).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-13);
  }
}

TEST(Adjoint, UnitalForTracePreserving) {
  Rng rng(4);
  const KrausChannel ch = random_channel(2, 4, 2, rng);
  EXPECT_TRUE(approx_equal(adjoint_apply(ch, identity(4)), identity(2), 1e-13));
  const PovmSet pulled = adjoint_apply(ch, random_povm({4}, 3, rng));
  EXPECT_EQ(pulled.dim(), 2u);
}

TEST(Compose, OrderMatters) {
  const KrausChannel x = unitary_channel(pauli_x());
  const KrausChannel ad = amplitude_damping(1.0);
  const DensityMatrix zero(PureState(ket(2, 0), {2}));
  // Damp first, then flip: ends in |1>.
  EXPECT_NEAR(effent::apply(compose(x, ad), zero.matrix())(1, 1).real(), 1.0, 1e-15);
  // Flip first, then damp: ends in |0>.
  EXPECT_NEAR(effent::apply(compose(ad, x), zero.matrix())(0, 0).real(), 1.0, 1e-15);
}

TEST(TensorChannels, MatchesProductAction) {
  Rng rng(5);
  const KrausChannel a = random_channel(2, 2, 2, rng), b = random_channel(3, 2, 2, rng);
  const DensityMatrix ra = random_density_matrix({2}, rng), rb = random_density_matrix({3}, rng);
  const ComplexMatrix lhs = effent::apply(tensor_channels(a, b), tensor(ra.matrix(), rb.matrix()));
  EXPECT_TRUE(approx_equal(lhs, tensor(effent::apply(a, ra.matrix()), effent::apply(b, rb.matrix())), 1e-14));
}

TEST(IdentityMap, DetectsUnitaryIdentityOnly) {
  EXPECT_TRUE(identity_channel(2).is_identity_map());
  EXPECT_TRUE(phase_damping(0).is_identity_map());
  EXPECT_FALSE(phase_damping(0.1).is_identity_map());
  EXPECT_FALSE(unitary_channel(pauli_z()).is_identity_map());
}

TEST(PovmSet, Validation) {
  EXPECT_THROW(PovmSet({identity(2) * 0.5}, {2}), ValidationError);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = 1;
  ComplexMatrix rest = identity(2) - neg;
  EXPECT_THROW(PovmSet({neg, rest}, {2}), ValidationError);
  Rng rng(6);
  const PovmSet p = random_povm({2, 2}, 4, rng);
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.dim(), 4u);
}

}  // namespace
}  // namespace effent

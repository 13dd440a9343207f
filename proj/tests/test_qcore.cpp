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
#include <numbers>

#include "effent/qcore.hpp"
#include "effent/random.hpp"

namespace effent {
namespace {

// Brute-force partial trace over the second factor of a bipartite matrix.
ComplexMatrix trace_out_second(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            m(static_cast<Eigen::Index>(i * db + k), static_cast<Eigen::Index>(j * db + k));
  return out;
}

ComplexMatrix trace_out_first(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t k = 0; k < da; ++k)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            m(static_cast<Eigen::Index>(k * db + i), static_cast<Eigen::Index>(k * db + j));
  return out;
}

TEST(Tensor, FirstFactorVariesSlowest) {
  const ComplexMatrix t = tensor(projector(ket(2, 1)), projector(ket(3, 2)));
  EXPECT_EQ(t.rows(), 6);
  EXPECT_EQ(t(5, 5), Complex(1));
  EXPECT_NEAR(std::abs(t.sum()), 1.0, 1e-15);
}

TEST(Tensor, ListMatchesPairwise) {
  Rng rng(1);
  const ComplexMatrix a = random_hermitian(2, rng), b = random_hermitian(3, rng), c = random_hermitian(2, rng);
  EXPECT_TRUE(approx_equal(tensor({a, b, c}), tensor(tensor(a, b), c), 1e-14));
}

TEST(PartialTrace, MatchesBruteForce) {
  Rng rng(2);
  for (auto [da, db] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 2}, {4, 4}}) {
    const DensityMatrix rho = random_density_matrix({da, db}, rng);
    EXPECT_TRUE(approx_equal(partial_trace(rho.matrix(), {da, db}, {0}), trace_out_second(rho.matrix(), da, db), 1e-14));
    EXPECT_TRUE(approx_equal(partial_trace(rho.matrix(), {da, db}, {1}), trace_out_first(rho.matrix(), da, db), 1e-14));
  }
}

TEST(PartialTrace, ProductStateFactorizes) {
  Rng rng(3);
  const DensityMatrix a = random_density_matrix({2}, rng), b = random_density_matrix({3}, rng), c = random_density_matrix({2}, rng);
  const ComplexMatrix abc = tensor({a.matrix(), b.matrix(), c.matrix()});
  EXPECT_TRUE(approx_equal(partial_trace(abc, {2, 3, 2}, {0, 2}), tensor(a.matrix(), c.matrix()), 1e-14));
  EXPECT_TRUE(approx_equal(partial_trace(abc, {2, 3, 2}, {1}), b.matrix(), 1e-14));
}

TEST(PartialTrace, RejectsBadKeep) {
  const ComplexMatrix m = identity(4);
  EXPECT_THROW(partial_trace(m, {2, 2}, {1, 0}), ValidationError);
  EXPECT_THROW(partial_trace(m, {2, 2}, {2}), ValidationError);
  EXPECT_THROW(partial_trace(m, {2, 3}, {0}), ValidationError);
}

TEST(PartialTranspose, BellStateHasNegativeEigenvalue) {
  const DensityMatrix phi(max_entangled(2));
  EXPECT_NEAR(min_eigenvalue(partial_transpose(phi.matrix(), {2, 2}, {1})), -0.5, 1e-14);
  EXPECT_NEAR(min_eigenvalue(partial_transpose(phi.matrix(), {2, 2}, {0})), -0.5, 1e-14);
}

TEST(PartialTranspose, IsAnInvolution) {
  Rng rng(4);
  const DensityMatrix rho = random_density_matrix({2, 3}, rng);
  const ComplexMatrix twice = partial_transpose(partial_transpose(rho.matrix(), {2, 3}, {1}), {2, 3}, {1});
  EXPECT_TRUE(approx_equal(twice, rho.matrix(), 1e-15));
}

TEST(Rotations, MatchClosedForms) {
  const double t = 0.83;
  ComplexMatrix rx(2, 2);
  rx << std::cos(t / 2), Complex(0, -std::sin(t / 2)), Complex(0, -std::sin(t / 2)), std::cos(t / 2);
  EXPECT_TRUE(approx_equal(rotation_x(t), rx, 1e-15));
  ComplexMatrix rz = ComplexMatrix::Zero(2, 2);
  rz(0, 0) = std::polar(1.0, -t / 2);
  rz(1, 1) = std::polar(1.0, t / 2);
  EXPECT_TRUE(approx_equal(rotation_z(t), rz, 1e-15));
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(identity(2), {2}), ValidationError);  // trace 2
  ComplexMatrix nh = identity(2) / 2.0;
  nh(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(nh, {2}), ValidationError);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(neg, {2}), ValidationError);
  EXPECT_THROW(DensityMatrix(identity(4) / 4.0, {2, 3}), ValidationError);
}

TEST(DensityMatrix, PurityAndPrincipalState) {
  const DensityMatrix phi(max_entangled(3));
  EXPECT_TRUE(phi.is_pure());
  EXPECT_NEAR(std::abs(phi.principal_state().amplitudes().dot(max_entangled(3).amplitudes())), 1.0, 1e-12);
  EXPECT_NEAR(DensityMatrix::maximally_mixed({2, 2}).purity(), 0.25, 1e-15);
}

TEST(PureState, Validation) {
  EXPECT_THROW(PureState(ket(2, 0) * 2.0, {2}), ValidationError);
  EXPECT_THROW(PureState(ket(4, 0), {2, 3}), ValidationError);
  EXPECT_THROW(PureState::normalized(ComplexVector::Zero(2), {2}), ValidationError);
  EXPECT_THROW(max_entangled(1), ValidationError);
}

TEST(CoefficientMatrix, RowMajorAmplitudes) {
  const double h = 1 / std::sqrt(2.0);
  const ComplexMatrix a = coefficient_matrix(max_entangled(2), 2, 2);
  EXPECT_NEAR(std::abs(a(0, 0) - h), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 1) - h), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(0, 1)), 0, 1e-15);
}

TEST(TraceDistance, OrthogonalAndIdentical) {
  const DensityMatrix zero(PureState(ket(2, 0), {2})), one(PureState(ket(2, 1), {2}));
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed({2});
  EXPECT_NEAR(trace_distance(zero, mixed), 0.5, 1e-15);
}

TEST(EigHermitian, DescendingAndRejectsNonHermitian) {
  Rng rng(5);
  const ComplexMatrix h = random_hermitian(5, rng);
  const Eigensystem es = eig_hermitian(h);
  for (Eigen::Index k = 1; k < es.values.size(); ++k) EXPECT_GE(es.values(k - 1), es.values(k));
  EXPECT_TRUE(approx_equal(es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint(), h, 1e-12));
  ComplexMatrix nh = h;
  nh(0, 1) += 1.0;
  EXPECT_THROW(eig_hermitian(nh), ValidationError);
}

TEST(Random, IsometryAndStatesAreValid) {
  Rng rng(6);
  const ComplexMatrix v = random_isometry(5, 3, rng);
  EXPECT_TRUE(approx_equal(v.adjoint() * v, identity(3), 1e-13));
  EXPECT_THROW(random_isometry(2, 3, rng), ValidationError);
  const DensityMatrix r1 = random_density_matrix({2, 2}, 1, rng);
  EXPECT_TRUE(r1.is_pure(1e-10));
  Rng a(9), b(9);
  EXPECT_TRUE(approx_equal(random_unitary(3, a), random_unitary(3, b), 0));
}

}  // namespace
}  // namespace effent

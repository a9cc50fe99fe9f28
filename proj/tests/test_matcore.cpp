#include <gtest/gtest.h>

#include "bccanon/matcore.hpp"

using namespace bccanon;

TEST(Matcore, ToleranceDefaultsAreValid) {
  Tolerances t;
  EXPECT_TRUE(t.valid());
  t.rank_rel = 0.0;
  EXPECT_FALSE(t.valid());
  t = {};
  t.residual_abs = 1.0;
  EXPECT_FALSE(t.valid());
}

TEST(Matcore, RandomUnitaryIsUnitaryAndDeterministic) {
  for (int m = 1; m <= 12; ++m) {
    const ComplexMatrix u = random_unitary(m, 42 + m);
    EXPECT_LT(unitarity_residual(u), 1e-13) << "m=" << m;
    EXPECT_EQ(u, random_unitary(m, 42 + m));
  }
  EXPECT_NE(random_unitary(4, 1), random_unitary(4, 2));
  EXPECT_THROW(random_unitary(0, 1), Error);
}

TEST(Matcore, HaarFirstEntryMagnitudeMoment) {
  // For Haar U(m), E|u11|^2 = 1/m.
  const int m = 4;
  const int samples = 4000;
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) acc += std::norm(random_unitary(m, s)(0, 0));
  EXPECT_NEAR(acc / samples, 1.0 / m, 0.02);
}

TEST(Matcore, RandomUnitaryDiagonalPhasesAreNotBiased) {
  // Without the phase fix the diagonal of a QR-based sample is real-positive.
  double mean_im = 0.0;
  for (int s = 0; s < 2000; ++s) mean_im += random_unitary(3, s)(0, 0).imag();
  EXPECT_NEAR(mean_im / 2000, 0.0, 0.05);
}

TEST(Matcore, NumericalRank) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  EXPECT_EQ(numerical_rank(m), 0);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-3;
  m(2, 2) = 1e-14;
  EXPECT_EQ(numerical_rank(m), 2);
  const ComplexMatrix u = random_unitary(4, 3);
  EXPECT_EQ(numerical_rank(u * m * random_unitary(4, 4)), 2);
  EXPECT_EQ(numerical_rank(ComplexMatrix::Identity(3, 5)), 3);
}

TEST(Matcore, SvdReconstructsRectangular) {
  const ComplexMatrix m = random_unitary(5, 9).topLeftCorner(3, 5);
  const Svd s = singular_value_decomposition(m);
  EXPECT_LT((s.reconstruct() - m).norm(), 1e-13);
  EXPECT_LT(unitarity_residual(s.u), 1e-13);
  EXPECT_LT(unitarity_residual(s.v), 1e-13);
  for (Eigen::Index i = 1; i < s.sigma.size(); ++i) EXPECT_LE(s.sigma(i), s.sigma(i - 1));
}

TEST(Matcore, HermitianEigen) {
  const ComplexMatrix u = random_unitary(4, 5);
  RealVector d(4);
  d << -2.0, 0.5, 1.0, 3.0;
  const ComplexMatrix h = u * real_diag(d) * u.adjoint();
  const HermitianEigen e = hermitian_eigendecomposition(h);
  EXPECT_LT((e.eigenvalues - d).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((e.eigenvectors * real_diag(e.eigenvalues) * e.eigenvectors.adjoint() - h).norm(), 1e-12);

  ComplexMatrix bad = h;
  bad(0, 1) += 1e-3;
  EXPECT_THROW(hermitian_eigendecomposition(bad), Error);
  try {
    hermitian_eigendecomposition(bad);
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotHermitian);
  }
}

TEST(Matcore, NonFiniteRejected) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(1, 0) = {std::nan(""), 0.0};
  EXPECT_FALSE(all_finite(m));
  try {
    singular_values(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Matcore, BlockDiagAndStack) {
  const ComplexMatrix a = ComplexMatrix::Constant(1, 2, 1.0);
  const ComplexMatrix b = ComplexMatrix::Constant(2, 1, 2.0);
  const ComplexMatrix d = block_diag({a, b});
  ASSERT_EQ(d.rows(), 3);
  ASSERT_EQ(d.cols(), 3);
  EXPECT_EQ(d(0, 1), ComplexScalar(1.0));
  EXPECT_EQ(d(2, 2), ComplexScalar(2.0));
  EXPECT_EQ(d(0, 2), ComplexScalar(0.0));
  EXPECT_EQ(hstack(b, b).cols(), 2);
}

TEST(Matcore, RandomInvertibleCondition) {
  for (int s = 0; s < 20; ++s) {
    const RealVector sv = singular_values(random_invertible(6, s, 50.0));
    EXPECT_LE(sv(0) / sv(5), 50.0 + 1e-9);
  }
}

TEST(Matcore, PrincipalAngles) {
  const ComplexMatrix x = random_unitary(6, 1).topRows(3);
  const ComplexMatrix g = random_invertible(3, 2);
  EXPECT_LT(max_principal_angle_sine(x, g * x), 1e-12);
  const ComplexMatrix y = random_unitary(6, 1).bottomRows(3);
  EXPECT_NEAR(max_principal_angle_sine(x, y), 1.0, 1e-12);
}

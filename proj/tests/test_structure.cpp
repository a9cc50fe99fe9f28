#include <gtest/gtest.h>

#include "bccanon/structure.hpp"

using namespace bccanon;

TEST(OrderSpec, Cases) {
  EXPECT_EQ(OrderSpec::from_size(5).parity(), Parity::EvenN);
  EXPECT_EQ(OrderSpec::from_size(3).parity(), Parity::OddN);
  EXPECT_EQ(OrderSpec::from_size(7).parity(), Parity::OddN);
  EXPECT_EQ(OrderSpec::from_size(9).n(), 4);
  EXPECT_EQ(OrderSpec::from_size(6).parity(), Parity::EvenOrder);
  EXPECT_EQ(OrderSpec::from_size(6).n(), 3);
  EXPECT_THROW(OrderSpec::from_size(1), Error);
  EXPECT_THROW(OrderSpec::from_size(0), Error);
}

TEST(Symplectic, C5Explicit) {
  // Rows: (0 0 0 0 -1), (0 0 0 1 0), (0 0 -1 0 0), (0 1 0 0 0), (-1 0 0 0 0).
  Eigen::Matrix<double, 5, 5> expected;
  expected << 0, 0, 0, 0, -1,
              0, 0, 0, 1, 0,
              0, 0, -1, 0, 0,
              0, 1, 0, 0, 0,
              -1, 0, 0, 0, 0;
  EXPECT_EQ(symplectic_matrix(5), expected.cast<ComplexScalar>());
}

TEST(Symplectic, SquareIsPlusMinusIdentity) {
  for (int m = 1; m <= 12; ++m) {
    const ComplexMatrix c = symplectic_matrix(m);
    const double sign = m % 2 == 1 ? 1.0 : -1.0;
    EXPECT_EQ(c * c, sign * ComplexMatrix::Identity(m, m)) << "m=" << m;
    EXPECT_EQ(c.adjoint(), sign * c) << "m=" << m;
  }
}

TEST(Eigenbasis, UnitaryAndDiagonalizing) {
  for (int n = 1; n <= 5; ++n) {
    const OrderSpec spec = OrderSpec::odd_order(n);
    const int m = spec.m();
    const EigenBasis eb = eigenbasis(spec);
    EXPECT_LT(unitarity_residual(eb.v), 1e-14) << "n=" << n;
    const ComplexMatrix signature = block_diag({-ComplexMatrix::Identity(m, m), ComplexMatrix::Identity(m, m)});
    const ComplexMatrix d = eb.v.adjoint() * signature_matrix(m) * eb.v;
    EXPECT_LT((d - signature).cwiseAbs().maxCoeff(), 1e-14) << "n=" << n;
  }
}

TEST(Eigenbasis, FiveByFiveLayout) {
  // n = 2: the middle unit vector sits in the first column block of each half.
  const EigenBasis eb = eigenbasis(OrderSpec::from_size(5));
  EXPECT_EQ(eb.v(2, 2), ComplexScalar(1.0));
  EXPECT_EQ(eb.v(7, 7), ComplexScalar(1.0));
  EXPECT_NEAR(eb.v(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-16);
}

TEST(Eigenbasis, RejectsEvenSize) {
  EXPECT_THROW(eigenbasis(OrderSpec::from_size(4)), Error);
  EXPECT_THROW(q4_matrix(OrderSpec::from_size(4)), Error);
}

TEST(Q4, OneByOneCase) {
  // n = 1: T = [1 0 -1; 0 sqrt2 0; 1 0 1].
  const ComplexMatrix q4 = q4_matrix(OrderSpec::odd_order(1));
  Eigen::Matrix3d t;
  t << 1, 0, -1, 0, std::sqrt(2.0), 0, 1, 0, 1;
  EXPECT_LT((q4.topLeftCorner(3, 3) - t.cast<ComplexScalar>()).norm(), 1e-15);
  EXPECT_LT((q4.bottomRightCorner(3, 3) - t.cast<ComplexScalar>()).norm(), 1e-15);
  EXPECT_EQ(q4.topRightCorner(3, 3).norm(), 0.0);
}

TEST(Q4, ScaledUnitary) {
  for (int n = 1; n <= 5; ++n) {
    const ComplexMatrix q4 = q4_matrix(OrderSpec::odd_order(n)) / std::sqrt(2.0);
    EXPECT_LT(unitarity_residual(q4), 1e-14) << "n=" << n;
  }
}

TEST(EvenZ, FirstOrderValue) {
  // n = 1: a C_1 = i * (-1) = -i.
  const ComplexScalar i(0.0, 1.0);
  Eigen::Matrix4cd expected;
  expected << 1.0, -i, 0.0, 0.0,
              1.0, i, 0.0, 0.0,
              0.0, 0.0, 1.0, -i,
              0.0, 0.0, 1.0, i;
  expected /= std::sqrt(2.0);
  EXPECT_LT((even_order_Z(1) - ComplexMatrix(expected)).norm(), 1e-15);
}

TEST(EvenZ, UnitaryAndDiagonalizing) {
  for (int n = 1; n <= 5; ++n) {
    const ComplexMatrix z = even_order_Z(n);
    EXPECT_LT(unitarity_residual(z), 1e-14);
    // Z sig Z* is diagonal with entries of modulus 1 (the +/- i eigenvalues).
    const ComplexMatrix d = z * signature_matrix(2 * n) * z.adjoint();
    const ComplexMatrix off = d - ComplexMatrix(d.diagonal().asDiagonal());
    EXPECT_LT(off.norm(), 1e-14) << "n=" << n;
    for (Eigen::Index k = 0; k < d.rows(); ++k) {
      EXPECT_NEAR(std::abs(d(k, k).imag()), 1.0, 1e-14);
      EXPECT_NEAR(d(k, k).real(), 0.0, 1e-14);
    }
  }
}

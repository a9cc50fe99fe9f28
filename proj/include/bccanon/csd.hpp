#pragma once

// CS decomposition of a unitary W partitioned as (p + q) x (p + q), |p - q| <= 1:
//
//   W = diag(U1, U2) * Core * diag(V1, V2),   Core = [ C 0 S ]
//                                                     [ 0 1 0 ]
//                                                     [-S 0 C ]
//
// with C, S real nonnegative diagonal of size k = min(p, q) and C^2 + S^2 = I.
// When p > q the structural 1 sits at index p (last row of the first block);
// when q > p it sits at index p + 1 (first row of the second block); when
// p == q there is none.

#include <cmath>
#include <string>

#include "bccanon/matcore.hpp"

namespace bccanon {

struct CsFactors {
  int p = 0;
  int q = 0;
  ComplexMatrix u1, u2, v1, v2;
  RealVector cos;  // non-increasing, length min(p, q)
  RealVector sin;

  int k() const { return static_cast<int>(cos.size()); }

  /// The central (p+q) x (p+q) block.
  ComplexMatrix core() const {
    const int kk = k();
    ComplexMatrix c = ComplexMatrix::Zero(p + q, p + q);
    // Index of the first paired row in each block.
    const int top = 0;
    const int bottom = p + (q > p ? 1 : 0);
    for (int i = 0; i < kk; ++i) {
      c(top + i, top + i) = cos(i);
      c(top + i, bottom + i) = sin(i);
      c(bottom + i, top + i) = -sin(i);
      c(bottom + i, bottom + i) = cos(i);
    }
    if (p > q) c(p - 1, p - 1) = 1.0;
    if (q > p) c(p, p) = 1.0;
    return c;
  }
};

inline ComplexMatrix cs_reconstruct(const CsFactors& f) {
  return block_diag({f.u1, f.u2}) * f.core() * block_diag({f.v1, f.v2});
}

namespace detail {

/// Balanced or q = p + 1 partition. The structural 1 (if any) is the first
/// row/column of the second block.
inline CsFactors cs_decompose_leading(const ComplexMatrix& w, int p, int q) {
  const int k = p;
  const int e = q - p;  // 0 or 1
  const double pivot = 1.0 / std::sqrt(2.0);

  const ComplexMatrix w11 = w.topLeftCorner(p, p);
  const ComplexMatrix w12 = w.topRightCorner(p, q);
  const ComplexMatrix w21 = w.bottomLeftCorner(q, p);
  const ComplexMatrix w22 = w.bottomRightCorner(q, q);

  CsFactors f;
  f.p = p;
  f.q = q;

  // W11 = U1 C V1
  const Svd svd = singular_value_decomposition(w11);
  f.u1 = svd.u;
  f.v1 = svd.v.adjoint();
  RealVector c = svd.sigma.cwiseMin(1.0).cwiseMax(0.0);

  // Where c > 1/sqrt2 the sines are small and the W11 singular vectors of
  // nearly equal cosines are mixed at the level eps / gap. The sine side
  // resolves them: rotate those rows of V1 (and columns of U1) by the right
  // singular vectors of the matching columns of W21 V1*.
  int dominant = 0;
  while (dominant < k && c(dominant) > pivot) ++dominant;
  if (dominant > 1) {
    const ComplexMatrix cols = w21 * f.v1.topRows(dominant).adjoint();
    const Svd side = singular_value_decomposition(cols);
    // Singular values descend; sines ascend along the block.
    const ComplexMatrix rot = side.v.rowwise().reverse();
    f.v1.topRows(dominant) = (rot.adjoint() * f.v1.topRows(dominant)).eval();
    f.u1.leftCols(dominant) = (f.u1.leftCols(dominant) * rot).eval();
  }

  // Columns of W21 V1* are mutually orthogonal with norms s_i; s ascends
  // because c descends. Householder QR on the columns taken in reverse
  // (largest first) yields an exactly unitary U2 whatever the tiny columns do.
  const ComplexMatrix x21 = w21 * f.v1.adjoint();
  ComplexMatrix reversed(q, k);
  for (int j = 0; j < k; ++j) reversed.col(j) = x21.col(k - 1 - j);
  Eigen::HouseholderQR<ComplexMatrix> qr(reversed);
  const ComplexMatrix qfull = qr.householderQ() * ComplexMatrix::Identity(q, q);
  const ComplexMatrix r = qr.matrixQR();

  RealVector s(k);
  f.u2 = ComplexMatrix::Zero(q, q);
  for (int j = 0; j < k; ++j) {
    const int i = k - 1 - j;
    const ComplexScalar rjj = r(j, j);
    const double mag = std::abs(rjj);
    const ComplexScalar phase = mag > 0.0 ? rjj / mag : ComplexScalar(1.0);
    // W21 V1* e_i = -s_i U2 e_{e+i}
    f.u2.col(e + i) = -qfull.col(j) * phase;
    s(i) = c(i) > pivot ? mag : std::sqrt((1.0 - c(i)) * (1.0 + c(i)));
  }
  if (e == 1) f.u2.col(0) = qfull.col(k);

  // Rows of V2: from U2* W22 where the cosine dominates, from U1* W12 where
  // the sine does. The extra row (e == 1) always comes from W22.
  const ComplexMatrix y22 = f.u2.adjoint() * w22;
  const ComplexMatrix y12 = f.u1.adjoint() * w12;
  ComplexMatrix v2(q, q);
  if (e == 1) v2.row(0) = y22.row(0);
  for (int i = 0; i < k; ++i) {
    if (c(i) > pivot) {
      v2.row(e + i) = y22.row(e + i) / c(i);
    } else {
      v2.row(e + i) = y12.row(i) / s(i);
    }
  }
  // Rows built from different blocks agree only to rounding; snap to the
  // nearest unitary so the corner factor is unitary to machine precision.
  f.v2 = nearest_unitary(v2);

  f.cos = c;
  f.sin = s;
  return f;
}

}  // namespace detail

/// CS decomposition with cos non-increasing. Factors are not unique; only the
/// reconstruction and the cos/sin spectra are contractual.
inline CsFactors cs_decompose(const ComplexMatrix& w, int p, int q, const Tolerances& tol = {}) {
  if (p < 0 || q < 0 || p + q != w.rows() || w.rows() != w.cols()) {
    throw Error(ErrorCode::PartitionMismatch, "partition " + std::to_string(p) + "+" + std::to_string(q) +
                                                  " does not match a " + std::to_string(w.rows()) + "x" +
                                                  std::to_string(w.cols()) + " matrix");
  }
  if (std::abs(p - q) > 1) throw Error(ErrorCode::PartitionMismatch, "|p - q| must be at most 1");
  require_finite(w, "cs_decompose input");
  if (unitarity_residual(w) > tol.unitary_abs) throw Error(ErrorCode::NotUnitary, "W is not unitary within tolerance");

  if (p <= q) return detail::cs_decompose_leading(w, p, q);

  // p = q + 1: decompose the block-swapped matrix [W22 W21; W12 W11] with
  // partition (q, p), then map back. With k = q,
  //   V1 = P  V2~,  P  = [0 -I_k; 1 0]   (so that [-S 0] P = [0 S])
  //   U1 = U2~ P',  P' = [0 1; -I_k 0]   (so that P' [S; 0] = [0; -S])
  // and P' diag(1, C) ... P maps Core~ onto Core. Both are signed permutations.
  const int k = q;
  ComplexMatrix swapped(p + q, p + q);
  swapped << w.bottomRightCorner(q, q), w.bottomLeftCorner(q, p), w.topRightCorner(p, q), w.topLeftCorner(p, p);
  const CsFactors t = detail::cs_decompose_leading(swapped, q, p);

  ComplexMatrix perm = ComplexMatrix::Zero(p, p);
  perm.block(0, 1, k, k) = -ComplexMatrix::Identity(k, k);
  perm(k, 0) = 1.0;
  ComplexMatrix perm_left = ComplexMatrix::Zero(p, p);
  perm_left(0, k) = 1.0;
  perm_left.block(1, 0, k, k) = -ComplexMatrix::Identity(k, k);

  CsFactors f;
  f.p = p;
  f.q = q;
  f.u1 = t.u2 * perm_left;
  f.v1 = perm * t.v2;
  f.u2 = t.u1;
  f.v2 = t.v1;
  f.cos = t.cos;
  f.sin = t.sin;
  return f;
}

}  // namespace bccanon

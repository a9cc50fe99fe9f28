#pragma once

// Dense complex matrix kernels shared by every other header.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "bccanon/error.hpp"

namespace bccanon {

using ComplexScalar = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds. Every field must lie in (0, 1).
struct Tolerances {
  double rank_rel = 1e-10;      // singular value cutoff relative to sigma_max
  double unitary_abs = 1e-10;   // max |U*U - I| entry; also the Hermiticity bound
  double residual_abs = 1e-8;   // Frobenius bound for reconstruction checks
  double unit_eig_abs = 1e-8;   // |lambda - 1| below this counts as a unit eigenvalue

  bool valid() const {
    auto ok = [](double v) { return v > 0.0 && v < 1.0; };
    return ok(rank_rel) && ok(unitary_abs) && ok(residual_abs) && ok(unit_eig_abs);
  }
};

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(what) + " has a NaN or Inf entry");
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |U*U - I| over all entries.
inline double unitarity_residual(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw Error(ErrorCode::DimensionMismatch, "unitarity_residual needs a square matrix");
  const ComplexMatrix g = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return max_abs(g);
}

inline double hermiticity_residual(const ComplexMatrix& h) {
  return max_abs(h - h.adjoint());
}

/// Block-diagonal concatenation; blocks may be rectangular.
inline ComplexMatrix block_diag(std::initializer_list<ComplexMatrix> blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

inline ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right) {
  ComplexMatrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

inline ComplexMatrix real_diag(const RealVector& d) {
  return d.cast<ComplexScalar>().asDiagonal();
}

struct HermitianEigen {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns
};

inline HermitianEigen hermitian_eigendecomposition(const ComplexMatrix& h, const Tolerances& tol = {}) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  require_finite(h, "hermitian_eigendecomposition input");
  if (hermiticity_residual(h) > tol.unitary_abs) {
    throw Error(ErrorCode::NotHermitian, "max |H - H*| exceeds tolerance");
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hs);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct Svd {
  ComplexMatrix u;   // rows x rows, unitary
  RealVector sigma;  // min(rows, cols), non-increasing
  ComplexMatrix v;   // cols x cols, unitary; M = U diag(sigma) V*

  /// U diag(sigma) V*, rectangular as needed.
  ComplexMatrix reconstruct() const {
    const Eigen::Index k = sigma.size();
    return u.leftCols(k) * real_diag(sigma) * v.leftCols(k).adjoint();
  }
};

inline Svd singular_value_decomposition(const ComplexMatrix& m) {
  require_finite(m, "singular_value_decomposition input");
  if (m.size() == 0) {
    return {ComplexMatrix::Identity(m.rows(), m.rows()), RealVector(0),
            ComplexMatrix::Identity(m.cols(), m.cols())};
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "SVD did not converge");
  }
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

inline RealVector singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values input");
  if (m.size() == 0) return RealVector(0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "SVD did not converge");
  }
  return svd.singularValues();
}

/// Number of singular values above rank_rel * sigma_max.
inline int numerical_rank(const ComplexMatrix& m, const Tolerances& tol = {}) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol.rank_rel * s(0);
  return static_cast<int>((s.array() > cutoff).count());
}

/// Haar-distributed m x m unitary, deterministic in `seed`.
///
/// QR of a complex Ginibre matrix, with the columns of Q rescaled so the
/// diagonal of R is positive real. Without that phase fix the distribution
/// depends on the QR implementation's sign choices and is not Haar.
inline ComplexMatrix random_unitary(int m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::DimensionMismatch, "random_unitary needs m >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  ComplexMatrix g(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = {re, im};
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const double mag = std::abs(r(j, j));
    const ComplexScalar phase = mag > 0.0 ? r(j, j) / mag : ComplexScalar(1.0);
    q.col(j) *= phase;
  }
  return q;
}

/// Nearest unitary in Frobenius norm (the unitary polar factor).
inline ComplexMatrix nearest_unitary(const ComplexMatrix& m) {
  const Svd s = singular_value_decomposition(m);
  return s.u * s.v.adjoint();
}

/// Random invertible matrix with condition number at most `max_cond`.
inline ComplexMatrix random_invertible(int m, std::uint64_t seed, double max_cond = 50.0) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> sv(1.0, max_cond);
  RealVector d(m);
  for (int i = 0; i < m; ++i) d(i) = sv(rng);
  d(0) = 1.0;
  return random_unitary(m, seed) * real_diag(d) * random_unitary(m, seed + 0x5bd1e995ULL);
}

/// Sines of the principal angles between the row spaces of `a` and `b`
/// (both assumed full row rank). Returns the largest one.
inline double max_principal_angle_sine(const ComplexMatrix& a, const ComplexMatrix& b) {
  auto row_basis = [](const ComplexMatrix& x) {
    const Svd s = singular_value_decomposition(x);
    const Eigen::Index k = std::min(x.rows(), x.cols());
    return ComplexMatrix(s.v.leftCols(k));  // orthonormal basis of range(x*)
  };
  const ComplexMatrix qa = row_basis(a);
  const ComplexMatrix qb = row_basis(b);
  const ComplexMatrix residual = qb - qa * (qa.adjoint() * qb);
  const RealVector s = singular_values(residual);
  return s.size() == 0 ? 0.0 : s(0);
}

}  // namespace bccanon

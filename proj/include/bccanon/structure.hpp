#pragma once

// Fixed structural matrices: the signed antidiagonal C_m, the explicit
// eigenbasis V of C_m (+) (-C_m) for odd m, the Q4 column transform and the
// even-order basis Z.
//
// All formulas below are written with 1-based indices (r, s) and stored
// 0-based; entry (r, s) lives at (r - 1, s - 1).

#include <cmath>
#include <string>

#include "bccanon/matcore.hpp"

namespace bccanon {

enum class Parity { OddN, EvenN, EvenOrder };

constexpr const char* to_string(Parity p) {
  switch (p) {
    case Parity::OddN: return "OddN";
    case Parity::EvenN: return "EvenN";
    case Parity::EvenOrder: return "EvenOrder";
  }
  return "?";
}

/// Matrix size m together with the derived n and case split.
/// m = 2n+1 gives OddN / EvenN by the parity of n; m = 2n gives EvenOrder.
class OrderSpec {
 public:
  static OrderSpec from_size(int m) {
    if (m < 2) throw Error(ErrorCode::UnsupportedOrder, "matrix size must be at least 2, got " + std::to_string(m));
    if (m % 2 == 0) return OrderSpec(m, m / 2, Parity::EvenOrder);
    const int n = (m - 1) / 2;
    return OrderSpec(m, n, n % 2 == 1 ? Parity::OddN : Parity::EvenN);
  }
  static OrderSpec odd_order(int n) { return from_size(2 * n + 1); }
  static OrderSpec even_order(int n) { return from_size(2 * n); }

  int m() const { return m_; }
  int n() const { return n_; }
  Parity parity() const { return parity_; }
  bool is_odd_order() const { return parity_ != Parity::EvenOrder; }

  friend bool operator==(const OrderSpec&, const OrderSpec&) = default;

 private:
  OrderSpec(int m, int n, Parity p) : m_(m), n_(n), parity_(p) {}
  int m_;
  int n_;
  Parity parity_;
};

inline double sign_pow(int k) { return k % 2 == 0 ? 1.0 : -1.0; }  // (-1)^k

/// C_m with entry (r, m+1-r) = (-1)^r.
inline ComplexMatrix symplectic_matrix(int m) {
  if (m < 1) throw Error(ErrorCode::DimensionMismatch, "symplectic_matrix needs m >= 1");
  ComplexMatrix c = ComplexMatrix::Zero(m, m);
  for (int r = 1; r <= m; ++r) c(r - 1, m - r) = sign_pow(r);
  return c;
}

/// C_m (+) (-C_m).
inline ComplexMatrix signature_matrix(int m) {
  const ComplexMatrix c = symplectic_matrix(m);
  return block_diag({c, -c});
}

struct EigenBasis {
  ComplexMatrix v;  // 2m x 2m; first m columns eigenvalue -1, last m eigenvalue +1
  ComplexMatrix v11, v12, v21, v22;
};

namespace detail {

inline void require_odd_order(const OrderSpec& spec, const char* op) {
  if (!spec.is_odd_order()) {
    throw Error(ErrorCode::UnsupportedOrder, std::string(op) + " is defined for odd sizes m = 2n+1 only");
  }
}

/// (1/sqrt2) (I_n; 0; sign * C_n), a (2n+1) x n block.
inline ComplexMatrix half_basis(int n, double sign) {
  ComplexMatrix b = ComplexMatrix::Zero(2 * n + 1, n);
  b.topRows(n).setIdentity();
  b.bottomRows(n) = sign * symplectic_matrix(n);
  return b / std::sqrt(2.0);
}

}  // namespace detail

/// The explicit diagonalizing basis V, odd sizes only.
///
/// Column layout (each entry a block column of the 2m x 2m matrix):
///   odd n:  ( V_-1  0    0    V_1  v  0    )
///           ( 0     v    V_1  0    0  V_-1 )
///   even n: ( V_-1  v    0    V_1  0  0    )
///           ( 0     0    V_1  0    v  V_-1 )
/// with V_1 = (1/sqrt2)(I_n; 0; (-1)^{n+1} C_n), V_-1 = (1/sqrt2)(I_n; 0; (-1)^n C_n)
/// and v the (n+1)-th unit vector.
inline EigenBasis eigenbasis(const OrderSpec& spec) {
  detail::require_odd_order(spec, "eigenbasis");
  const int n = spec.n();
  const int m = spec.m();
  const ComplexMatrix vp = detail::half_basis(n, sign_pow(n + 1));
  const ComplexMatrix vm = detail::half_basis(n, sign_pow(n));

  ComplexMatrix v = ComplexMatrix::Zero(2 * m, 2 * m);
  const bool odd_n = spec.parity() == Parity::OddN;
  // top half
  v.block(0, 0, m, n) = vm;
  v.block(0, m, m, n) = vp;
  // bottom half
  v.block(m, n + 1, m, n) = vp;
  v.block(m, m + n + 1, m, n) = vm;
  if (odd_n) {
    v(m + n, n) = 1.0;   // bottom, column n+1 of the first half
    v(n, m + n) = 1.0;   // top, column n+1 of the second half
  } else {
    v(n, n) = 1.0;
    v(m + n, m + n) = 1.0;
  }

  EigenBasis eb;
  eb.v11 = v.block(0, 0, m, m);
  eb.v12 = v.block(0, m, m, m);
  eb.v21 = v.block(m, 0, m, m);
  eb.v22 = v.block(m, m, m, m);
  eb.v = std::move(v);
  return eb;
}

/// Q4 = diag(T, T) with T = [I_n 0 (-1)^{n+1} C_n^*; 0 sqrt2 0; I_n 0 (-1)^n C_n^*].
inline ComplexMatrix q4_matrix(const OrderSpec& spec) {
  detail::require_odd_order(spec, "q4_matrix");
  const int n = spec.n();
  const int m = spec.m();
  const ComplexMatrix cn_adj = symplectic_matrix(n).adjoint();
  ComplexMatrix t = ComplexMatrix::Zero(m, m);
  t.block(0, 0, n, n).setIdentity();
  t.block(0, n + 1, n, n) = sign_pow(n + 1) * cn_adj;
  t(n, n) = std::sqrt(2.0);
  t.block(n + 1, 0, n, n).setIdentity();
  t.block(n + 1, n + 1, n, n) = sign_pow(n) * cn_adj;
  return block_diag({t, t});
}

/// Z = (1/sqrt2) [I I 0 0; I -I 0 0; 0 0 I I; 0 0 I -I] * diag(I, a C_n, I, a C_n)
/// with a = (-1)^{n+1} i. Unitary, 4n x 4n.
inline ComplexMatrix even_order_Z(int n) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "even_order_Z needs n >= 1");
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix mix = ComplexMatrix::Zero(4 * n, 4 * n);
  for (int half = 0; half < 2; ++half) {
    const int o = 2 * n * half;
    mix.block(o, o, n, n) = id;
    mix.block(o, o + n, n, n) = id;
    mix.block(o + n, o, n, n) = id;
    mix.block(o + n, o + n, n, n) = -id;
  }
  mix /= std::sqrt(2.0);
  const ComplexMatrix a = ComplexScalar(0.0, sign_pow(n + 1)) * symplectic_matrix(n);
  return mix * block_diag({id, a, id, a});
}

}  // namespace bccanon

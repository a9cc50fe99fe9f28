#pragma once

// Self-adjoint boundary pairs (A:B): verification, synthesis from a unitary
// W, recovery of W, and the assembled canonical forms.
//
// Odd sizes m = 2n+1 follow
//   (A:B) ~ (V11* + W V12* : V21* + W V22*)
//         = (1/sqrt2) Q1 * core * Q2,
// with the CSD of W split (n+1, n) for odd n and (n, n+1) for even n.
// Even sizes m = 2n use the basis Z and a balanced (n, n) split.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "bccanon/csd.hpp"
#include "bccanon/matcore.hpp"
#include "bccanon/structure.hpp"

namespace bccanon {

struct BoundaryPair {
  ComplexMatrix a;
  ComplexMatrix b;
  OrderSpec spec;

  static BoundaryPair from(ComplexMatrix a, ComplexMatrix b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "A and B must be square and of equal size");
    }
    require_finite(a, "A");
    require_finite(b, "B");
    const OrderSpec spec = OrderSpec::from_size(static_cast<int>(a.rows()));
    return {std::move(a), std::move(b), spec};
  }

  /// The m x 2m matrix (A:B).
  ComplexMatrix ab() const { return hstack(a, b); }

  /// Row-equivalent pair G(A:B).
  BoundaryPair left_multiplied(const ComplexMatrix& g) const { return {g * a, g * b, spec}; }
};

enum class BcType { Separated, Mixed, Coupled };

constexpr const char* to_string(BcType t) {
  switch (t) {
    case BcType::Separated: return "Separated";
    case BcType::Mixed: return "Mixed";
    case BcType::Coupled: return "Coupled";
  }
  return "?";
}

struct SelfAdjointReport {
  int m = 0;
  int rank_ab = 0;
  bool rank_ok = false;
  double gram_residual = 0.0;  // ||A C A* - B C B*||_F
  bool gram_ok = false;
  int rank_a = 0;
  int rank_b = 0;

  bool self_adjoint() const { return rank_ok && gram_ok; }
};

inline SelfAdjointReport check_self_adjoint(const BoundaryPair& pair, const Tolerances& tol = {}) {
  const int m = pair.spec.m();
  const ComplexMatrix c = symplectic_matrix(m);
  SelfAdjointReport rep;
  rep.m = m;
  rep.rank_ab = numerical_rank(pair.ab(), tol);
  rep.rank_ok = rep.rank_ab == m;
  rep.gram_residual = (pair.a * c * pair.a.adjoint() - pair.b * c * pair.b.adjoint()).norm();
  rep.gram_ok = rep.gram_residual <= tol.residual_abs;
  rep.rank_a = numerical_rank(pair.a, tol);
  rep.rank_b = numerical_rank(pair.b, tol);
  return rep;
}

namespace detail {

inline void require_self_adjoint(const BoundaryPair& pair, const Tolerances& tol) {
  const SelfAdjointReport rep = check_self_adjoint(pair, tol);
  if (!rep.rank_ok) {
    throw Error(ErrorCode::RankDeficient, "rank(A:B) = " + std::to_string(rep.rank_ab) + " < " +
                                              std::to_string(rep.m));
  }
  if (!rep.gram_ok) {
    throw Error(ErrorCode::NotSelfAdjoint, "||A C A* - B C B*||_F = " + std::to_string(rep.gram_residual));
  }
}

inline void require_unitary(const ComplexMatrix& w, const Tolerances& tol) {
  require_finite(w, "W");
  if (w.rows() != w.cols() || unitarity_residual(w) > tol.unitary_abs) {
    throw Error(ErrorCode::NotUnitary, "W is not unitary within tolerance");
  }
}

/// Given (A:B) and a unitary basis split into the two eigenspaces
/// (first_half spans one sign, second_half the other), returns the unique
/// unitary W with (A:B) row-equivalent to (I : W) [first_half second_half]*.
///
/// Coordinates P = (A:B) first_half and Q = (A:B) second_half satisfy
/// P P* = Q Q*. With SVDs P = U_C S_C V_C*, Q = U_D S_D V_D* the square-root
/// uniqueness gives S_C (U_C* U_D) = (U_C* U_D) S_D, so
/// P^{-1} Q = V_C U_C* U_D V_D*.
inline ComplexMatrix recover_w_in_basis(const ComplexMatrix& ab, const ComplexMatrix& first_half,
                                        const ComplexMatrix& second_half, const Tolerances& tol) {
  // Eigenspace split (A:B) = X_first + X_second; only the coordinates are needed.
  const ComplexMatrix x_first = ab * first_half * first_half.adjoint();
  const ComplexMatrix x_second = ab * second_half * second_half.adjoint();
  const ComplexMatrix coord_c = x_first * first_half;
  const ComplexMatrix coord_d = x_second * second_half;

  const Svd svd_c = singular_value_decomposition(coord_c);
  const Svd svd_d = singular_value_decomposition(coord_d);
  const Eigen::Index m = coord_c.rows();
  if (svd_c.sigma(m - 1) <= tol.rank_rel * svd_c.sigma(0)) {
    throw Error(ErrorCode::RankDeficient, "eigenspace coordinates are numerically singular");
  }
  const ComplexMatrix v_x = svd_c.v;
  const ComplexMatrix v_y = svd_d.v * (svd_c.u.adjoint() * svd_d.u).adjoint();
  return v_x * v_y.adjoint();
}

/// Even-order basis: V* has block rows (Z_2; Z_3; Z_1; Z_4) of Z.
inline std::pair<ComplexMatrix, ComplexMatrix> even_basis_halves(int n) {
  const ComplexMatrix z = even_order_Z(n);
  ComplexMatrix first(4 * n, 2 * n);
  ComplexMatrix second(4 * n, 2 * n);
  first << z.middleRows(n, n).adjoint(), z.middleRows(2 * n, n).adjoint();
  second << z.topRows(n).adjoint(), z.bottomRows(n).adjoint();
  return {first, second};
}

}  // namespace detail

/// (V11* + W V12* : V21* + W V22*), odd sizes.
inline BoundaryPair construct_from_W(const ComplexMatrix& w, const OrderSpec& spec, const Tolerances& tol = {}) {
  const EigenBasis eb = eigenbasis(spec);
  if (w.rows() != spec.m()) throw Error(ErrorCode::DimensionMismatch, "W size does not match the order");
  detail::require_unitary(w, tol);
  return {eb.v11.adjoint() + w * eb.v12.adjoint(), eb.v21.adjoint() + w * eb.v22.adjoint(), spec};
}

/// Even-order analogue: (A:B) = (Z_2; Z_3) + W (Z_1; Z_4).
inline BoundaryPair construct_even_from_W(const ComplexMatrix& w, int n, const Tolerances& tol = {}) {
  if (w.rows() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "W size does not match the order");
  detail::require_unitary(w, tol);
  const auto [first, second] = detail::even_basis_halves(n);
  const ComplexMatrix ab = first.adjoint() + w * second.adjoint();
  return {ab.leftCols(2 * n), ab.rightCols(2 * n), OrderSpec::even_order(n)};
}

/// The unitary W of the normalized representative of `pair`.
/// Invariant under left multiplication of the pair by any invertible matrix.
inline ComplexMatrix recover_W(const BoundaryPair& pair, const Tolerances& tol = {}) {
  detail::require_self_adjoint(pair, tol);
  const ComplexMatrix ab = pair.ab();
  const int m = pair.spec.m();
  if (pair.spec.is_odd_order()) {
    const EigenBasis eb = eigenbasis(pair.spec);
    return detail::recover_w_in_basis(ab, eb.v.leftCols(m), eb.v.rightCols(m), tol);
  }
  const auto [first, second] = detail::even_basis_halves(pair.spec.n());
  return detail::recover_w_in_basis(ab, first, second, tol);
}

struct CanonicalForm {
  OrderSpec spec = OrderSpec::from_size(3);
  CsFactors cs;
  ComplexMatrix w;
  ComplexMatrix q1;         // diag(U1, U2)
  ComplexMatrix q2;         // diag(V1, U*, U*, U*, V2) * q3
  ComplexMatrix q3;         // selection * q4
  ComplexMatrix q4;
  ComplexMatrix selection;  // the column-selection block of q3
  ComplexMatrix core;       // (2n+1) x (5n+3)
  ComplexMatrix k;          // n x (n+1)
  int null_count = 0;
  int predicted_rank_a = 0;
  int predicted_rank_b = 0;
  BcType classification = BcType::Mixed;
  int r = 0;

  /// (1/sqrt2) Q1 core Q2
  ComplexMatrix assembled() const { return q1 * core * q2 / std::sqrt(2.0); }
};

struct RankPrediction {
  int rank_a = 0;
  int rank_b = 0;
  int null_count = 0;
};

/// rank(A) = rank(B) = 2n+1 - Null(I - K K*), where Null counts the
/// eigenvalues of K K* within unit_eig_abs of 1.
inline RankPrediction predicted_ranks(const ComplexMatrix& k, int n, const Tolerances& tol = {}) {
  const HermitianEigen eig = hermitian_eigendecomposition(k * k.adjoint(), tol);
  int nulls = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues(i) - 1.0) <= tol.unit_eig_abs) ++nulls;
  }
  return {2 * n + 1 - nulls, 2 * n + 1 - nulls, nulls};
}

inline RankPrediction predicted_ranks(const CanonicalForm& form, const Tolerances& tol = {}) {
  return predicted_ranks(form.k, form.spec.n(), tol);
}

/// The intermediate rank identities read off the blocks of W:
///   odd n:  rank A = n + rank [w2^T w3; W3 w5],   rank B = n+1 + rank W2
///   even n: rank A = n+1 + rank W3,               rank B = n + rank [w1 W2; w3 w4^T]
inline std::pair<int, int> block_rank_formula(const ComplexMatrix& w, const OrderSpec& spec,
                                              const Tolerances& tol = {}) {
  detail::require_odd_order(spec, "block_rank_formula");
  const int n = spec.n();
  if (spec.parity() == Parity::OddN) {
    const int ra = n + numerical_rank(w.block(n, 0, n + 1, n + 1), tol);
    const int rb = n + 1 + numerical_rank(w.block(0, n + 1, n, n), tol);
    return {ra, rb};
  }
  const int ra = n + 1 + numerical_rank(w.block(n + 1, 0, n, n), tol);
  const int rb = n + numerical_rank(w.block(0, n, n + 1, n + 1), tol);
  return {ra, rb};
}

/// Full canonical factorization of a self-adjoint pair of odd size.
inline CanonicalForm canonical_decompose(const BoundaryPair& pair, const Tolerances& tol = {}) {
  detail::require_odd_order(pair.spec, "canonical_decompose");
  const OrderSpec spec = pair.spec;
  const int n = spec.n();
  const bool odd_n = spec.parity() == Parity::OddN;

  CanonicalForm f;
  f.spec = spec;
  f.w = recover_W(pair, tol);
  f.cs = odd_n ? cs_decompose(f.w, n + 1, n, tol) : cs_decompose(f.w, n, n + 1, tol);

  const ComplexMatrix& u1 = f.cs.u1;
  const ComplexMatrix& u2 = f.cs.u2;
  const ComplexMatrix c = real_diag(f.cs.cos);
  const ComplexMatrix s = real_diag(f.cs.sin);
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  const auto id = [](int k) { return ComplexMatrix::Identity(k, k); };
  const auto zero = [](int r, int k) { return ComplexMatrix::Zero(r, k); };

  f.q1 = block_diag({u1, u2});
  f.q4 = q4_matrix(spec);

  ComplexMatrix bold_c;
  ComplexMatrix bold_s;
  if (odd_n) {
    // C (+) 1 and (S; 0)
    bold_c = block_diag({c, one});
    bold_s = ComplexMatrix::Zero(n + 1, n);
    bold_s.topRows(n) = s;

    // [ bC     I_{n+1} 0   I_{n+1} bS ]
    // [ -bS*   0       I_n 0       C  ]
    f.core = ComplexMatrix(2 * n + 1, 5 * n + 3);
    f.core << bold_c, id(n + 1), zero(n + 1, n), id(n + 1), bold_s,
              -bold_s.adjoint(), zero(n, n + 1), id(n), zero(n, n + 1), c;

    ComplexMatrix top_n = ComplexMatrix::Zero(n + 1, n);
    top_n.topRows(n) = id(n);
    ComplexMatrix last = ComplexMatrix::Zero(n + 1, 1);
    last(n, 0) = 1.0;
    f.selection = block_diag({id(n + 1), top_n, id(n), last, id(n)});
    f.q3 = f.selection * f.q4;
    f.q2 = block_diag({f.cs.v1, u1.adjoint(), u2.adjoint(), u1.adjoint(), f.cs.v2}) * f.q3;

    ComplexMatrix proj = ComplexMatrix::Zero(n, n + 1);
    proj.leftCols(n) = id(n);
    f.k = proj * u1 * bold_c;
  } else {
    // 1 (+) C and (0 S)
    bold_c = block_diag({one, c});
    bold_s = ComplexMatrix::Zero(n, n + 1);
    bold_s.rightCols(n) = s;

    // [ C      0       I_n 0       bS ]
    // [ -bS*   I_{n+1} 0   I_{n+1} bC ]
    f.core = ComplexMatrix(2 * n + 1, 5 * n + 3);
    f.core << c, zero(n, n + 1), id(n), zero(n, n + 1), bold_s,
              -bold_s.adjoint(), id(n + 1), zero(n + 1, n), id(n + 1), bold_c;

    ComplexMatrix first = ComplexMatrix::Zero(n + 1, 1);
    first(0, 0) = 1.0;
    ComplexMatrix bottom_n = ComplexMatrix::Zero(n + 1, n);
    bottom_n.bottomRows(n) = id(n);
    f.selection = block_diag({id(n), first, id(n), bottom_n, id(n + 1)});
    f.q3 = f.selection * f.q4;
    f.q2 = block_diag({f.cs.v1, u2.adjoint(), u1.adjoint(), u2.adjoint(), f.cs.v2}) * f.q3;

    ComplexMatrix proj = ComplexMatrix::Zero(n, n + 1);
    proj.rightCols(n) = id(n);
    f.k = proj * u2 * bold_c;
  }

  const RankPrediction pr = predicted_ranks(f.k, n, tol);
  f.null_count = pr.null_count;
  f.predicted_rank_a = pr.rank_a;
  f.predicted_rank_b = pr.rank_b;
  // rank(I - K K*) = n  <=>  no unit eigenvalue  <=>  full rank
  f.classification = pr.null_count == 0 ? BcType::Coupled : BcType::Mixed;
  f.r = pr.rank_a - (n + 1);
  return f;
}

struct EvenCanonicalForm {
  int n = 0;
  ComplexMatrix u;  // 2n x 2n, invertible
  ComplexMatrix v1, u1, u2, v2;
  RealVector cos, sin;
  ComplexMatrix z;
  ComplexMatrix w;
  int rank_s = 0;
  BcType classification = BcType::Separated;

  /// [C I 0 S; -S 0 I C]
  ComplexMatrix core() const {
    const ComplexMatrix c = real_diag(cos);
    const ComplexMatrix s = real_diag(sin);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
    ComplexMatrix out(2 * n, 4 * n);
    out << c, id, zero, s,
           -s, zero, id, c;
    return out;
  }

  /// core * diag(V1, U1*, U2*, V2) * Z; the rows are separated when S = 0.
  ComplexMatrix normalized() const {
    return core() * block_diag({v1, u1.adjoint(), u2.adjoint(), v2}) * z;
  }

  ComplexMatrix assembled() const { return u * normalized(); }
};

/// Canonical form of an even-size (m = 2n) self-adjoint pair.
inline EvenCanonicalForm even_canonical_decompose(const BoundaryPair& pair, const Tolerances& tol = {}) {
  if (pair.spec.is_odd_order()) throw Error(ErrorCode::OddSize, "even_canonical_decompose needs m = 2n");
  detail::require_self_adjoint(pair, tol);
  const int n = pair.spec.n();
  const auto [first, second] = detail::even_basis_halves(n);
  const ComplexMatrix ab = pair.ab();

  EvenCanonicalForm f;
  f.n = n;
  f.z = even_order_Z(n);
  f.w = detail::recover_w_in_basis(ab, first, second, tol);
  const CsFactors cs = cs_decompose(f.w, n, n, tol);
  f.u1 = cs.u1;
  f.u2 = cs.u2;
  f.v1 = cs.v1;
  f.v2 = cs.v2;
  f.cos = cs.cos;
  f.sin = cs.sin;
  // (A:B) = P (I : W) V*, P the first-half coordinates.
  f.u = ab * first * block_diag({cs.u1, cs.u2});

  // Sines live on the unit scale: count them against an absolute cutoff.
  f.rank_s = static_cast<int>((f.sin.array() > tol.rank_rel).count());
  if (f.rank_s == 0) {
    f.classification = BcType::Separated;
  } else if (f.rank_s == n) {
    f.classification = BcType::Coupled;
  } else {
    f.classification = BcType::Mixed;
  }
  return f;
}

struct Classification {
  BcType type = BcType::Mixed;
  int r = 0;  // odd: rank(A) - (n+1); even: rank(S) = rank(A) - n
  int rank_a = 0;
  int rank_b = 0;
};

inline Classification classify(const BoundaryPair& pair, const Tolerances& tol = {}) {
  if (pair.spec.is_odd_order()) {
    const CanonicalForm f = canonical_decompose(pair, tol);
    return {f.classification, f.r, f.predicted_rank_a, f.predicted_rank_b};
  }
  const EvenCanonicalForm f = even_canonical_decompose(pair, tol);
  const int n = f.n;
  return {f.classification, f.rank_s, n + f.rank_s, n + f.rank_s};
}

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Unitary with prescribed CSD spectrum: `unit` cosines equal to 1, the rest
/// uniform in (delta, 1 - delta), Haar corner factors.
inline ComplexMatrix sample_w_with_unit_cosines(int p, int q, int unit, std::uint64_t seed) {
  constexpr double delta = 1e-3;
  const int k = std::min(p, q);
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::uniform_real_distribution<double> dist(delta, 1.0 - delta);
  std::vector<double> cs(k);
  for (int i = 0; i < k; ++i) cs[i] = i < unit ? 1.0 : dist(rng);
  std::sort(cs.begin(), cs.end(), std::greater<>());

  CsFactors f;
  f.p = p;
  f.q = q;
  f.cos.resize(k);
  f.sin.resize(k);
  for (int i = 0; i < k; ++i) {
    f.cos(i) = cs[i];
    f.sin(i) = std::sqrt((1.0 - cs[i]) * (1.0 + cs[i]));
  }
  f.u1 = random_unitary(p, derive_seed(seed, 1));
  f.u2 = random_unitary(q, derive_seed(seed, 2));
  f.v1 = random_unitary(p, derive_seed(seed, 3));
  f.v2 = random_unitary(q, derive_seed(seed, 4));
  return cs_reconstruct(f);
}

}  // namespace detail

/// Random self-adjoint pair, deterministic per (spec, seed).
///
/// With `unit_cosines = k` the CSD of W carries exactly k unit cosines, which
/// gives rank A = rank B = 2n+1-k for odd sizes and rank S = n-k for even
/// sizes. A draw whose realized count differs is rejected and redrawn from a
/// derived seed.
inline BoundaryPair generate_random_pair(const OrderSpec& spec, std::uint64_t seed,
                                         std::optional<int> unit_cosines = std::nullopt,
                                         const Tolerances& tol = {}) {
  const int n = spec.n();
  if (unit_cosines && (*unit_cosines < 0 || *unit_cosines > n)) {
    throw Error(ErrorCode::InvalidTarget, "unit cosine count must lie in [0, " + std::to_string(n) + "]");
  }
  const bool odd_order = spec.is_odd_order();
  int p = n;
  int q = n;
  if (odd_order) {
    p = spec.parity() == Parity::OddN ? n + 1 : n;
    q = spec.m() - p;
  }
  auto build = [&](const ComplexMatrix& w) {
    return odd_order ? construct_from_W(w, spec, tol) : construct_even_from_W(w, n, tol);
  };

  if (!unit_cosines) return build(random_unitary(spec.m(), seed));

  constexpr int max_attempts = 32;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : detail::derive_seed(seed, 100 + attempt);
    BoundaryPair pair = build(detail::sample_w_with_unit_cosines(p, q, *unit_cosines, s));
    if (odd_order) {
      if (canonical_decompose(pair, tol).null_count == *unit_cosines) return pair;
    } else if (even_canonical_decompose(pair, tol).rank_s == n - *unit_cosines) {
      return pair;
    }
  }
  throw Error(ErrorCode::ConvergenceFailure, "could not realize the requested unit cosine count");
}

}  // namespace bccanon

#pragma once

// Randomized invariant suite behind `bccanon selftest`.
//
// Each trial is seeded from (base seed, order, trial index) alone, so any
// failure can be replayed in isolation.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bccanon/bvpforms.hpp"
#include "bccanon/csd.hpp"

namespace bccanon {

struct InvariantTally {
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // largest measured residual, where one applies
};

struct SelftestSummary {
  std::map<std::string, InvariantTally> tallies;

  int checks() const {
    int total = 0;
    for (const auto& [name, t] : tallies) total += t.checks;
    return total;
  }
  int failures() const {
    int total = 0;
    for (const auto& [name, t] : tallies) total += t.failures;
    return total;
  }
  bool passed() const { return failures() == 0; }
};

namespace detail {

class Recorder {
 public:
  explicit Recorder(SelftestSummary& s) : summary_(s) {}

  void expect(const std::string& name, bool ok) {
    auto& t = summary_.tallies[name];
    ++t.checks;
    if (!ok) ++t.failures;
  }
  void below(const std::string& name, double value, double bound) {
    expect(name, value < bound);
    auto& t = summary_.tallies[name];
    t.worst = std::max(t.worst, value);
  }

 private:
  SelftestSummary& summary_;
};

inline void csd_trial(Recorder& rec, int p, int q, std::uint64_t seed, const Tolerances& tol) {
  const ComplexMatrix w = random_unitary(p + q, seed);
  const CsFactors f = cs_decompose(w, p, q, tol);
  rec.below("csd.round_trip", (cs_reconstruct(f) - w).norm(), 1e-9);

  const int k = f.k();
  const ComplexMatrix block = p <= q ? w.topLeftCorner(p, p) : w.bottomRightCorner(q, q);
  const RealVector oracle = singular_values(block).head(k).cwiseMin(1.0);
  rec.below("csd.cos_matches_block_svd", k == 0 ? 0.0 : (f.cos - oracle).cwiseAbs().maxCoeff(), 1e-10);

  double corner = 0.0;
  for (const auto* u : {&f.u1, &f.u2, &f.v1, &f.v2}) corner = std::max(corner, unitarity_residual(*u));
  rec.below("csd.corner_unitarity", corner, 1e-10);

  const RealVector pyth = f.cos.array().square() + f.sin.array().square() - 1.0;
  rec.below("csd.cos2_plus_sin2", k == 0 ? 0.0 : pyth.cwiseAbs().maxCoeff(), 1e-12);

  bool sorted = true;
  for (int i = 1; i < k; ++i) sorted = sorted && f.cos(i) <= f.cos(i - 1);
  rec.expect("csd.cos_non_increasing", sorted);
}

inline void odd_trial(Recorder& rec, const OrderSpec& spec, int trial, std::uint64_t seed, const Tolerances& tol) {
  const int n = spec.n();
  const ComplexMatrix w0 = random_unitary(spec.m(), seed);
  const BoundaryPair pair = construct_from_W(w0, spec, tol);

  const SelfAdjointReport rep = check_self_adjoint(pair, tol);
  rec.expect("bvp.closure", rep.self_adjoint());
  rec.below("bvp.closure_gram", rep.gram_residual, 1e-11);

  const ComplexMatrix w = recover_W(pair, tol);
  rec.below("bvp.w_round_trip", (w - w0).norm(), 1e-9);
  const ComplexMatrix g = random_invertible(spec.m(), derive_seed(seed, 7), 50.0);
  rec.below("bvp.row_op_invariance", (recover_W(pair.left_multiplied(g), tol) - w0).norm(), 1e-8);

  // Generated pairs cycle through every unit-cosine count.
  const int unit = trial % (n + 1);
  const BoundaryPair gen = generate_random_pair(spec, derive_seed(seed, 11), unit, tol);
  for (const BoundaryPair* pp : {&pair, &gen}) {
    const CanonicalForm f = canonical_decompose(*pp, tol);
    const int ra = numerical_rank(pp->a, tol);
    const int rb = numerical_rank(pp->b, tol);
    rec.expect("bvp.rank_equality", ra == rb);
    rec.expect("bvp.rank_bounds", ra >= n + 1 && ra <= 2 * n + 1);
    rec.expect("bvp.predicted_vs_numeric_rank", f.predicted_rank_a == ra && f.predicted_rank_b == rb);
    const auto [fa, fb] = block_rank_formula(f.w, spec, tol);
    rec.expect("bvp.block_rank_formula", fa == ra && fb == rb);

    const BoundaryPair normal = construct_from_W(f.w, spec, tol);
    const ComplexMatrix assembled = f.assembled();
    rec.below("bvp.canonical_reconstruction", (assembled - normal.ab()).norm(), 1e-9);
    rec.below("bvp.canonical_row_space", max_principal_angle_sine(assembled, pp->ab()), 1e-8);

    const bool coupled = f.classification == BcType::Coupled;
    rec.expect("bvp.classification_dichotomy", f.classification != BcType::Separated &&
                                                   coupled == (f.predicted_rank_a == 2 * n + 1) &&
                                                   f.r == f.predicted_rank_a - (n + 1));
  }
  rec.expect("bvp.generator_unit_cosines", numerical_rank(gen.a, tol) == 2 * n + 1 - unit);
}

inline void even_trial(Recorder& rec, int n, int trial, std::uint64_t seed, const Tolerances& tol) {
  const OrderSpec spec = OrderSpec::even_order(n);
  const int unit = trial % (n + 1);
  const BoundaryPair pair = generate_random_pair(spec, seed, unit, tol);
  rec.expect("even.closure", check_self_adjoint(pair, tol).self_adjoint());

  const EvenCanonicalForm f = even_canonical_decompose(pair, tol);
  rec.below("even.reconstruction", (f.assembled() - pair.ab()).norm(), 1e-9);

  const int rank_s = n - unit;
  const BcType expected = rank_s == 0 ? BcType::Separated : (rank_s == n ? BcType::Coupled : BcType::Mixed);
  rec.expect("even.trichotomy", f.rank_s == rank_s && f.classification == expected);
  rec.expect("even.rank_a_is_n_plus_rank_s", numerical_rank(pair.a, tol) == n + f.rank_s);

  if (f.classification == BcType::Separated) {
    const ComplexMatrix rows = f.normalized();
    bool separated = true;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      const double left = rows.row(i).head(2 * n).norm();
      const double right = rows.row(i).tail(2 * n).norm();
      separated = separated && std::min(left, right) <= 1e-10;
    }
    rec.expect("even.separated_rows", separated);
  }
}

}  // namespace detail

/// Runs `trials` trials for each size in `orders` (odd or even m >= 2).
inline SelftestSummary run_selftest(const std::vector<int>& orders, int trials, std::uint64_t seed = 0,
                                    const Tolerances& tol = {}) {
  if (trials < 1) throw Error(ErrorCode::InvalidTarget, "trials must be positive");
  SelftestSummary summary;
  detail::Recorder rec(summary);
  for (const int m : orders) {
    const OrderSpec spec = OrderSpec::from_size(m);
    const int n = spec.n();
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = detail::derive_seed(seed, static_cast<std::uint64_t>(m) * 1000003ULL + t);
      if (spec.is_odd_order()) {
        detail::csd_trial(rec, n + 1, n, s, tol);
        detail::csd_trial(rec, n, n + 1, detail::derive_seed(s, 1), tol);
        detail::odd_trial(rec, spec, t, detail::derive_seed(s, 2), tol);
      } else {
        detail::csd_trial(rec, n, n, s, tol);
        detail::even_trial(rec, n, t, detail::derive_seed(s, 2), tol);
      }
    }
  }
  return summary;
}

}  // namespace bccanon

#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "trilat/basis.hpp"
#include "trilat/selection.hpp"

namespace trilat {

using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Split of a lattice-coordinate vector into integer floors w and fractional
/// parts r in [0, 1), with their sum r_sum.
template <typename Scalar>
struct FracDecomposition {
  IntVector w;
  Vector<Scalar> r;
  Scalar r_sum = Scalar(0);
};

/// Closest lattice vector: Cartesian point, its integer lattice coordinates,
/// and the number k of fractional parts that were rounded up.
template <typename Scalar>
struct CvpSolution {
  Vector<Scalar> point;
  IntVector coeffs;
  Index k = 0;
};

/// Squared distances d_k from B r to the k-th sorted-prefix candidate B z^k,
/// with first and second differences. Test- and verification-facing.
/// Indexing: d[k] for k = 0..n, delta[k-1] = d_k - d_{k-1} for k = 1..n,
/// delta2[k-2] = delta_k - delta_{k-1} for k = 2..n.
template <typename Scalar>
struct CandidateProfile {
  Vector<Scalar> d;
  Vector<Scalar> delta;
  Vector<Scalar> delta2;
};

template <typename Scalar, typename Derived>
void decompose(const Eigen::MatrixBase<Derived>& x, FracDecomposition<Scalar>& out) {
  const Index n = x.size();
  out.w.resize(n);
  out.r.resize(n);
  Scalar sum = 0;
  for (Index i = 0; i < n; ++i) {
    const Scalar xi = x[i];
    if (!std::isfinite(xi)) {
      throw std::invalid_argument("decompose: non-finite component at index " +
                                  std::to_string(i));
    }
    Scalar f = std::floor(xi);
    Scalar ri = xi - f;
    // x - floor(x) can round up to 1.0 for tiny negative x; renormalize.
    if (ri >= Scalar(1)) {
      f += Scalar(1);
      ri = Scalar(0);
    }
    out.w[i] = static_cast<std::int64_t>(f);
    out.r[i] = ri;
    sum += ri;
  }
  out.r_sum = sum;
}

template <typename Derived, typename Scalar = typename Derived::Scalar>
FracDecomposition<Scalar> decompose(const Eigen::MatrixBase<Derived>& x) {
  FracDecomposition<Scalar> out;
  decompose(x, out);
  return out;
}

namespace detail {

/// Delta_k = k - r_sum - r_{sigma(k)}. A single shared expression so the
/// sort-based and selection-based solvers take bit-identical branches.
template <typename Scalar>
inline Scalar first_difference(Index k, Scalar r_sum, Scalar r_rank_k) {
  return static_cast<Scalar>(k) - r_sum - r_rank_k;
}

/// Fills `order` with indices of r sorted descending under the strict total
/// order (value desc, index asc).
template <typename Scalar>
void sorted_indices_desc(const Vector<Scalar>& r, std::vector<Index>& order) {
  order.resize(static_cast<std::size_t>(r.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), RankBefore<Vector<Scalar>>{r});
}

template <typename Scalar, typename Derived>
void check_target(const TriangularBasis<Scalar>& basis,
                  const Eigen::MatrixBase<Derived>& y, const char* where) {
  check_dim(basis, y, where);
  if (!y.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": non-finite target component");
  }
}

}  // namespace detail

/// Scratch buffers so the solvers can run allocation-free in hot loops.
/// One workspace per concurrent caller; the dense basis matrix is only
/// materialized by the quadratic baseline.
template <typename Scalar>
struct CvpWorkspace {
  FracDecomposition<Scalar> frac;
  Vector<Scalar> x;
  Vector<Scalar> br;
  Vector<Scalar> bz;
  std::vector<Index> order;
  Matrix<Scalar> dense;
};

/// Closed-form squared candidate distance
///   d_k = |Br|^2 + k^2/2 + k (1/2 - r_sum) - sum_{i<=k} r_{sigma(i)}
/// given the fractional parts already sorted descending.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Scalar candidate_distance(const Eigen::MatrixBase<Derived>& r_sorted_desc,
                          Scalar r_sum, Scalar br_sq, Index k) {
  const Index n = r_sorted_desc.size();
  if (k < 0 || k > n) {
    throw std::out_of_range("candidate_distance: k = " + std::to_string(k) +
                            " out of range [0, " + std::to_string(n) + "]");
  }
  Scalar prefix = 0;
  for (Index i = 0; i < k; ++i) {
    prefix += r_sorted_desc[i];
  }
  const Scalar kd = static_cast<Scalar>(k);
  return br_sq + kd * kd / Scalar(2) + kd * (Scalar(0.5) - r_sum) - prefix;
}

/// Full distance/difference profile of a target, built from the closed forms.
template <typename Scalar, typename Derived>
CandidateProfile<Scalar> candidate_profile(const TriangularBasis<Scalar>& basis,
                                           const Eigen::MatrixBase<Derived>& y) {
  detail::check_target(basis, y, "candidate_profile");
  const Index n = basis.dim();
  const Vector<Scalar> x = cart_to_tri(basis, y);
  FracDecomposition<Scalar> frac = decompose(x);
  std::vector<Index> order;
  detail::sorted_indices_desc(frac.r, order);

  CandidateProfile<Scalar> profile;
  profile.d.resize(n + 1);
  profile.delta.resize(n);
  profile.delta2.resize(n - 1 > 0 ? n - 1 : 0);
  profile.d[0] = tri_to_cart(basis, frac.r).squaredNorm();
  for (Index k = 1; k <= n; ++k) {
    const Scalar rk = frac.r[order[static_cast<std::size_t>(k - 1)]];
    profile.delta[k - 1] = detail::first_difference(k, frac.r_sum, rk);
    profile.d[k] = profile.d[k - 1] + profile.delta[k - 1];
    if (k >= 2) {
      const Scalar rk_prev = frac.r[order[static_cast<std::size_t>(k - 2)]];
      profile.delta2[k - 2] = Scalar(1) - (rk - rk_prev);
    }
  }
  return profile;
}

namespace detail {

/// Emit coeffs = w + z for the sorted-prefix candidate z^k and finish the
/// solution. `point` is produced by the O(n) transform.
template <typename Scalar>
void finish_from_prefix(const TriangularBasis<Scalar>& basis,
                        const FracDecomposition<Scalar>& frac,
                        std::span<const Index> order, Index k,
                        CvpSolution<Scalar>& sol) {
  sol.coeffs = frac.w;
  for (Index i = 0; i < k; ++i) {
    sol.coeffs[order[static_cast<std::size_t>(i)]] += 1;
  }
  sol.k = k;
  tri_to_cart(basis, sol.coeffs.template cast<Scalar>(), sol.point);
}

}  // namespace detail

/// Conventional quadratic-time solver. Deliberately works through the dense
/// basis matrix: generic back-substitution for B^{-1} y, a full descending
/// sort, explicit enumeration of all n+1 sorted-prefix candidates via the
/// column difference equation B z^k = B z^{k-1} + b_{sigma(k)}, and a dense
/// multiply for the returned point. Serves as the benchmark baseline.
template <typename Scalar, typename Derived>
CvpSolution<Scalar>& cv_baseline(const TriangularBasis<Scalar>& basis,
                                 const Eigen::MatrixBase<Derived>& y,
                                 CvpWorkspace<Scalar>& ws, CvpSolution<Scalar>& sol) {
  detail::check_target(basis, y, "cv_baseline");
  const Index n = basis.dim();
  if (ws.dense.rows() != n) {
    ws.dense = materialize_dense(basis);
  }
  ws.x = y;
  ws.dense.template triangularView<Eigen::Upper>().solveInPlace(ws.x);
  decompose(ws.x, ws.frac);
  detail::sorted_indices_desc(ws.frac.r, ws.order);

  ws.br.noalias() = ws.dense * ws.frac.r;
  ws.bz.setZero(n);
  Scalar best_d = ws.br.squaredNorm();
  Index best_k = 0;
  for (Index k = 1; k <= n; ++k) {
    ws.bz += ws.dense.col(ws.order[static_cast<std::size_t>(k - 1)]);
    const Scalar d = (ws.br - ws.bz).squaredNorm();
    if (d < best_d) {  // ties keep the smaller k
      best_d = d;
      best_k = k;
    }
  }

  sol.coeffs = ws.frac.w;
  for (Index i = 0; i < best_k; ++i) {
    sol.coeffs[ws.order[static_cast<std::size_t>(i)]] += 1;
  }
  sol.k = best_k;
  sol.point.noalias() = ws.dense * sol.coeffs.template cast<Scalar>();
  return sol;
}

/// Quasilinear solver: O(n) transforms, one O(n log n) descending sort, then
/// a binary search over the strictly increasing first differences. Delta = 0
/// boundaries resolve to the smaller k, so ties agree with the baseline.
template <typename Scalar, typename Derived>
CvpSolution<Scalar>& qlin_cv(const TriangularBasis<Scalar>& basis,
                             const Eigen::MatrixBase<Derived>& y,
                             CvpWorkspace<Scalar>& ws, CvpSolution<Scalar>& sol) {
  detail::check_target(basis, y, "qlin_cv");
  const Index n = basis.dim();
  cart_to_tri(basis, y, ws.x);
  decompose(ws.x, ws.frac);
  detail::sorted_indices_desc(ws.frac.r, ws.order);
  const Scalar r_sum = ws.frac.r_sum;

  const auto delta = [&](Index k) {
    return detail::first_difference(k, r_sum,
                                    ws.frac.r[ws.order[static_cast<std::size_t>(k - 1)]]);
  };

  Index k = 0;
  if (delta(1) >= Scalar(0)) {
    k = 0;
  } else if (delta(n) < Scalar(0)) {
    k = n;
  } else {
    // Invariant: delta(lo) < 0 <= delta(hi); the answer is the last k with
    // delta(k) < 0.
    Index lo = 1;
    Index hi = n;
    while (hi - lo > 1) {
      const Index mid = lo + (hi - lo) / 2;
      if (delta(mid) < Scalar(0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    k = lo;
  }
  detail::finish_from_prefix(basis, ws.frac, ws.order, k, sol);
  return sol;
}

/// Linear-time solver: no sort. k_hat = floor(r_sum) pins the optimal k to
/// {k_hat, k_hat+1} in the interior case, so only the order statistics at
/// ranks {1, k_hat, k_hat+1, n} are selected, and z is assigned by comparing
/// each fractional part against the rank-k statistic under the strict total
/// order (which makes z carry exactly k ones even with duplicates).
template <typename Scalar, typename Derived>
CvpSolution<Scalar>& lin_cv(const TriangularBasis<Scalar>& basis,
                            const Eigen::MatrixBase<Derived>& y,
                            CvpWorkspace<Scalar>& ws, CvpSolution<Scalar>& sol) {
  detail::check_target(basis, y, "lin_cv");
  const Index n = basis.dim();
  cart_to_tri(basis, y, ws.x);
  decompose(ws.x, ws.frac);
  const Scalar r_sum = ws.frac.r_sum;
  const Index k_hat = std::min(static_cast<Index>(std::floor(r_sum)), n - 1);

  // Ranks that exist and can be needed; k_hat = 0 has no rank-k_hat statistic.
  std::array<Index, 4> rank_buf{};
  std::size_t m = 0;
  rank_buf[m++] = 1;
  if (k_hat >= 1 && k_hat != 1) rank_buf[m++] = k_hat;
  if (k_hat + 1 != 1 && k_hat + 1 != k_hat) rank_buf[m++] = k_hat + 1;
  if (n != 1 && n != k_hat && n != k_hat + 1) rank_buf[m++] = n;
  std::array<OrderStat<Scalar>, 4> stat_buf{};
  select_order_stats(ws.frac.r, std::span<const Index>(rank_buf.data(), m),
                     std::span<OrderStat<Scalar>>(stat_buf.data(), m), ws.order);
  const auto stat_of = [&](Index rank) -> const OrderStat<Scalar>& {
    for (std::size_t i = 0; i < m; ++i) {
      if (rank_buf[i] == rank) return stat_buf[i];
    }
    throw std::logic_error("lin_cv: rank not selected");
  };

  Index k = 0;
  if (detail::first_difference(Index(1), r_sum, stat_of(1).value) >= Scalar(0)) {
    k = 0;
  } else if (detail::first_difference(n, r_sum, stat_of(n).value) < Scalar(0)) {
    k = n;
  } else if (detail::first_difference(k_hat + 1, r_sum, stat_of(k_hat + 1).value) >=
             Scalar(0)) {
    k = k_hat;
  } else {
    k = k_hat + 1;
  }

  sol.coeffs = ws.frac.w;
  if (k == n) {
    sol.coeffs.array() += 1;
  } else if (k > 0) {
    const OrderStat<Scalar>& cut = stat_of(k);
    for (Index j = 0; j < n; ++j) {
      const Scalar rj = ws.frac.r[j];
      if (rj > cut.value || (rj == cut.value && j <= cut.arg)) {
        sol.coeffs[j] += 1;
      }
    }
  }
  sol.k = k;
  tri_to_cart(basis, sol.coeffs.template cast<Scalar>(), sol.point);
  return sol;
}

// One-shot conveniences; allocate a workspace per call.

template <typename Scalar, typename Derived>
CvpSolution<Scalar> cv_baseline(const TriangularBasis<Scalar>& basis,
                                const Eigen::MatrixBase<Derived>& y) {
  CvpWorkspace<Scalar> ws;
  CvpSolution<Scalar> sol;
  cv_baseline(basis, y, ws, sol);
  return sol;
}

template <typename Scalar, typename Derived>
CvpSolution<Scalar> qlin_cv(const TriangularBasis<Scalar>& basis,
                            const Eigen::MatrixBase<Derived>& y) {
  CvpWorkspace<Scalar> ws;
  CvpSolution<Scalar> sol;
  qlin_cv(basis, y, ws, sol);
  return sol;
}

template <typename Scalar, typename Derived>
CvpSolution<Scalar> lin_cv(const TriangularBasis<Scalar>& basis,
                           const Eigen::MatrixBase<Derived>& y) {
  CvpWorkspace<Scalar> ws;
  CvpSolution<Scalar> sol;
  lin_cv(basis, y, ws, sol);
  return sol;
}

}  // namespace trilat

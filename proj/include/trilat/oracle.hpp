#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "trilat/basis.hpp"
#include "trilat/cvp.hpp"

namespace trilat {

/// Result of exhaustive enumeration around a target.
template <typename Scalar>
struct OracleResult {
  IntVector best_coeffs;
  Scalar best_dist_sq = std::numeric_limits<Scalar>::infinity();
  Scalar runner_up_gap = 0;  // second-best minus best; 0 on a tie
};

/// Exhaustive closest-vector search: enumerates every integer coefficient
/// vector within `window` of the floored lattice coordinates and evaluates
/// distances through the materialized basis matrix. Deliberately shares no
/// machinery with the solvers (no sorting, no selection, no closed forms) so
/// it can act as their oracle. Cost is (2 window + 1)^n; n <= 10 enforced.
///
/// Self-check: if the optimum touches the enumeration boundary, the search is
/// re-run with window + 1 and must not improve.
template <typename Scalar, typename Derived>
OracleResult<Scalar> brute_force_cvp(const TriangularBasis<Scalar>& basis,
                                     const Eigen::MatrixBase<Derived>& y,
                                     int window = 2) {
  const Index n = basis.dim();
  if (n > 10) {
    throw std::invalid_argument("brute_force_cvp: n = " + std::to_string(n) +
                                " too large for exhaustive enumeration");
  }
  if (window < 1) {
    throw std::invalid_argument("brute_force_cvp: window must be >= 1");
  }
  detail::check_dim(basis, y, "brute_force_cvp");
  if (!y.allFinite()) {
    throw std::invalid_argument("brute_force_cvp: non-finite target component");
  }

  const Matrix<Scalar> dense = materialize_dense(basis);
  Vector<Scalar> x = y;
  dense.template triangularView<Eigen::Upper>().solveInPlace(x);
  IntVector w(n);
  for (Index i = 0; i < n; ++i) {
    w[i] = static_cast<std::int64_t>(std::floor(x[i]));
  }

  const std::int64_t span = 2 * static_cast<std::int64_t>(window);
  IntVector c = w.array() - window;
  Vector<Scalar> offsets = Vector<Scalar>::Zero(n);  // odometer digits 0..span
  Vector<Scalar> bc = dense * c.template cast<Scalar>();

  OracleResult<Scalar> result;
  IntVector second_coeffs;
  Scalar second_d = std::numeric_limits<Scalar>::infinity();
  while (true) {
    const Scalar d = (y.derived().template cast<Scalar>() - bc).squaredNorm();
    if (d < result.best_dist_sq) {
      second_d = result.best_dist_sq;
      second_coeffs = result.best_coeffs;
      result.best_dist_sq = d;
      result.best_coeffs = c;
    } else if (d < second_d) {
      second_d = d;
      second_coeffs = c;
    }
    // odometer step with incremental column updates of B c
    Index i = 0;
    while (i < n && offsets[i] == Scalar(span)) {
      offsets[i] = 0;
      c[i] -= span;
      bc -= Scalar(span) * dense.col(i);
      ++i;
    }
    if (i == n) {
      break;
    }
    offsets[i] += 1;
    c[i] += 1;
    bc += dense.col(i);
  }

  // Exact re-evaluation of the winners, discarding incremental drift.
  result.best_dist_sq =
      (y.derived().template cast<Scalar>() - dense * result.best_coeffs.template cast<Scalar>())
          .squaredNorm();
  if (second_coeffs.size() == n) {
    second_d = (y.derived().template cast<Scalar>() -
                dense * second_coeffs.template cast<Scalar>())
                   .squaredNorm();
  }
  result.runner_up_gap = std::max(Scalar(0), second_d - result.best_dist_sq);

  bool on_boundary = false;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(result.best_coeffs[i] - w[i]) == window) {
      on_boundary = true;
      break;
    }
  }
  if (on_boundary) {
    const OracleResult<Scalar> wider = brute_force_cvp(basis, y, window + 1);
    if (wider.best_dist_sq <
        result.best_dist_sq - Scalar(1e-9) * std::max(Scalar(1), result.best_dist_sq)) {
      throw std::runtime_error("brute_force_cvp: enumeration window too small");
    }
  }
  return result;
}

}  // namespace trilat

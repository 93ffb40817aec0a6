#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace trilat {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Basis of the n-dimensional triangular lattice in its upper-triangular
/// representation: column k has alpha_k on the diagonal and beta_i in row
/// i < k. All columns are unit vectors, any two at angle pi/3. The full
/// matrix is never stored; alpha/beta suffice for O(n) transforms.
template <typename Scalar>
class TriangularBasis {
 public:
  using VectorType = Vector<Scalar>;

  explicit TriangularBasis(Index n) : alpha_(n), beta_(n) {
    if (n < 1) {
      throw std::invalid_argument("TriangularBasis: dimension must be >= 1");
    }
    // alpha_k = sqrt(1 - sum_{i<k} beta_i^2), beta_k = (1/2 - sum_{i<k} beta_i^2) / alpha_k,
    // with one running accumulator for the beta^2 prefix sum.
    Scalar beta_sq_sum = 0;
    for (Index k = 0; k < n; ++k) {
      const Scalar a2 = Scalar(1) - beta_sq_sum;
      if (!(a2 > Scalar(0))) {
        throw std::domain_error("TriangularBasis: alpha underflows at k = " +
                                std::to_string(k + 1));
      }
      alpha_[k] = std::sqrt(a2);
      beta_[k] = (Scalar(0.5) - beta_sq_sum) / alpha_[k];
      beta_sq_sum += beta_[k] * beta_[k];
    }
  }

  Index dim() const { return alpha_.size(); }
  const VectorType& alpha() const { return alpha_; }
  const VectorType& beta() const { return beta_; }

 private:
  VectorType alpha_;
  VectorType beta_;
};

namespace detail {

template <typename Scalar, typename Derived>
void check_dim(const TriangularBasis<Scalar>& basis,
               const Eigen::MatrixBase<Derived>& v, const char* where) {
  if (v.size() != basis.dim()) {
    throw std::invalid_argument(std::string(where) + ": vector has size " +
                                std::to_string(v.size()) + ", basis dimension is " +
                                std::to_string(basis.dim()));
  }
}

}  // namespace detail

/// y = B x in one backward pass: s_n = 0, y_k = alpha_k x_k + beta_k s_k,
/// s_{k-1} = s_k + x_k.
template <typename Scalar, typename Derived>
void tri_to_cart(const TriangularBasis<Scalar>& basis,
                 const Eigen::MatrixBase<Derived>& x, Vector<Scalar>& y) {
  detail::check_dim(basis, x, "tri_to_cart");
  const Index n = basis.dim();
  const auto& alpha = basis.alpha();
  const auto& beta = basis.beta();
  y.resize(n);
  Scalar s = 0;  // suffix sum of x
  for (Index k = n - 1; k >= 0; --k) {
    const Scalar xk = x[k];
    y[k] = alpha[k] * xk + beta[k] * s;
    s += xk;
  }
}

template <typename Scalar, typename Derived>
Vector<Scalar> tri_to_cart(const TriangularBasis<Scalar>& basis,
                           const Eigen::MatrixBase<Derived>& x) {
  Vector<Scalar> y;
  tri_to_cart(basis, x, y);
  return y;
}

/// x = B^{-1} y, same backward pass with the division inverted:
/// x_k = (y_k - beta_k s_k) / alpha_k.
template <typename Scalar, typename Derived>
void cart_to_tri(const TriangularBasis<Scalar>& basis,
                 const Eigen::MatrixBase<Derived>& y, Vector<Scalar>& x) {
  detail::check_dim(basis, y, "cart_to_tri");
  const Index n = basis.dim();
  const auto& alpha = basis.alpha();
  const auto& beta = basis.beta();
  x.resize(n);
  Scalar s = 0;
  for (Index k = n - 1; k >= 0; --k) {
    const Scalar xk = (y[k] - beta[k] * s) / alpha[k];
    x[k] = xk;
    s += xk;
  }
}

template <typename Scalar, typename Derived>
Vector<Scalar> cart_to_tri(const TriangularBasis<Scalar>& basis,
                           const Eigen::MatrixBase<Derived>& y) {
  Vector<Scalar> x;
  cart_to_tri(basis, y, x);
  return x;
}

/// Explicit n x n matrix: alpha_i on the diagonal, beta_i right of it, zeros
/// below. Quadratic storage; meant for the O(n^2) baseline, oracles and tests.
template <typename Scalar>
Matrix<Scalar> materialize_dense(const TriangularBasis<Scalar>& basis) {
  const Index n = basis.dim();
  Matrix<Scalar> b = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    b(i, i) = basis.alpha()[i];
    for (Index j = i + 1; j < n; ++j) {
      b(i, j) = basis.beta()[i];
    }
  }
  return b;
}

}  // namespace trilat

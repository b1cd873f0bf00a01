#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rae {

// Dense square matrix, row-major. Sized for the small systems that show up
// here (Hessians restricted to sparse supports, bordered KKT solves).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t n() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// In-place lower Cholesky factor of a symmetric matrix. Returns false if a
// non-positive pivot appears (matrix not positive definite).
inline bool cholesky_factor(Matrix& a) {
  const std::size_t n = a.n();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
      a(j, i) = 0.0;
    }
  }
  return true;
}

// Solves L L^T x = b given the factor from cholesky_factor.
inline std::vector<double> cholesky_solve(const Matrix& chol, std::span<const double> b) {
  const std::size_t n = chol.n();
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol(i, k) * x[k];
    x[i] = s / chol(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= chol(k, i) * x[k];
    x[i] = s / chol(i, i);
  }
  return x;
}

}  // namespace rae

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracspec {

using Vector = std::vector<double>;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cholesky pivot failure; carries the index of the first nonpositive pivot.
struct NotPositiveDefinite : NumericalError {
  std::size_t pivot;
  explicit NotPositiveDefinite(std::size_t pivot_index)
      : NumericalError("matrix not positive definite: pivot " +
                       std::to_string(pivot_index) + " is nonpositive"),
        pivot(pivot_index) {}
};

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

// Symmetric matrix with full dense storage. Symmetry is a construction-time
// contract: from_dense rejects asymmetry beyond tol and averages the rest;
// set() mirrors writes.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim) : m_(dim, dim) {}

  static SymmetricMatrix identity(std::size_t dim);
  static SymmetricMatrix diagonal(const Vector& d);
  // Validates max |a_ij - a_ji| <= tol * max(1, max |a_ij|), then symmetrizes.
  static SymmetricMatrix from_dense(const Matrix& m, double tol = 1e-12);

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add(std::size_t i, std::size_t j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }

  const Matrix& dense() const { return m_; }
  Matrix& mutable_dense() { return m_; }  // caller keeps the symmetry contract

 private:
  Matrix m_;
};

Vector matvec(const Matrix& a, const Vector& x);
Vector matvec(const SymmetricMatrix& a, const Vector& x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double frobenius_norm(const Matrix& a);
double frobenius_norm(const SymmetricMatrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Lower Cholesky factor of a symmetric positive definite matrix.
// Throws NotPositiveDefinite naming the first failing pivot index.
Matrix cholesky_lower(const SymmetricMatrix& a);

// Solve L x = b (forward) and L^T x = b (backward) for lower-triangular L.
Vector solve_lower(const Matrix& l, const Vector& b);
Vector solve_lower_transposed(const Matrix& l, const Vector& b);

// Solve a small symmetric positive definite system via Cholesky.
Vector solve_spd(const SymmetricMatrix& a, const Vector& b);

}  // namespace fracspec

#include "fracspec/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace fracspec {

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
  SymmetricMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.set(i, i, 1.0);
  return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
  SymmetricMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& m, double tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("from_dense: matrix is not square");
  const std::size_t n = m.rows();
  double asym = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      if (j > i) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    }
  if (asym > tol * scale)
    throw std::invalid_argument("from_dense: asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
  SymmetricMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.set(i, i, m(i, i));
    for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  }
  return s;
}

Vector matvec(const Matrix& a, const Vector& x) {
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* r = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

Vector matvec(const SymmetricMatrix& a, const Vector& x) { return matvec(a.dense(), x); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* br = b.row(k);
      double* cr = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) cr[j] += aik * br[j];
    }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double dot(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) acc += a.data()[i] * a.data()[i];
  return std::sqrt(acc);
}

double frobenius_norm(const SymmetricMatrix& a) { return frobenius_norm(a.dense()); }

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
    m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Matrix cholesky_lower(const SymmetricMatrix& a) {
  const std::size_t n = a.dim();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

Vector solve_lower(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x[k];
    x[i] = v / l(i, i);
  }
  return x;
}

Vector solve_lower_transposed(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x[k];
    x[ii] = v / l(ii, ii);
  }
  return x;
}

Vector solve_spd(const SymmetricMatrix& a, const Vector& b) {
  const Matrix l = cholesky_lower(a);
  return solve_lower_transposed(l, solve_lower(l, b));
}

}  // namespace fracspec

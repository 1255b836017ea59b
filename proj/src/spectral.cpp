#include "fracspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fracspec {

Vector EigenSystem::inverse_values() const {
  Vector mu(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0)
      throw NumericalError("inverse_values: zero eigenvalue at index " +
                           std::to_string(i));
    mu[i] = 1.0 / values[i];
  }
  return mu;
}

namespace {

// One Jacobi rotation annihilating a_pq, applied to A (full storage) and
// accumulated into V. Rotation parameters follow the classic stable form
// t = sgn(theta)/(|theta| + sqrt(theta^2+1)).
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 1.0 / (2.0 * theta);
  } else {
    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);
  const std::size_t n = a.rows();

  const double app = a(p, p), aqq = a(q, q);
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    const double aip = a(i, p), aiq = a(i, q);
    const double nip = aip - s * (aiq + tau * aip);
    const double niq = aiq + s * (aip - tau * aiq);
    a(i, p) = nip;
    a(p, i) = nip;
    a(i, q) = niq;
    a(q, i) = niq;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double vip = v(i, p), viq = v(i, q);
    v(i, p) = vip - s * (viq + tau * vip);
    v(i, q) = viq + s * (vip - tau * viq);
  }
}

double offdiag_sum(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) sum += std::abs(a(p, q));
  return sum;
}

void fix_sign(Matrix& v, std::size_t k) {
  std::size_t imax = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double mag = std::abs(v(i, k));
    if (mag > best) {
      best = mag;
      imax = i;
    }
  }
  if (v(imax, k) < 0.0)
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, k) = -v(i, k);
}

}  // namespace

EigenSystem eig_sym(const SymmetricMatrix& sym, const JacobiOptions& opts) {
  const std::size_t n = sym.dim();
  Matrix a = sym.dense();
  Matrix v = Matrix::identity(n);

  if (n > 1) {
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      const double off = offdiag_sum(a);
      if (off == 0.0) {
        converged = true;
        break;
      }
      // loose threshold for the first sweeps, then full annihilation
      const double thresh = (sweep < 3) ? 0.2 * off / double(n * n) : 0.0;
      for (std::size_t p = 0; p < n - 1; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = std::abs(a(p, q));
          const double small =
              100.0 * std::numeric_limits<double>::epsilon() *
              (std::abs(a(p, p)) + std::abs(a(q, q)));
          if (sweep > 3 && apq < small) {
            a(p, q) = 0.0;
            a(q, p) = 0.0;
          } else if (apq > thresh) {
            rotate(a, v, p, q);
          }
        }
      }
    }
    if (!converged && offdiag_sum(a) != 0.0) {
      // accept if the remaining off-diagonal mass is at rounding level
      double diag_scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) diag_scale += std::abs(a(i, i));
      if (offdiag_sum(a) > 1e-10 * std::max(1.0, diag_scale))
        throw NumericalError("eig_sym: Jacobi sweeps did not converge");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
    fix_sign(es.vectors, k);
  }
  return es;
}

EigenSystem eig_gen(const SymmetricMatrix& k, const SymmetricMatrix& m,
                    const JacobiOptions& opts) {
  const std::size_t n = k.dim();
  if (m.dim() != n) throw std::invalid_argument("eig_gen: dimension mismatch");
  const Matrix l = cholesky_lower(m);

  // C = L^{-1} K L^{-T}, assembled column by column.
  Matrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector ej(n, 0.0);
    ej[j] = 1.0;
    const Vector kcol = matvec(k, solve_lower_transposed(l, ej));
    const Vector ccol = solve_lower(l, kcol);
    for (std::size_t i = 0; i < n; ++i) c(i, j) = ccol[i];
  }
  EigenSystem es = eig_sym(SymmetricMatrix::from_dense(c, 1e-10), opts);

  // back-transform and re-orthonormalize in the M inner product (MGS)
  Matrix vecs(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    Vector y = es.vectors.column(col);
    Vector x = solve_lower_transposed(l, y);
    for (std::size_t i = 0; i < n; ++i) vecs(i, col) = x[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    Vector x = vecs.column(col);
    for (std::size_t prev = 0; prev < col; ++prev) {
      const Vector p = vecs.column(prev);
      const double proj = dot(x, matvec(m, p));
      for (std::size_t i = 0; i < n; ++i) x[i] -= proj * p[i];
    }
    const double nrm = std::sqrt(dot(x, matvec(m, x)));
    if (!(nrm > 0.0)) throw NumericalError("eig_gen: degenerate vector in MGS");
    for (std::size_t i = 0; i < n; ++i) vecs(i, col) = x[i] / nrm;
  }
  es.vectors = std::move(vecs);
  for (std::size_t col = 0; col < n; ++col) fix_sign(es.vectors, col);
  es.metric = m;
  return es;
}

std::vector<EigenCluster> detect_clusters(const EigenSystem& es, double cluster_tol,
                                          IndexRange window) {
  const std::size_t n = es.dim();
  const std::size_t lo = std::min(window.lo, n);
  const std::size_t hi = std::min(window.hi, n);
  std::vector<EigenCluster> clusters;
  std::size_t start = lo;
  while (start < hi) {
    std::size_t end = start + 1;
    while (end < hi &&
           es.values[end] - es.values[end - 1] <=
               cluster_tol * (1.0 + std::abs(es.values[end - 1])))
      ++end;
    EigenCluster cl;
    cl.indices.resize(end - start);
    std::iota(cl.indices.begin(), cl.indices.end(), start);
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += es.values[k];
    cl.center = sum / double(end - start);
    cl.basis = Matrix(es.vectors.rows(), end - start);
    for (std::size_t k = start; k < end; ++k)
      for (std::size_t i = 0; i < es.vectors.rows(); ++i)
        cl.basis(i, k - start) = es.vectors(i, k);
    cl.label = "cluster[" + std::to_string(start) + ".." + std::to_string(end - 1) +
               "]";
    clusters.push_back(std::move(cl));
    start = end;
  }
  return clusters;
}

double eigen_residual(const SymmetricMatrix& a, const EigenSystem& es) {
  double worst = 0.0;
  for (std::size_t k = 0; k < es.dim(); ++k) {
    Vector v = es.eigenvector(k);
    Vector av = matvec(a, v);
    for (std::size_t i = 0; i < v.size(); ++i) av[i] -= es.values[k] * v[i];
    worst = std::max(worst, norm2(av));
  }
  return worst;
}

double eigen_residual(const SymmetricMatrix& k, const SymmetricMatrix& m,
                      const EigenSystem& es) {
  double worst = 0.0;
  for (std::size_t c = 0; c < es.dim(); ++c) {
    Vector v = es.eigenvector(c);
    Vector kv = matvec(k, v);
    const Vector mv = matvec(m, v);
    for (std::size_t i = 0; i < v.size(); ++i) kv[i] -= es.values[c] * mv[i];
    worst = std::max(worst, norm2(kv));
  }
  return worst;
}

}  // namespace fracspec

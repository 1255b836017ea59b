#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/linalg.hpp"

namespace fracspec {

struct JacobiOptions {
  int max_sweeps = 64;
};

// Eigenpairs of a (possibly generalized) symmetric problem, values ascending.
// Column k of `vectors` belongs to values[k]. For the generalized problem the
// vectors are metric-orthonormal (v^T M v = 1) and `metric` holds M.
struct EigenSystem {
  Vector values;
  Matrix vectors;
  std::optional<SymmetricMatrix> metric;

  std::size_t dim() const { return values.size(); }
  Vector eigenvector(std::size_t k) const { return vectors.column(k); }
  // mu_k = 1/lambda_k; throws NumericalError on a zero eigenvalue.
  Vector inverse_values() const;
};

// Dense symmetric eigensolve by cyclic Jacobi rotations. Deterministic:
// fixed sweep order, threshold schedule, stable ascending sort, and a sign
// convention (the first entry of largest magnitude is made positive).
EigenSystem eig_sym(const SymmetricMatrix& a, const JacobiOptions& opts = {});

// Generalized problem K v = lambda M v via Cholesky reduction M = L L^T.
// Throws NotPositiveDefinite (naming the failing pivot) if M is not SPD.
// Returned vectors are re-orthonormalized in the M inner product by
// modified Gram-Schmidt.
EigenSystem eig_gen(const SymmetricMatrix& k, const SymmetricMatrix& m,
                    const JacobiOptions& opts = {});

// Contiguous group of numerically coincident eigenvalues standing in for one
// degenerate eigenvalue.
struct EigenCluster {
  double center = 0.0;
  std::vector<std::size_t> indices;
  Matrix basis;  // dim x multiplicity, metric-orthonormal
  std::string label;

  std::size_t multiplicity() const { return indices.size(); }
};

struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = static_cast<std::size_t>(-1);  // exclusive
};

// Splits the ascending spectrum into clusters: consecutive values belong to
// the same cluster when lambda_{k+1} - lambda_k <= cluster_tol * (1 + |lambda_k|).
std::vector<EigenCluster> detect_clusters(const EigenSystem& es,
                                          double cluster_tol = 1e-6,
                                          IndexRange window = {});

// Residual max_k ||A v_k - lambda_k v_k||_2 (or ||K v - lambda M v|| when
// metric is present), for diagnostics and tests.
double eigen_residual(const SymmetricMatrix& a, const EigenSystem& es);
double eigen_residual(const SymmetricMatrix& k, const SymmetricMatrix& m,
                      const EigenSystem& es);

}  // namespace fracspec

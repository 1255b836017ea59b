#pragma once

#include <string>
#include <vector>

#include "fracspec/grid.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/spectral.hpp"

namespace fracspec {

enum class GammaFlavor { abstract, coefficient, domain };

// Symmetric nu x nu matrix of first-order interaction coefficients of a
// perturbation against a degenerate cluster basis.
struct GammaMatrix {
  std::size_t nu = 0;
  SymmetricMatrix entries;
  GammaFlavor flavor = GammaFlavor::abstract;
  std::string basis_id;

  // ascending eigenvalues of the entries
  Vector spectrum() const;
};

// Verdict of the multiplicity-preservation test: the perturbation keeps the
// cluster degenerate to first order iff its gamma matrix is a scalar multiple
// of the identity.
struct HMembership {
  bool is_member = false;
  double rho = 0.0;  // the scalar multiple (mean diagonal)
  double off_diag_norm = 0.0;
  double diag_spread = 0.0;
  double tol = 0.0;
};

// Rank report for the span of sampled gamma matrices together with the
// identity, inside the nu(nu+1)/2-dimensional space of symmetric matrices.
struct TransversalityReport {
  std::size_t nu = 0;
  std::size_t sample_count = 0;
  std::size_t span_dim = 0;
  bool full = false;
  std::size_t codimension = 0;  // nu(nu+1)/2 - 1, the claim certified when full
  Vector singular_values;       // descending
};

enum class SplitDirection { value, inverse };

// Gamma_ij = x_i^T dT x_j over the cluster basis columns, symmetrized.
GammaMatrix gamma_abstract(const SymmetricMatrix& dT, const EigenCluster& cluster);

// Lumped-quadrature gamma of a scalar field b against the cluster basis:
// Gamma_ij = sum_k b_k phi_i(k) phi_j(k) M_kk.
GammaMatrix gamma_quadrature(const ScalarField& b, const EigenCluster& cluster,
                             const SymmetricMatrix& mass, GammaFlavor flavor);

// First-order predicted eigenvalues of the perturbed cluster, ascending.
// direction=value:   lambda0 + eps * spec(Gamma)
// direction=inverse: composed through mu = 1/lambda, i.e. mu scales by
//                    (1 + eps * spec(Gamma)); requires lambda0 != 0.
Vector predict_splitting(double lambda0, const GammaMatrix& gamma, double eps,
                         SplitDirection direction);

HMembership h_membership(const GammaMatrix& gamma, double tol);

// Removes from b the unique combination of basis products phi_i phi_j whose
// gamma cancels the off-diagonal part and equalizes the diagonal, so that
// gamma(b') is a scalar multiple of the identity. Throws NumericalError
// (reporting the minimum eigenvalue) when the product Gram matrix is singular.
ScalarField project_to_H(const ScalarField& b, const EigenCluster& cluster,
                         const SymmetricMatrix& mass);

// Abstract flavor of the same projection: subtracts X (gamma(B) - rho I) X^T
// (X the orthonormal cluster basis), after which gamma of the result is
// exactly rho I.
SymmetricMatrix project_to_H(const SymmetricMatrix& b, const EigenCluster& cluster);

// Numerical rank of {vec(Gamma_1), ..., vec(Gamma_m), vec(Id)} with the
// isometric upper-triangle vectorization (off-diagonals scaled by sqrt(2)).
TransversalityReport transversality_check(const std::vector<GammaMatrix>& gammas,
                                          double rank_tol = 1e-8);

}  // namespace fracspec

#pragma once

#include <vector>

#include "fracspec/assembly.hpp"
#include "fracspec/perturbation.hpp"
#include "fracspec/spectral.hpp"

namespace fracspec {

// additive: (-Delta)^s phi + a phi = lambda phi
// multiplicative: (-Delta)^s phi = lambda a phi
enum class Flavor { additive, multiplicative };

struct CoefficientProblem {
  Flavor flavor = Flavor::additive;
  ScalarField base_a;
  FracOperator frac_op;
  EigenSystem spectrum;
  std::vector<EigenCluster> clusters;
};

// Solves the flavor's generalized eigenproblem and detects clusters inside the
// window. Enforces: multiplicative weight strictly positive; additive
// potential either nonnegative-bounded-below by 0 or sup-bounded by half the
// unperturbed ground eigenvalue.
CoefficientProblem solve_problem(Flavor flavor, const FracOperator& op,
                                 const ScalarField& a, double cluster_tol = 1e-6,
                                 IndexRange window = {});

// Gamma_ij = sum_k b(x_k) phi_i(x_k) phi_j(x_k) M_kk with the plain lumped
// mass; both flavors share this functional.
GammaMatrix gamma_coefficient(const ScalarField& b, const EigenCluster& cluster,
                              const CoefficientProblem& p);

struct SplittingObservation {
  double eps = 0.0;
  Vector predicted;       // ascending, from the first-order gamma prediction
  Vector measured;        // ascending, re-solved at this eps
  double max_deviation = 0.0;
  double cluster_width = 0.0;  // max - min of the measured cluster
};

struct SplittingReport {
  GammaMatrix gamma;
  double lambda0 = 0.0;
  Vector base_cluster_values;
  std::vector<SplittingObservation> observations;
  // consecutive-pair diagnostics: entry k compares observations k and k+1
  Vector deviation_ratios;
  Vector width_ratios;
  double b_sup = 0.0;
  double b_grad_sup = 0.0;
};

// Re-solves with a -> a + eps*b for each eps (the perturbed cluster is read
// off the same index window) and compares against predict_splitting. Guards:
// |eps|*sup|b| <= min(lambda_1/4, cluster gap/4); throws on cluster collision
// naming the colliding index.
SplittingReport verify_splitting(const CoefficientProblem& p, const ScalarField& b,
                                 const EigenCluster& cluster,
                                 const std::vector<double>& epsilons);

struct IndependenceReport {
  std::size_t nu = 0;
  SymmetricMatrix gram;  // of the unit-normalized products phi_i phi_j, i <= j
  double min_eigenvalue = 0.0;
  bool independent = false;
};

// Gram test of the cluster's pairwise products; independent iff the smallest
// eigenvalue of the normalized Gram exceeds 1e-3.
IndependenceReport independence_test(const EigenCluster& cluster,
                                     const SymmetricMatrix& mass);

}  // namespace fracspec

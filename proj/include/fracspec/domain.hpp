#pragma once

#include <array>
#include <vector>

#include "fracspec/coefficient.hpp"
#include "fracspec/perturbation.hpp"

namespace fracspec {

struct TraceSample {
  std::array<double, 2> point{0.0, 0.0};   // boundary point
  std::array<double, 2> normal{0.0, 0.0};  // outward unit normal
  double value = 0.0;                      // fitted phi/delta^s at the boundary
  double residual = 0.0;                   // relative fit residual
  bool excluded = false;                   // residual above 0.05
};

// delta^s-weighted boundary trace of one cluster member.
struct BoundaryTrace {
  std::size_t cluster_index = 0;
  std::vector<TraceSample> samples;
  int dimension = 1;      // of the grid the trace was extracted from
  double spacing = 0.0;   // its h, the 2D quadrature step
};

enum class PsiFamily { translation, dilation, tabulated };

// Perturbation vector field psi; the perturbed domain is (I + eps*psi)(Omega).
//   translation: psi(x) = e            (constant vector)
//   dilation:    psi(x) = c * x
//   tabulated:   psi . N given numerically at the boundary samples
struct DomainPerturbation {
  PsiFamily family = PsiFamily::translation;
  std::array<double, 2> translation{0.0, 0.0};
  double dilation = 0.0;
  Vector boundary_values;  // tabulated psi.N per sample, sample order
  double magnitude = 0.0;

  static DomainPerturbation translation_of(double ex, double ey = 0.0);
  static DomainPerturbation dilation_of(double c);
  static DomainPerturbation tabulated_of(Vector values);
};

// Fits phi ~ c0*delta^s + c1*delta^{s+1} over the 6 nearest interior nodes
// along the inward normal at each boundary sample; the trace value is c0.
// 1D: exactly the two endpoints, with node values calibrated against the
// unit-source solve (the scheme's boundary layer is an h-independent nodal
// ratio, measured on A v = 1 whose exact solution is closed-form).
// 2D square: node-aligned samples on each edge, excluding points within 4h of
// a corner; no calibration (ratio-type uses cancel the layer bias).
BoundaryTrace extract_trace(const ScalarField& phi, std::size_t cluster_index,
                            const Grid& grid, double s);

// Gamma_ij = boundary quadrature of trace_i * trace_j * (psi . N): endpoint
// sum in 1D, per-edge trapezoid in 2D. Samples excluded in any member trace
// are dropped from the quadrature.
GammaMatrix gamma_domain(const DomainPerturbation& psi,
                         const std::vector<BoundaryTrace>& traces,
                         const EigenCluster& cluster);

// First-order eigenvalue derivatives of the cluster under the boundary
// perturbation: ascending spectrum of -Gamma(1+s)^2 * Gamma_dom.
Vector hadamard_derivative(double lambda0, const GammaMatrix& gamma_dom, double s);

struct DomainDerivativeObservation {
  double eps = 0.0;
  Vector measured;    // central-difference derivatives, ascending members
  Vector richardson;  // (4*D(eps/2) - D(eps))/3
  double max_deviation = 0.0;  // against the Hadamard prediction
};

struct DomainSplitReport {
  GammaMatrix gamma_dom;
  double lambda0 = 0.0;
  Vector predicted;  // hadamard_derivative output
  std::vector<DomainDerivativeObservation> observations;
};

// Re-assembles and re-solves on the exactly representable perturbed domains
// (any 1D psi via interval endpoints; translated or dilated squares in 2D),
// forms central-difference eigenvalue derivatives with a Richardson check at
// eps/2, and compares against hadamard_derivative.
DomainSplitReport verify_domain_splitting(const CoefficientProblem& base,
                                          const DomainPerturbation& psi,
                                          const EigenCluster& cluster,
                                          const std::vector<double>& epsilons);

}  // namespace fracspec

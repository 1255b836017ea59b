#pragma once

#include <optional>

#include "fracspec/grid.hpp"
#include "fracspec/linalg.hpp"

namespace fracspec {

// Discrete integral fractional Laplacian with exterior Dirichlet condition.
// `stiffness` collocates (-Delta)^s at the nodes (exterior-tail mass on the
// diagonal); its entries scale as r^{-2s} under dilation of the domain and are
// invariant under translation. Eigenproblems pair system_matrix() against the
// lumped mass from mass_matrix, which leaves eigenvalues equal to those of the
// collocation matrix while making eigenvectors mass-orthonormal.
struct FracOperator {
  double s = 0.5;
  GridPtr grid;
  SymmetricMatrix stiffness;
  double normalization = 0.0;  // C_{n,s}
  std::optional<ScalarField> potential;

  // h^d * stiffness plus the diagonal mass-weighted potential term.
  SymmetricMatrix system_matrix() const;
  FracOperator with_potential(ScalarField a) const;
};

struct AssemblyOptions {
  int threads = 1;
  bool use_cache = true;  // 2D exterior-tail cache (FRACSPEC_CACHE_DIR)
};

// 1D collocation: far cells integrate the kernel exactly against the
// piecewise-linear interpolant; the two cells adjacent to the singularity use
// the parabola through the three nearest nodes (weight h^{-2s}/(2-2s) on the
// second difference); the exterior tail C_{1,s}/(2s)[(beta-x)^{-2s}+(x-alpha)^{-2s}]
// sits on the diagonal. All weights depend on index distances only, so the
// matrix is bitwise translation-invariant and reflection-symmetric.
FracOperator assemble_1d(double s, double lo, double hi, std::size_t n,
                         const AssemblyOptions& opts = {});

// 2D square collocation on Voronoi cells: displacement-class kernel masses
// (radially exact, adaptive in angle), a 5-point self-cell correction, and a
// semi-analytic exterior tail (half-plane masses minus corner quadrants) per
// node. Weight and tail memo tables are canonicalized under the D4 symmetry
// group, so K commutes with the square's symmetries exactly.
FracOperator assemble_2d_square(double s, double lo, double hi, std::size_t n,
                                const AssemblyOptions& opts = {});

// Same scheme on a square of the given side with independent axis origins
// (exact representation of translated squares).
FracOperator assemble_2d_square_at(double s, double lox, double loy, double side,
                                   std::size_t n, const AssemblyOptions& opts = {});

// Exterior-tail vector in index units for the 2D square (diagnostic /
// cache-facing helper; assemble_2d_square uses it internally).
Vector exterior_tails_2d(double s, std::size_t n, const AssemblyOptions& opts = {});

// Solves the collocation system A v = 1, the discrete analogue of
// (-Delta)^s v = 1, whose exact solution on interval/disk geometries has the
// closed form (R^2 - |x - c|^2)^s / ball_constant. Used by trace calibration
// and tests.
ScalarField solve_unit_source(const FracOperator& op);

}  // namespace fracspec

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracspec/assembly.hpp"
#include "fracspec/special.hpp"
#include "internal_parallel.hpp"

namespace fracspec {

SymmetricMatrix FracOperator::system_matrix() const {
  // left side of the generalized problem paired with mass_matrix: the cell
  // measure scales the collocation matrix so eigenvalues are unchanged and
  // eigenvectors come out mass-orthonormal
  const double cell = std::pow(grid->h(), grid->dimension());
  SymmetricMatrix k(stiffness.dim());
  for (std::size_t i = 0; i < k.dim(); ++i)
    for (std::size_t j = i; j < k.dim(); ++j) k.set(i, j, cell * stiffness(i, j));
  if (potential)
    for (std::size_t i = 0; i < k.dim(); ++i)
      k.add(i, i, cell * potential->values[i]);
  return k;
}

FracOperator FracOperator::with_potential(ScalarField a) const {
  if (a.values.size() != grid->node_count())
    throw std::invalid_argument("with_potential: field does not match grid");
  FracOperator op = *this;
  op.potential = std::move(a);
  return op;
}

namespace {

void check_s(double s) {
  // s -> 0 and s -> 1 change the functional setting; reject instead of limiting
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("assemble: s must lie strictly in (0,1)");
}

// integral of t^{-2s} over [j, j+1], stable for 1-2s near 0
double cell_kernel_moment1(double j, double s) {
  const double e = 1.0 - 2.0 * s;
  const double logr = std::log((j + 1.0) / j);
  if (std::abs(e) < 1e-14) return logr;
  return std::pow(j, e) * std::expm1(e * logr) / e;
}

// a + b with the operands in sorted order, so that mirrored nodes producing
// the same value pair sum to bitwise-identical results
double sym_sum(double a, double b) {
  if (a > b) std::swap(a, b);
  return a + b;
}

}  // namespace

FracOperator assemble_1d(double s, double lo, double hi, std::size_t n,
                         const AssemblyOptions& opts) {
  check_s(s);
  if (!(hi > lo)) throw std::invalid_argument("assemble_1d: requires hi > lo");
  if (n < 8) throw std::invalid_argument("assemble_1d: n must be at least 8");

  GridPtr grid = Grid::interval(lo, hi, n);
  const double h = grid->h();
  const double c1s = frac_normalization(1, s);
  const double chat = c1s * std::pow(h, -2.0 * s);

  // Per-cell kernel integrals at index distance j (cell [j, j+1] in h units):
  //   i0 = integral of t^{-1-2s}        (kernel mass of the cell)
  //   i1 = integral of t^{-2s}
  //   q  = (j+1) i0 - i1  (weight of the near node of the cell)
  //   r  = i1 - j i0      (weight of the far node; q + r = i0 exactly)
  Vector i0(n + 1), q(n + 1), r(n + 1), prefix(n + 1, 0.0);
  for (std::size_t jj = 1; jj <= n; ++jj) {
    const double j = double(jj);
    const double a = (std::pow(j, -2.0 * s) - std::pow(j + 1.0, -2.0 * s)) / (2.0 * s);
    const double b = cell_kernel_moment1(j, s);
    i0[jj] = a;
    q[jj] = (j + 1.0) * a - b;
    r[jj] = b - j * a;
    prefix[jj] = prefix[jj - 1] + a;
  }
  // parabola through the three nearest nodes on the singular cell pair
  const double near = 1.0 / (2.0 - 2.0 * s);

  SymmetricMatrix k(n);
  Matrix& kd = k.mutable_dense();

  detail::parallel_rows(n, opts.threads, [&](std::size_t row) {
    const std::size_t i = row + 1;  // 1-based node index
    double* out = kd.row(row);
    const double tail =
        sym_sum(std::pow(double(i), -2.0 * s), std::pow(double(n + 1 - i), -2.0 * s)) /
        (2.0 * s);
    out[row] = chat * (2.0 * near + sym_sum(prefix[i - 1], prefix[n - i]) + tail);
    if (i >= 2) out[row - 1] -= chat * near;
    if (i + 1 <= n) out[row + 1] -= chat * near;
    // right cells [i+j, i+j+1], j = 1..n-i; nodes beyond n are exterior (u = 0)
    for (std::size_t j = 1; j + i <= n; ++j) {
      out[row + j] -= chat * q[j];
      if (i + j + 1 <= n) out[row + j + 1] -= chat * r[j];
    }
    // left cells [i-j-1, i-j], j = 1..i-1
    for (std::size_t j = 1; j < i; ++j) {
      out[row - j] -= chat * q[j];
      if (i >= j + 2) out[row - j - 1] -= chat * r[j];
    }
  });

  FracOperator op;
  op.s = s;
  op.grid = grid;
  op.stiffness = std::move(k);
  op.normalization = c1s;
  return op;
}

ScalarField solve_unit_source(const FracOperator& op) {
  Vector rhs(op.grid->node_count(), 1.0);
  Vector v = solve_spd(op.stiffness, rhs);
  return ScalarField(op.grid, std::move(v));
}

}  // namespace fracspec

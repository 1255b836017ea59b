#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracspec/assembly.hpp"
#include "fracspec/quadrature.hpp"
#include "fracspec/special.hpp"
#include "fracspec/tail_cache.hpp"
#include "internal_parallel.hpp"

namespace fracspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// kernel mass of the unit cell centered at (a,b) in index units, a >= b >= 0,
// a >= 1: radially exact, adaptive in angle with splits at the corner angles
double cell_mass(double a, double b, double s) {
  const double xs0 = a - 0.5, xs1 = a + 0.5;
  const double ys0 = b - 0.5, ys1 = b + 0.5;
  double ang[4] = {std::atan2(ys0, xs0), std::atan2(ys0, xs1), std::atan2(ys1, xs0),
                   std::atan2(ys1, xs1)};
  std::sort(ang, ang + 4);
  auto f = [&](double th) {
    const double c = std::cos(th), sn = std::sin(th);
    double t0 = xs0 / c, t1 = xs1 / c;
    if (std::abs(sn) > 1e-300) {
      double u0 = ys0 / sn, u1 = ys1 / sn;
      if (u0 > u1) std::swap(u0, u1);
      t0 = std::max(t0, u0);
      t1 = std::min(t1, u1);
    } else if (ys0 > 0.0 || ys1 < 0.0) {
      return 0.0;
    }
    if (!(t1 > t0) || !(t0 > 0.0)) return 0.0;
    return (std::pow(t0, -2.0 * s) - std::pow(t1, -2.0 * s)) / (2.0 * s);
  };
  double total = 0.0;
  for (int k = 0; k + 1 < 4; ++k)
    if (ang[k + 1] > ang[k]) total += adaptive_simpson(f, ang[k], ang[k + 1], 1e-12, 1e-16);
  return total;
}

// kernel mass of the quarter-plane {x >= p, y >= q}; symmetric in (p,q),
// evaluated in canonical order so mirrored nodes get bitwise-equal tails
double corner_mass(double p, double q, double s) {
  if (p > q) std::swap(p, q);
  const double split = std::atan2(q, p);
  auto f_lo = [&](double th) { return std::pow(std::sin(th) / q, 2.0 * s); };
  auto f_hi = [&](double th) { return std::pow(std::cos(th) / p, 2.0 * s); };
  return (adaptive_simpson(f_lo, 0.0, split, 1e-12, 1e-16) +
          adaptive_simpson(f_hi, split, 0.5 * kPi, 1e-12, 1e-16)) /
         (2.0 * s);
}

// second-moment constant of the self cell: the quadratic model of u on the
// singular cell contributes (js/4) times the 5-point second difference
double js_constant(double s) {
  auto f = [&](double th) { return std::pow(2.0 * std::cos(th), 2.0 * s - 2.0); };
  return 8.0 / (2.0 - 2.0 * s) * adaptive_simpson(f, 0.0, 0.25 * kPi, 1e-12, 1e-16);
}

// displacement-class table, canonical key a >= b
struct CellMassTable {
  std::size_t stride = 0;
  Vector w;
  double at(std::size_t dx, std::size_t dy) const {
    const std::size_t a = std::max(dx, dy), b = std::min(dx, dy);
    return w[a * stride + b];
  }
};

CellMassTable build_cell_masses(double s, std::size_t n) {
  CellMassTable t;
  t.stride = n;
  t.w.assign(n * n, 0.0);
  for (std::size_t a = 1; a < n; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      t.w[a * n + b] = cell_mass(double(a), double(b), s);
  return t;
}

void check_2d_args(double s, std::size_t n) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("assemble: s must lie strictly in (0,1)");
  if (n < 8 || n > 48)
    throw std::invalid_argument("assemble_2d_square: n per axis must lie in [8,48]");
}

}  // namespace

// Exterior kernel mass per node in index units.  The cells cover the square
// [1/2, n+1/2]^2; everything outside it (including the half-cell strip inside
// the domain) carries the zero exterior value.  Complement of a rectangle =
// four half-planes minus the four doubly counted quarter-planes.
Vector exterior_tails_2d(double s, std::size_t n, const AssemblyOptions& opts) {
  check_2d_args(s, n);
  (void)opts;
  const double kappa = halfplane_constant(s);

  // corner masses for all canonical half-integer distance pairs
  Matrix corner(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = corner_mass(double(i) + 0.5, double(j) + 0.5, s);
      corner(i, j) = v;
      corner(j, i) = v;
    }
  auto half = [&](std::size_t d_idx) {
    return kappa * std::pow(double(d_idx) + 0.5, -2.0 * s) / (2.0 * s);
  };

  Vector tails(n * n, 0.0);
  auto fold = [n](std::size_t i) { return std::min(i, n - 1 - i); };
  for (std::size_t p = 0; p < n * n; ++p) {
    const std::size_t ix = p / n, iy = p % n;
    const std::size_t u = std::min(fold(ix), fold(iy));
    const std::size_t v = std::max(fold(ix), fold(iy));
    const std::size_t rep = u * n + v;
    if (p != rep) {
      tails[p] = tails[rep];  // dihedral image, computed earlier in index order
      continue;
    }
    const std::size_t dl = ix, dr = n - 1 - ix, db = iy, dt = n - 1 - iy;
    const double sides = (half(dl) + half(dr)) + (half(db) + half(dt));
    const double corners =
        (corner(dl, db) + corner(dl, dt)) + (corner(dr, db) + corner(dr, dt));
    tails[p] = sides - corners;
  }
  return tails;
}

FracOperator assemble_2d_square(double s, double lo, double hi, std::size_t n,
                                const AssemblyOptions& opts) {
  if (!(hi > lo)) throw std::invalid_argument("assemble_2d_square: requires hi > lo");
  return assemble_2d_square_at(s, lo, lo, hi - lo, n, opts);
}

FracOperator assemble_2d_square_at(double s, double lox, double loy, double side,
                                   std::size_t n, const AssemblyOptions& opts) {
  check_2d_args(s, n);
  if (!(side > 0.0)) throw std::invalid_argument("assemble_2d_square: requires side > 0");

  GridPtr grid = Grid::square_at(lox, loy, side, n);
  const std::size_t nn = n * n;
  const double h = grid->h();
  const double c2s = frac_normalization(2, s);
  const double chat = c2s * std::pow(h, -2.0 * s);

  Vector tails;
  std::string cache_file;
  if (opts.use_cache) {
    if (auto dir = tail_cache::directory_from_env()) {
      cache_file = tail_cache::file_name(*dir, s, lox, lox + side, n);
      if (auto cached = tail_cache::load(cache_file, s, n)) tails = std::move(*cached);
    }
  }
  if (tails.empty()) {
    tails = exterior_tails_2d(s, n, opts);
    if (!cache_file.empty()) tail_cache::store(cache_file, s, n, tails);
  }
  if (tails.size() != nn) throw NumericalError("exterior tail table has wrong size");

  const CellMassTable wt = build_cell_masses(s, n);
  const double js = js_constant(s);
  const double js4 = 0.25 * js;

  // total cell mass around each node, computed once per dihedral orbit so the
  // eight images share bitwise-identical diagonals
  Vector cell_sum(nn, 0.0);
  auto fold = [n](std::size_t i) { return std::min(i, n - 1 - i); };
  for (std::size_t p = 0; p < nn; ++p) {
    const std::size_t ix = p / n, iy = p % n;
    const std::size_t u = std::min(fold(ix), fold(iy));
    const std::size_t v = std::max(fold(ix), fold(iy));
    const std::size_t rep = u * n + v;
    if (p != rep) {
      cell_sum[p] = cell_sum[rep];
      continue;
    }
    double acc = 0.0;
    for (std::size_t q = 0; q < nn; ++q) {
      if (q == p) continue;
      const std::size_t qx = q / n, qy = q % n;
      const std::size_t dx = ix > qx ? ix - qx : qx - ix;
      const std::size_t dy = iy > qy ? iy - qy : qy - iy;
      acc += wt.at(dx, dy);
    }
    cell_sum[p] = acc;
  }

  SymmetricMatrix k(nn);
  Matrix& kd = k.mutable_dense();
  detail::parallel_rows(nn, opts.threads, [&](std::size_t p) {
    double* out = kd.row(p);
    const std::size_t ix = p / n, iy = p % n;
    for (std::size_t q = 0; q < nn; ++q) {
      if (q == p) continue;
      const std::size_t qx = q / n, qy = q % n;
      const std::size_t dx = ix > qx ? ix - qx : qx - ix;
      const std::size_t dy = iy > qy ? iy - qy : qy - iy;
      double val = wt.at(dx, dy);
      if (dx + dy == 1) val += js4;  // quadratic self-cell model, 4-neighbor leg
      out[q] = -chat * val;
    }
    out[p] = chat * ((cell_sum[p] + js) + tails[p]);
  });

  FracOperator op;
  op.s = s;
  op.grid = grid;
  op.stiffness = std::move(k);
  op.normalization = c2s;
  return op;
}

}  // namespace fracspec

#include "fracspec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracspec {

namespace {

void check_bounds(double lo, double hi, std::size_t n) {
  if (!(hi > lo)) throw std::invalid_argument("grid: requires hi > lo");
  if (n < 8) throw std::invalid_argument("grid: n_per_axis must be at least 8");
}

}  // namespace

std::shared_ptr<const Grid> Grid::interval(double lo, double hi, std::size_t n) {
  check_bounds(lo, hi, n);
  auto g = std::make_shared<Grid>();
  g->dim_ = 1;
  g->lo_ = lo;
  g->hi_ = hi;
  g->loy_ = lo;
  g->hiy_ = hi;
  g->n_ = n;
  g->h_ = (hi - lo) / double(n + 1);
  g->points_.resize(n);
  g->delta_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + double(i + 1) * g->h_;
    g->points_[i] = {x, 0.0};
    g->delta_[i] = std::min(x - lo, hi - x);
  }
  return g;
}

std::shared_ptr<const Grid> Grid::square(double lo, double hi, std::size_t n) {
  return square_at(lo, lo, hi - lo, n);
}

std::shared_ptr<const Grid> Grid::square_at(double lox, double loy, double side,
                                            std::size_t n) {
  check_bounds(lox, lox + side, n);
  auto g = std::make_shared<Grid>();
  g->dim_ = 2;
  g->lo_ = lox;
  g->hi_ = lox + side;
  g->loy_ = loy;
  g->hiy_ = loy + side;
  g->n_ = n;
  g->h_ = side / double(n + 1);
  g->points_.resize(n * n);
  g->delta_.resize(n * n);
  for (std::size_t ix = 0; ix < n; ++ix) {
    const double x = lox + double(ix + 1) * g->h_;
    for (std::size_t iy = 0; iy < n; ++iy) {
      const double y = loy + double(iy + 1) * g->h_;
      const std::size_t p = g->index2(ix, iy);
      g->points_[p] = {x, y};
      g->delta_[p] = std::min(std::min(x - g->lo_, g->hi_ - x),
                              std::min(y - g->loy_, g->hiy_ - y));
    }
  }
  return g;
}

ScalarField::ScalarField(GridPtr g, Vector v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("ScalarField: null grid");
  if (values.size() != grid->node_count())
    throw std::invalid_argument("ScalarField: value count does not match grid");
}

ScalarField ScalarField::zeros(GridPtr g) {
  Vector v(g->node_count(), 0.0);
  return ScalarField(std::move(g), std::move(v));
}

ScalarField ScalarField::constant(GridPtr g, double c) {
  Vector v(g->node_count(), c);
  return ScalarField(std::move(g), std::move(v));
}

ScalarField ScalarField::sample(GridPtr g,
                                const std::function<double(double, double)>& f) {
  Vector v(g->node_count());
  for (std::size_t p = 0; p < g->node_count(); ++p)
    v[p] = f(g->point(p)[0], g->point(p)[1]);
  return ScalarField(std::move(g), std::move(v));
}

double ScalarField::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::grad_sup() const {
  const Grid& g = *grid;
  const double h = g.h();
  double m = 0.0;
  if (g.dimension() == 1) {
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      m = std::max(m, std::abs(values[i + 1] - values[i]) / h);
  } else {
    const std::size_t n = g.n_per_axis();
    for (std::size_t ix = 0; ix < n; ++ix)
      for (std::size_t iy = 0; iy < n; ++iy) {
        const double v = values[g.index2(ix, iy)];
        if (ix + 1 < n)
          m = std::max(m, std::abs(values[g.index2(ix + 1, iy)] - v) / h);
        if (iy + 1 < n)
          m = std::max(m, std::abs(values[g.index2(ix, iy + 1)] - v) / h);
      }
  }
  return m;
}

SymmetricMatrix mass_matrix(const Grid& grid, const ScalarField* weight,
                            MassRole role) {
  const std::size_t n = grid.node_count();
  const double cell = std::pow(grid.h(), grid.dimension());
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight ? weight->values[i] : 1.0;
    if (role == MassRole::metric && !(w > 0.0))
      throw std::invalid_argument("mass_matrix: metric weight must be strictly positive (node " +
                                  std::to_string(i) + ")");
    m.set(i, i, cell * w);
  }
  return m;
}

double integrate(const ScalarField& f, const ScalarField& g,
                 const SymmetricMatrix& mass) {
  if (f.values.size() != g.values.size() || mass.dim() != f.values.size())
    throw std::invalid_argument("integrate: shape mismatch");
  const Vector mg = matvec(mass, g.values);
  return dot(f.values, mg);
}

}  // namespace fracspec

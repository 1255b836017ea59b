#include <doctest.h>

#include <cmath>

#include "fracspec/grid.hpp"

using namespace fracspec;

TEST_CASE("interval grid places interior nodes and boundary distances") {
  // n interior nodes at lo + (i+1) h with h = (hi - lo) / (n + 1)
  const auto g = Grid::interval(-1.0, 1.0, 8);
  CHECK(g->dimension() == 1);
  CHECK(g->node_count() == 8);
  CHECK(g->h() == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(g->point(0)[0] == doctest::Approx(-7.0 / 9.0).epsilon(1e-15));
  CHECK(g->point(7)[0] == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
  CHECK(g->boundary_distance(0) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(g->boundary_distance(4) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("square grid indexes nodes as ix * n + iy") {
  const auto g = Grid::square(0.0, 1.0, 8);
  CHECK(g->dimension() == 2);
  CHECK(g->node_count() == 64);
  const std::size_t p = g->index2(3, 5);
  CHECK(p == 3 * 8 + 5);
  const auto x = g->point(p);
  CHECK(x[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
  CHECK(g->boundary_distance(g->index2(0, 4)) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("square_at shifts the origin without changing the mesh") {
  const auto a = Grid::square(0.0, 2.0, 8);
  const auto b = Grid::square_at(5.0, -3.0, 2.0, 8);
  CHECK(a->h() == b->h());
  for (std::size_t p = 0; p < a->node_count(); ++p) {
    CHECK(b->point(p)[0] == doctest::Approx(a->point(p)[0] + 5.0).epsilon(1e-15));
    CHECK(b->point(p)[1] == doctest::Approx(a->point(p)[1] - 3.0).epsilon(1e-15));
    CHECK(a->boundary_distance(p) == doctest::Approx(b->boundary_distance(p)));
  }
}

TEST_CASE("scalar fields sample coordinates and report sups") {
  const auto g = Grid::interval(0.0, 1.0, 16);
  const ScalarField f = ScalarField::sample(g, [](double x, double) { return 2.0 * x; });
  CHECK(f.values[0] == doctest::Approx(2.0 / 17.0).epsilon(1e-15));
  CHECK(f.sup_abs() == doctest::Approx(2.0 * 16.0 / 17.0).epsilon(1e-15));
  CHECK(f.grad_sup() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("lumped mass matrix carries the cell volume and weight") {
  const auto g = Grid::square(0.0, 1.0, 8);
  const SymmetricMatrix m = mass_matrix(*g);
  const double cell = (1.0 / 9.0) * (1.0 / 9.0);
  CHECK(m(0, 0) == doctest::Approx(cell).epsilon(1e-15));
  CHECK(m(5, 7) == 0.0);

  const ScalarField w = ScalarField::constant(g, 3.0);
  const SymmetricMatrix mw = mass_matrix(*g, &w, MassRole::metric);
  CHECK(mw(10, 10) == doctest::Approx(3.0 * cell).epsilon(1e-15));

  ScalarField bad = ScalarField::constant(g, 1.0);
  bad.values[3] = 0.0;
  CHECK_THROWS_AS(mass_matrix(*g, &bad, MassRole::metric), std::invalid_argument);

  // quadrature role tolerates sign changes
  const SymmetricMatrix mq = mass_matrix(*g, &bad, MassRole::quadrature);
  CHECK(mq(3, 3) == 0.0);
}

TEST_CASE("integrate is the mass-weighted inner product") {
  const auto g = Grid::interval(0.0, 1.0, 32);
  const SymmetricMatrix m = mass_matrix(*g);
  const ScalarField one = ScalarField::constant(g, 1.0);
  // h sum over the 32 interior nodes: total weight n / (n + 1) exactly
  CHECK(integrate(one, one, m) == doctest::Approx(32.0 / 33.0).epsilon(1e-15));

  // the rule is the trapezoid rule for fields vanishing on the boundary;
  // Euler-Maclaurin gives exactly 1/6 - h^2/6 for the quadratic x (1 - x)
  const ScalarField bubble =
      ScalarField::sample(g, [](double t, double) { return t * (1.0 - t); });
  const double h = 1.0 / 33.0;
  CHECK(integrate(bubble, one, m) ==
        doctest::Approx(1.0 / 6.0 - h * h / 6.0).epsilon(1e-12));
}

#include <doctest.h>

#include <algorithm>
#include <vector>
#include <cmath>

#include "fracspec/domain.hpp"
#include "fracspec/special.hpp"

using namespace fracspec;

namespace {

EigenCluster trivial_cluster(std::size_t members) {
  EigenCluster c;
  c.center = 1.0;
  for (std::size_t k = 0; k < members; ++k) c.indices.push_back(k);
  c.basis = Matrix(members, members);
  for (std::size_t k = 0; k < members; ++k) c.basis(k, k) = 1.0;
  return c;
}

BoundaryTrace interval_trace(double left, double right) {
  BoundaryTrace t;
  t.cluster_index = 0;
  t.dimension = 1;
  t.spacing = 0.1;
  TraceSample l;
  l.point = {-1.0, 0.0};
  l.normal = {-1.0, 0.0};
  l.value = left;
  TraceSample r;
  r.point = {1.0, 0.0};
  r.normal = {1.0, 0.0};
  r.value = right;
  t.samples = {l, r};
  return t;
}

}  // namespace

TEST_CASE("trace fitting recovers an exact boundary profile on the square") {
  // field (x - lo)^s: on the left edge the fit model is exact with trace 1
  const double s = 0.5;
  const auto g = Grid::square(-1.0, 1.0, 32);
  const ScalarField phi = ScalarField::sample(
      g, [s](double x, double) { return std::pow(x + 1.0, s); });
  const BoundaryTrace t = extract_trace(phi, 0, *g, s);
  CHECK(t.dimension == 2);
  CHECK(t.spacing == doctest::Approx(2.0 / 33.0));

  std::size_t left_checked = 0;
  for (const auto& smp : t.samples) {
    if (smp.normal[0] == -1.0) {
      CHECK(smp.point[0] == -1.0);
      CHECK(smp.value == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(smp.residual < 1e-9);
      CHECK(!smp.excluded);
      ++left_checked;
    }
  }
  // corner bands are excluded from sampling entirely
  CHECK(left_checked >= 32 - 2 * 5 - 2);
  CHECK(left_checked > 0);
}

TEST_CASE("trace samples avoid corners and carry outward normals") {
  const auto g = Grid::square(0.0, 1.0, 16);
  const ScalarField phi = ScalarField::constant(g, 1.0);
  const BoundaryTrace t = extract_trace(phi, 0, *g, 0.5);
  for (const auto& smp : t.samples) {
    const double nn = smp.normal[0] * smp.normal[0] + smp.normal[1] * smp.normal[1];
    CHECK(nn == doctest::Approx(1.0));
    // at least 4h from every corner along the edge tangent
    const double tang = smp.normal[0] != 0.0 ? smp.point[1] : smp.point[0];
    CHECK(std::min(tang, 1.0 - tang) >= 4.0 * (1.0 / 16.0) - 1e-12);
  }
}

TEST_CASE("gamma_domain quadrature on hand-built interval traces") {
  const EigenCluster c = trivial_cluster(1);
  const std::vector<BoundaryTrace> traces = {interval_trace(1.0, 2.0)};

  // translation: psi . N is -e at the left endpoint, +e at the right
  const GammaMatrix gt =
      gamma_domain(DomainPerturbation::translation_of(1.0), traces, c);
  CHECK(gt.entries(0, 0) == doctest::Approx(4.0 - 1.0).epsilon(1e-14));

  // dilation c x: psi . N equals c R at both endpoints of [-R, R]
  const GammaMatrix gd =
      gamma_domain(DomainPerturbation::dilation_of(2.0), traces, c);
  CHECK(gd.entries(0, 0) == doctest::Approx(2.0 * (1.0 + 4.0)).epsilon(1e-14));

  // tabulated psi . N values are used in sample order
  const GammaMatrix gtab =
      gamma_domain(DomainPerturbation::tabulated_of({3.0, 4.0}), traces, c);
  CHECK(gtab.entries(0, 0) == doctest::Approx(3.0 + 16.0).epsilon(1e-14));
  CHECK(gtab.flavor == GammaFlavor::domain);
}

TEST_CASE("gamma_domain validates shapes") {
  const EigenCluster c = trivial_cluster(2);
  const std::vector<BoundaryTrace> one = {interval_trace(1.0, 2.0)};
  CHECK_THROWS_AS(gamma_domain(DomainPerturbation::dilation_of(1.0), one, c),
                  std::invalid_argument);
  const std::vector<BoundaryTrace> two = {interval_trace(1.0, 2.0),
                                          interval_trace(0.0, 1.0)};
  CHECK_THROWS_AS(
      gamma_domain(DomainPerturbation::tabulated_of({1.0, 2.0, 3.0}), two, c),
      std::invalid_argument);
}

TEST_CASE("hadamard_derivative is the scaled negative gamma spectrum") {
  GammaMatrix g;
  g.nu = 2;
  g.flavor = GammaFlavor::domain;
  g.entries = SymmetricMatrix::diagonal({2.0, -1.0});
  const double s = 0.5;
  const Vector d = hadamard_derivative(5.0, g, s);
  const double hc = hadamard_constant(s);
  CHECK(d[0] == doctest::Approx(-2.0 * hc).epsilon(1e-13));
  CHECK(d[1] == doctest::Approx(1.0 * hc).epsilon(1e-13));
  CHECK_THROWS_AS(hadamard_derivative(-1.0, g, s), std::invalid_argument);
}

TEST_CASE("interval dilation derivative matches the exact scaling law") {
  const double s = 0.5, c = 1.0;
  const FracOperator op = assemble_1d(s, -1.0, 1.0, 64);
  const auto p = solve_problem(Flavor::additive, op,
                               ScalarField::constant(op.grid, 0.0));
  const auto rep = verify_domain_splitting(p, DomainPerturbation::dilation_of(c),
                                           p.clusters.front(), {1e-4});
  REQUIRE(rep.observations.size() == 1);
  const double want = -2.0 * s * c * rep.lambda0;
  CHECK(rep.observations[0].richardson[0] ==
        doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("interval translation leaves every eigenvalue untouched") {
  const FracOperator op = assemble_1d(0.5, -1.0, 1.0, 48);
  const auto p = solve_problem(Flavor::additive, op,
                               ScalarField::constant(op.grid, 0.0));
  const auto rep =
      verify_domain_splitting(p, DomainPerturbation::translation_of(1.0),
                              p.clusters.front(), {1e-4});
  CHECK(std::abs(rep.observations[0].measured[0]) < 1e-11);
  CHECK(std::abs(rep.observations[0].richardson[0]) < 1e-11);
}

TEST_CASE("interval boundary-value perturbation matches its prediction") {
  // move only the right endpoint: psi . N = (0, 1) in sample order
  const double s = 0.5;
  const FracOperator op = assemble_1d(s, -1.0, 1.0, 96);
  const auto p = solve_problem(Flavor::additive, op,
                               ScalarField::constant(op.grid, 0.0));
  const auto rep = verify_domain_splitting(
      p, DomainPerturbation::tabulated_of({0.0, 1.0}), p.clusters.front(), {1e-4});
  const double measured = rep.observations[0].richardson[0];
  const double predicted = rep.predicted[0];
  CHECK(measured == doctest::Approx(predicted).epsilon(0.1));
  // moving one endpoint outward is half of the dilation effect by symmetry
  CHECK(measured == doctest::Approx(-s * rep.lambda0).epsilon(0.1));
}

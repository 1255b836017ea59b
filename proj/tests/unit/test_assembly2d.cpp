#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fracspec/assembly.hpp"
#include "fracspec/coefficient.hpp"
#include "fracspec/special.hpp"

using namespace fracspec;

namespace {

std::size_t rot90(std::size_t p, std::size_t n) {
  const std::size_t ix = p / n, iy = p % n;
  return iy * n + (n - 1 - ix);
}

}  // namespace

TEST_CASE("square stiffness commutes bitwise with the quarter turn") {
  const std::size_t n = 10;
  const FracOperator op = assemble_2d_square(0.5, -1.0, 1.0, n);
  for (std::size_t p = 0; p < n * n; ++p)
    for (std::size_t q = 0; q < n * n; ++q)
      CHECK(op.stiffness(p, q) == op.stiffness(rot90(p, n), rot90(q, n)));
}

TEST_CASE("square stiffness scales exactly as r^{-2s} under dilation") {
  const std::size_t n = 8;
  for (double s : {0.3, 0.7}) {
    const FracOperator small = assemble_2d_square(s, 0.0, 1.0, n);
    const FracOperator big = assemble_2d_square(s, 0.0, 2.0, n);
    const double factor = std::pow(2.0, -2.0 * s);
    double worst = 0.0;
    for (std::size_t p = 0; p < n * n; ++p)
      for (std::size_t q = 0; q < n * n; ++q) {
        const double want = factor * small.stiffness(p, q);
        worst = std::max(worst,
                         std::abs(big.stiffness(p, q) - want) / std::abs(want));
      }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("square stiffness is exactly translation invariant") {
  const FracOperator a = assemble_2d_square(0.5, 0.0, 1.0, 8);
  const FracOperator b = assemble_2d_square_at(0.5, 4.0, -2.5, 1.0, 8);
  CHECK(max_abs_diff(a.stiffness.dense(), b.stiffness.dense()) == 0.0);
}

TEST_CASE("square stiffness rows stay strictly diagonally dominant") {
  const std::size_t n = 10;
  const FracOperator op = assemble_2d_square(0.6, -1.0, 1.0, n);
  for (std::size_t p = 0; p < n * n; ++p) {
    double off = 0.0;
    for (std::size_t q = 0; q < n * n; ++q)
      if (q != p) off += std::abs(op.stiffness(p, q));
    CHECK(op.stiffness(p, p) > off);
  }
}

TEST_CASE("collocation at the center matches the inscribed-disk barrier") {
  // (R^2 - |x - c|^2)_+^s on the inscribed disk has constant image inside it
  const double s = 0.5;
  const std::size_t n = 16;
  const FracOperator op = assemble_2d_square(s, -1.0, 1.0, n);
  Vector u(n * n, 0.0);
  for (std::size_t p = 0; p < n * n; ++p) {
    const auto x = op.grid->point(p);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 < 1.0) u[p] = std::pow(1.0 - r2, s);
  }
  const Vector au = matvec(op.stiffness, u);
  const std::size_t center = op.grid->index2(n / 2, n / 2);
  CHECK(au[center] == doctest::Approx(ball_constant(2, s)).epsilon(8e-2));
}

TEST_CASE("square spectrum regression: simple ground state, degenerate pair") {
  const std::size_t n = 12;
  const FracOperator op = assemble_2d_square(0.5, -1.0, 1.0, n);
  const auto p = solve_problem(Flavor::additive, op,
                               ScalarField::constant(op.grid, 0.0));
  const Vector& lam = p.spectrum.values;
  CHECK(lam[0] == doctest::Approx(2.000666915).epsilon(1e-6));
  // sanity bracket: above the interval value, below the 2D spectral-power
  // value sqrt(2) (pi/2), which dominates the integral operator's lambda_1
  CHECK(lam[0] > 1.15);
  CHECK(lam[0] < 2.2215);
  CHECK(lam[1] == doctest::Approx(3.472367390).epsilon(1e-6));
  CHECK(lam[1] > lam[0] + 1.0);
  // the first excited eigenvalue is exactly double on the square
  CHECK(std::abs(lam[2] - lam[1]) < 1e-10);
  CHECK(lam[3] > lam[2] + 1.0);

  REQUIRE(p.clusters.size() >= 2);
  CHECK(p.clusters[0].multiplicity() == 1);
  CHECK(p.clusters[1].multiplicity() == 2);
}

TEST_CASE("tail cache round trips through assembly bitwise") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fracspec_asm_cache_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  setenv("FRACSPEC_CACHE_DIR", dir.c_str(), 1);

  const FracOperator cold = assemble_2d_square(0.5, -1.0, 1.0, 8);
  bool wrote = false;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    wrote = true;
  }
  CHECK(wrote);

  const FracOperator warm = assemble_2d_square(0.5, -1.0, 1.0, 8);
  CHECK(max_abs_diff(cold.stiffness.dense(), warm.stiffness.dense()) == 0.0);

  // a corrupted cache entry is ignored, not trusted
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ofstream f(e.path(), std::ios::binary | std::ios::trunc);
    f << "garbage";
  }
  const FracOperator fixed = assemble_2d_square(0.5, -1.0, 1.0, 8);
  CHECK(max_abs_diff(cold.stiffness.dense(), fixed.stiffness.dense()) == 0.0);

  unsetenv("FRACSPEC_CACHE_DIR");
  fs::remove_all(dir);
}

TEST_CASE("2d assembly input validation") {
  CHECK_THROWS_AS(assemble_2d_square(0.5, -1.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(assemble_2d_square(0.5, -1.0, 1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(assemble_2d_square(0.5, 1.0, -1.0, 12), std::invalid_argument);
  CHECK_THROWS_AS(assemble_2d_square_at(0.5, 0.0, 0.0, -1.0, 12),
                  std::invalid_argument);
}

#include <doctest.h>

#include <cmath>

#include "fracspec/linalg.hpp"

using namespace fracspec;

TEST_CASE("solve_spd reproduces a hand-solved 2x2 system") {
  SymmetricMatrix a(2);
  a.set(0, 0, 4.0);
  a.set(0, 1, 2.0);
  a.set(1, 1, 3.0);
  // inverse is [[3,-2],[-2,4]]/8, so rhs (2,1) maps to (0.5, 0)
  const Vector x = solve_spd(a, {2.0, 1.0});
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("cholesky rejects an indefinite matrix naming the pivot") {
  SymmetricMatrix a(2);
  a.set(0, 0, 1.0);
  a.set(0, 1, 2.0);
  a.set(1, 1, 1.0);
  CHECK_THROWS_AS(cholesky_lower(a), NotPositiveDefinite);
  try {
    cholesky_lower(a);
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot == 1);
  }
}

TEST_CASE("from_dense symmetrizes within tolerance and rejects beyond it") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0 + 1e-14;
  m(1, 1) = 3.0;
  const SymmetricMatrix s = SymmetricMatrix::from_dense(m, 1e-12);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(2.0).epsilon(1e-13));

  m(1, 0) = 2.1;
  CHECK_THROWS_AS(SymmetricMatrix::from_dense(m, 1e-12), std::invalid_argument);
}

TEST_CASE("matmul, transpose and norms on small oracles") {
  Matrix a(2, 3);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(0, 2) = 3;
  a(1, 0) = 4;
  a(1, 1) = 5;
  a(1, 2) = 6;
  const Matrix at = transpose(a);
  CHECK(at.rows() == 3);
  CHECK(at(2, 1) == 6);

  const Matrix aat = matmul(a, at);
  CHECK(aat(0, 0) == doctest::Approx(14.0));
  CHECK(aat(0, 1) == doctest::Approx(32.0));
  CHECK(aat(1, 1) == doctest::Approx(77.0));

  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(91.0)).epsilon(1e-14));
  CHECK(max_abs(a) == 6.0);
}

TEST_CASE("matvec agrees between dense and symmetric forms") {
  SymmetricMatrix s(3);
  s.set(0, 0, 2.0);
  s.set(0, 1, -1.0);
  s.set(1, 1, 2.0);
  s.set(1, 2, -1.0);
  s.set(2, 2, 2.0);
  const Vector x = {1.0, 2.0, 3.0};
  const Vector y1 = matvec(s, x);
  const Vector y2 = matvec(s.dense(), x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(y1[i] == y2[i]);
  CHECK(y1[0] == doctest::Approx(0.0));
  CHECK(y1[1] == doctest::Approx(0.0));
  CHECK(y1[2] == doctest::Approx(4.0));
}

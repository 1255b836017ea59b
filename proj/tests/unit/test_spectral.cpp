#include <doctest.h>

#include <cmath>

#include "fracspec/spectral.hpp"

using namespace fracspec;

TEST_CASE("eig_sym on a diagonal matrix returns it sorted with unit vectors") {
  const SymmetricMatrix a = SymmetricMatrix::diagonal({3.0, -1.0, 2.0});
  const EigenSystem es = eig_sym(a);
  CHECK(es.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(es.values[2] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eigen_residual(a, es) < 1e-13);
}

TEST_CASE("eig_sym resolves the block spectrum {1, 2, 2, 5}") {
  // two 2x2 blocks [[1.5,.5],[.5,1.5]] and [[3.5,1.5],[1.5,3.5]]
  SymmetricMatrix a(4);
  a.set(0, 0, 1.5);
  a.set(0, 1, 0.5);
  a.set(1, 1, 1.5);
  a.set(2, 2, 3.5);
  a.set(2, 3, 1.5);
  a.set(3, 3, 3.5);
  const EigenSystem es = eig_sym(a);
  CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(es.values[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(es.values[2] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(es.values[3] == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(eigen_residual(a, es) < 1e-12);

  const auto clusters = detect_clusters(es, 1e-6);
  REQUIRE(clusters.size() == 3);
  CHECK(clusters[0].multiplicity() == 1);
  CHECK(clusters[1].multiplicity() == 2);
  CHECK(clusters[1].center == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(clusters[2].multiplicity() == 1);

  // cluster basis columns are orthonormal and span the eigenspace
  const auto& c = clusters[1];
  const Vector b0 = c.basis.column(0), b1 = c.basis.column(1);
  CHECK(dot(b0, b0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dot(b1, b1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(dot(b0, b1)) < 1e-12);
}

TEST_CASE("eig_gen solves a hand-checked generalized pencil") {
  // det(K - t M) = 3t^2 - 6t + 2, roots 1 -/+ 1/sqrt(3)
  SymmetricMatrix k(2), m(2);
  k.set(0, 0, 2.0);
  k.set(1, 1, 1.0);
  m.set(0, 0, 2.0);
  m.set(0, 1, 1.0);
  m.set(1, 1, 2.0);
  const EigenSystem es = eig_gen(k, m);
  CHECK(es.values[0] == doctest::Approx(0.422649730810374235).epsilon(1e-13));
  CHECK(es.values[1] == doctest::Approx(1.57735026918962576).epsilon(1e-13));
  CHECK(eigen_residual(k, m, es) < 1e-13);

  // eigenvectors are M-orthonormal
  REQUIRE(es.metric.has_value());
  const Vector v0 = es.eigenvector(0), v1 = es.eigenvector(1);
  const Vector mv0 = matvec(m, v0), mv1 = matvec(m, v1);
  CHECK(dot(v0, mv0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dot(v1, mv1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(dot(v0, mv1)) < 1e-12);
}

TEST_CASE("detect_clusters honors the window and tolerance") {
  const SymmetricMatrix a = SymmetricMatrix::diagonal({1.0, 1.0 + 1e-9, 2.0, 3.0});
  const EigenSystem es = eig_sym(a);

  auto tight = detect_clusters(es, 1e-12);
  CHECK(tight.size() == 4);

  auto loose = detect_clusters(es, 1e-6);
  CHECK(loose.size() == 3);
  CHECK(loose[0].multiplicity() == 2);

  auto windowed = detect_clusters(es, 1e-6, IndexRange{2, 4});
  REQUIRE(windowed.size() == 2);
  CHECK(windowed[0].center == doctest::Approx(2.0));
}

TEST_CASE("inverse_values flips and guards zeros") {
  EigenSystem es;
  es.values = {0.5, 2.0};
  es.vectors = Matrix::identity(2);
  const Vector inv = es.inverse_values();
  CHECK(inv[0] == doctest::Approx(2.0));
  CHECK(inv[1] == doctest::Approx(0.5));

  es.values = {0.0, 1.0};
  CHECK_THROWS_AS(es.inverse_values(), NumericalError);
}

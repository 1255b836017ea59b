#include "fracspec/rng.hpp"

#include <cmath>

namespace fracspec {

double Rng::normal() {
  // Box-Muller; u1 shifted away from 0 so log() is safe
  const double u1 = (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

SymmetricMatrix Rng::random_symmetric(std::size_t dim, double scale) {
  SymmetricMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) s.set(i, j, scale * normal());
  return s;
}

Matrix Rng::random_orthogonal(std::size_t dim) {
  Matrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = normal();
  // modified Gram-Schmidt on columns
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      double proj = 0.0;
      for (std::size_t i = 0; i < dim; ++i) proj += g(i, c) * g(i, p);
      for (std::size_t i = 0; i < dim; ++i) g(i, c) -= proj * g(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) nrm += g(i, c) * g(i, c);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < dim; ++i) g(i, c) /= nrm;
  }
  return g;
}

}  // namespace fracspec

#include "fracspec/special.hpp"

#include <cmath>
#include <stdexcept>

namespace fracspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_core(double z) {
  // valid for z >= 0.5
  double a = kLanczos[0];
  for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z - 1.0 + double(k));
  const double t = z + kLanczosG - 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z - 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double z) {
  if (z <= 0.0 && z == std::floor(z))
    throw std::domain_error("gamma_fn: nonpositive integer argument");
  if (z < 0.5) return kPi / (std::sin(kPi * z) * gamma_fn(1.0 - z));
  return lanczos_core(z);
}

double frac_normalization(int dim, double s) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("frac_normalization: dim must be 1 or 2");
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("frac_normalization: s must lie in (0,1)");
  const double num = s * std::pow(2.0, 2.0 * s) * gamma_fn(0.5 * (dim + 2.0 * s));
  const double den = std::pow(kPi, 0.5 * dim) * gamma_fn(1.0 - s);
  return num / den;
}

double ball_constant(int dim, double s) {
  if (dim == 1)
    return std::pow(2.0, 2.0 * s) * gamma_fn(1.0 + s) * gamma_fn(0.5 + s) /
           gamma_fn(0.5);
  if (dim == 2) {
    const double g = gamma_fn(1.0 + s);
    return std::pow(2.0, 2.0 * s) * g * g;
  }
  throw std::invalid_argument("ball_constant: dim must be 1 or 2");
}

double halfplane_constant(double s) {
  return std::sqrt(kPi) * gamma_fn(s + 0.5) / gamma_fn(s + 1.0);
}

double hadamard_constant(double s) {
  const double g = gamma_fn(1.0 + s);
  return g * g;
}

}  // namespace fracspec

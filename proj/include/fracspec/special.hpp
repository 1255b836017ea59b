#pragma once

#include <cstddef>

namespace fracspec {

// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
// with the reflection formula below z = 1/2. Relative accuracy ~1e-13 on
// the arguments used here (all in (0, 4)).
double gamma_fn(double z);

// Kernel normalization C_{n,s} = s 2^{2s} Gamma((n+2s)/2) / (pi^{n/2} Gamma(1-s)):
// the constant for which the singular integral has Fourier symbol |xi|^{2s}.
double frac_normalization(int dim, double s);

// Closed-form constant (-Delta)^s (R^2 - |x|^2)_+^s = ball_constant(dim, s)
// inside the ball, any radius R, any center.
// dim 1: 2^{2s} Gamma(1+s) Gamma(1/2+s) / Gamma(1/2); dim 2: 2^{2s} Gamma(1+s)^2.
double ball_constant(int dim, double s);

// Half-plane kernel mass: integral over {x_1 > d} of |x|^{-2-2s} dx equals
// halfplane_constant(s) * d^{-2s} / (2s), with the constant
// sqrt(pi) Gamma(s+1/2) / Gamma(s+1).
double halfplane_constant(double s);

// Gamma(1+s)^2, the trace-normalization constant of the Hadamard derivative.
double hadamard_constant(double s);

}  // namespace fracspec

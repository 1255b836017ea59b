#pragma once

#include <functional>
#include <vector>

namespace fracspec {

// Adaptive Simpson on [a, b]. Recursion accepts a panel when the Richardson
// error estimate is below max(abs_tol, rel_tol * |whole integral estimate|).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, double abs_tol = 1e-14,
                        int max_depth = 48);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule computed by Newton iteration on P_n; exact for
// polynomials of degree 2n-1.
GaussRule gauss_legendre(int n);

// Integrate f over [a, b] with a fixed Gauss-Legendre rule.
double gauss_integrate(const GaussRule& rule, const std::function<double(double)>& f,
                       double a, double b);

}  // namespace fracspec

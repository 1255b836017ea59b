#include "fracspec/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fracspec {

namespace {

double simpson(double fa, double fm, double fb, double h6) {
  return h6 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double rel_tol, double abs_tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, (m - a) / 6.0);
  const double right = simpson(fm, frm, fb, (b - m) / 6.0);
  const double err = left + right - whole;
  if (depth <= 0 ||
      std::abs(err) <= 15.0 * std::max(abs_tol, rel_tol * std::abs(left + right)))
    return left + right + err / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, rel_tol, 0.5 * abs_tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(fa, fm, fb, (b - a) / 6.0);
  return adapt(f, a, b, fa, fm, fb, whole, rel_tol, abs_tol, max_depth);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
        p0 = p1;
        p1 = p2;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double gauss_integrate(const GaussRule& rule, const std::function<double(double)>& f,
                       double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(c + h * rule.nodes[i]);
  return acc * h;
}

}  // namespace fracspec

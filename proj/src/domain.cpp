#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracspec/domain.hpp"
#include "fracspec/special.hpp"

namespace fracspec {

DomainPerturbation DomainPerturbation::translation_of(double ex, double ey) {
  DomainPerturbation p;
  p.family = PsiFamily::translation;
  p.translation = {ex, ey};
  p.magnitude = std::hypot(ex, ey);
  return p;
}

DomainPerturbation DomainPerturbation::dilation_of(double c) {
  DomainPerturbation p;
  p.family = PsiFamily::dilation;
  p.dilation = c;
  p.magnitude = std::abs(c);
  return p;
}

DomainPerturbation DomainPerturbation::tabulated_of(Vector values) {
  DomainPerturbation p;
  p.family = PsiFamily::tabulated;
  p.boundary_values = std::move(values);
  for (double v : p.boundary_values) p.magnitude = std::max(p.magnitude, std::abs(v));
  return p;
}

namespace {

constexpr std::size_t kFitNodes = 6;
constexpr double kResidualCut = 0.05;

// least-squares fit y_j ~ c0 d_j^s + c1 d_j^{s+1}; returns {c0, rel residual}
std::pair<double, double> fit_trace(const Vector& d, const Vector& y, double s) {
  SymmetricMatrix ata(2);
  Vector aty(2, 0.0);
  double a00 = 0.0, a01 = 0.0, a11 = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double f0 = std::pow(d[j], s);
    const double f1 = std::pow(d[j], s + 1.0);
    a00 += f0 * f0;
    a01 += f0 * f1;
    a11 += f1 * f1;
    aty[0] += f0 * y[j];
    aty[1] += f1 * y[j];
  }
  ata.set(0, 0, a00);
  ata.set(0, 1, a01);
  ata.set(1, 1, a11);
  const Vector c = solve_spd(ata, aty);
  double rss = 0.0, yss = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double fit = c[0] * std::pow(d[j], s) + c[1] * std::pow(d[j], s + 1.0);
    rss += (y[j] - fit) * (y[j] - fit);
    yss += y[j] * y[j];
  }
  const double res = std::sqrt(rss) / std::max(std::sqrt(yss), 1e-300);
  return {c[0], res};
}

void check_s_range(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("extract_trace: s must lie strictly in (0,1)");
}

}  // namespace

BoundaryTrace extract_trace(const ScalarField& phi, std::size_t cluster_index,
                            const Grid& grid, double s) {
  check_s_range(s);
  if (phi.values.size() != grid.node_count())
    throw std::invalid_argument("extract_trace: field does not match grid");
  const std::size_t n = grid.n_per_axis();
  if (n < 3)
    throw NumericalError("extract_trace: fewer than 3 usable interior nodes on the normal line");
  const std::size_t m = std::min(kFitNodes, n);
  const double h = grid.h();

  BoundaryTrace trace;
  trace.cluster_index = cluster_index;
  trace.dimension = grid.dimension();
  trace.spacing = h;

  if (grid.dimension() == 1) {
    // Nodal calibration: the collocation scheme carries an h-independent
    // multiplicative boundary layer in index space. The unit-source solve
    // A v = 1 has the closed-form solution (R^2-(x-c)^2)^s / ball_constant,
    // so the nodal ratio v_h/v_exact isolates the layer; dividing it out of
    // phi before fitting removes the bias from the extracted trace.
    const FracOperator op = assemble_1d(s, grid.lo(), grid.hi(), n);
    const ScalarField vh = solve_unit_source(op);
    const double mid = 0.5 * (grid.lo() + grid.hi());
    const double rad = 0.5 * (grid.hi() - grid.lo());
    const double bs = ball_constant(1, s);
    Vector rho(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = grid.point(k)[0];
      const double vex = std::pow(std::max(0.0, rad * rad - (x - mid) * (x - mid)), s) / bs;
      rho[k] = vh.values[k] / vex;
    }

    Vector d(m), y(m);
    for (std::size_t side = 0; side < 2; ++side) {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = side == 0 ? j : n - 1 - j;
        d[j] = double(j + 1) * h;
        y[j] = phi.values[k] / rho[k];
      }
      auto [c0, res] = fit_trace(d, y, s);
      TraceSample smp;
      smp.point = {side == 0 ? grid.lo() : grid.hi(), 0.0};
      smp.normal = {side == 0 ? -1.0 : 1.0, 0.0};
      smp.value = c0;
      smp.residual = res;
      smp.excluded = res > kResidualCut;
      trace.samples.push_back(smp);
    }
    return trace;
  }

  // 2D square: per-edge node-aligned samples, skipping the 4h corner bands
  if (n < 9)
    throw NumericalError("extract_trace: all boundary samples fall in the corner exclusion bands");
  const double lox = grid.axis_lo(0), hix = grid.axis_hi(0);
  const double loy = grid.axis_lo(1), hiy = grid.axis_hi(1);

  struct Edge {
    std::array<double, 2> normal;
  };
  const Edge edges[4] = {{{-1.0, 0.0}}, {{1.0, 0.0}}, {{0.0, -1.0}}, {{0.0, 1.0}}};

  Vector d(m), y(m);
  for (std::size_t e = 0; e < 4; ++e) {
    for (std::size_t t = 4; t + 4 < n; ++t) {
      TraceSample smp;
      smp.normal = edges[e].normal;
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t p;
        switch (e) {
          case 0: p = grid.index2(j, t); break;
          case 1: p = grid.index2(n - 1 - j, t); break;
          case 2: p = grid.index2(t, j); break;
          default: p = grid.index2(t, n - 1 - j); break;
        }
        d[j] = double(j + 1) * h;
        y[j] = phi.values[p];
      }
      switch (e) {
        case 0: smp.point = {lox, loy + double(t + 1) * h}; break;
        case 1: smp.point = {hix, loy + double(t + 1) * h}; break;
        case 2: smp.point = {lox + double(t + 1) * h, loy}; break;
        default: smp.point = {lox + double(t + 1) * h, hiy}; break;
      }
      auto [c0, res] = fit_trace(d, y, s);
      smp.value = c0;
      smp.residual = res;
      smp.excluded = res > kResidualCut;
      trace.samples.push_back(smp);
    }
  }
  if (trace.samples.empty())
    throw NumericalError("extract_trace: all boundary samples fall in the corner exclusion bands");
  return trace;
}

namespace {

double psi_dot_normal(const DomainPerturbation& psi, const TraceSample& smp,
                      std::size_t sample_index) {
  switch (psi.family) {
    case PsiFamily::translation:
      return psi.translation[0] * smp.normal[0] + psi.translation[1] * smp.normal[1];
    case PsiFamily::dilation:
      return psi.dilation * (smp.point[0] * smp.normal[0] + smp.point[1] * smp.normal[1]);
    default:
      return psi.boundary_values[sample_index];
  }
}

}  // namespace

GammaMatrix gamma_domain(const DomainPerturbation& psi,
                         const std::vector<BoundaryTrace>& traces,
                         const EigenCluster& cluster) {
  const std::size_t nu = cluster.multiplicity();
  if (traces.size() != nu)
    throw std::invalid_argument("gamma_domain: need one trace per cluster member");
  const std::size_t ns = traces.front().samples.size();
  for (const auto& tr : traces) {
    if (tr.samples.size() != ns)
      throw std::invalid_argument("gamma_domain: mismatched sample sets");
    for (std::size_t k = 0; k < ns; ++k)
      if (tr.samples[k].point != traces.front().samples[k].point)
        throw std::invalid_argument("gamma_domain: mismatched sample sets");
  }
  if (psi.family == PsiFamily::tabulated && psi.boundary_values.size() != ns)
    throw std::invalid_argument("gamma_domain: tabulated psi does not match sample count");

  std::vector<bool> usable(ns, true);
  for (const auto& tr : traces)
    for (std::size_t k = 0; k < ns; ++k)
      if (tr.samples[k].excluded) usable[k] = false;

  // quadrature weights: endpoint counting in 1D; per-edge trapezoid in 2D,
  // edges identified by their shared normal
  const BoundaryTrace& tr0 = traces.front();
  Vector w(ns, 0.0);
  if (tr0.dimension == 1) {
    for (std::size_t k = 0; k < ns; ++k) w[k] = usable[k] ? 1.0 : 0.0;
  } else {
    const double h = tr0.spacing;
    std::size_t k = 0;
    while (k < ns) {
      std::size_t e = k;
      while (e < ns && tr0.samples[e].normal == tr0.samples[k].normal) ++e;
      std::vector<std::size_t> idx;
      for (std::size_t q = k; q < e; ++q)
        if (usable[q]) idx.push_back(q);
      for (std::size_t q : idx) w[q] = h;
      if (idx.size() >= 2) {
        w[idx.front()] = 0.5 * h;
        w[idx.back()] = 0.5 * h;
      }
      k = e;
    }
  }

  GammaMatrix out;
  out.nu = nu;
  out.flavor = GammaFlavor::domain;
  out.basis_id = cluster.label;
  out.entries = SymmetricMatrix(nu);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i; j < nu; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < ns; ++k) {
        if (w[k] == 0.0) continue;
        acc += w[k] * traces[i].samples[k].value * traces[j].samples[k].value *
               psi_dot_normal(psi, tr0.samples[k], k);
      }
      out.entries.set(i, j, acc);
    }
  return out;
}

Vector hadamard_derivative(double lambda0, const GammaMatrix& gamma_dom, double s) {
  if (!(lambda0 > 0.0))
    throw std::invalid_argument("hadamard_derivative: lambda0 must be positive");
  check_s_range(s);
  // operator-level derivative carries -Gamma(1+s)^2 / lambda0; composing
  // through mu = 1/lambda multiplies the lambda0 back out
  const double scale = -hadamard_constant(s);
  SymmetricMatrix scaled(gamma_dom.nu);
  for (std::size_t i = 0; i < gamma_dom.nu; ++i)
    for (std::size_t j = i; j < gamma_dom.nu; ++j)
      scaled.set(i, j, scale * gamma_dom.entries(i, j));
  return eig_sym(scaled).values;
}

namespace {

EigenSystem solve_eigs(Flavor flavor, const FracOperator& op, const ScalarField& a) {
  if (flavor == Flavor::additive)
    return eig_gen(op.with_potential(a).system_matrix(), mass_matrix(*op.grid));
  return eig_gen(op.system_matrix(), mass_matrix(*op.grid, &a, MassRole::metric));
}

// eigenvalues of the base problem transplanted to (I + eps*psi)(Omega)
EigenSystem solve_on_perturbed(const CoefficientProblem& base,
                               const DomainPerturbation& psi, double eps,
                               double a_const) {
  const Grid& g = *base.frac_op.grid;
  const double s = base.frac_op.s;
  const std::size_t n = g.n_per_axis();
  FracOperator op;
  if (g.dimension() == 1) {
    double pa = 0.0, pb = 0.0;  // psi at the two endpoints
    switch (psi.family) {
      case PsiFamily::translation:
        pa = pb = psi.translation[0];
        break;
      case PsiFamily::dilation:
        pa = psi.dilation * g.lo();
        pb = psi.dilation * g.hi();
        break;
      default:
        if (psi.boundary_values.size() != 2)
          throw std::invalid_argument(
              "verify_domain_splitting: tabulated 1D psi needs the two endpoint values");
        pa = -psi.boundary_values[0];  // psi.N with N = -1 at the left endpoint
        pb = psi.boundary_values[1];
        break;
    }
    op = assemble_1d(s, g.lo() + eps * pa, g.hi() + eps * pb, n);
  } else {
    switch (psi.family) {
      case PsiFamily::translation:
        op = assemble_2d_square_at(s, g.axis_lo(0) + eps * psi.translation[0],
                                   g.axis_lo(1) + eps * psi.translation[1],
                                   g.axis_hi(0) - g.axis_lo(0), n);
        break;
      case PsiFamily::dilation: {
        const double f = 1.0 + eps * psi.dilation;
        if (!(f > 0.0))
          throw std::invalid_argument(
              "verify_domain_splitting: dilation magnitude loses injectivity");
        op = assemble_2d_square_at(s, f * g.axis_lo(0), f * g.axis_lo(1),
                                   f * (g.axis_hi(0) - g.axis_lo(0)), n);
        break;
      }
      default:
        throw std::invalid_argument(
            "verify_domain_splitting: 2D re-solve supports translation and dilation "
            "families only (tabulated psi is not exactly representable)");
    }
  }
  return solve_eigs(base.flavor, op, ScalarField::constant(op.grid, a_const));
}

// Central-difference derivatives of a degenerate cluster: at -eps the sorted
// spectrum lists the first-order slopes in reverse, so member k pairs with
// member nu-1-k of the -eps solve.
Vector cluster_central_difference(const Vector& lam_plus, const Vector& lam_minus,
                                  std::size_t lo, std::size_t nu, double eps) {
  Vector d(nu);
  for (std::size_t k = 0; k < nu; ++k)
    d[k] = (lam_plus[lo + k] - lam_minus[lo + nu - 1 - k]) / (2.0 * eps);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

DomainSplitReport verify_domain_splitting(const CoefficientProblem& base,
                                          const DomainPerturbation& psi,
                                          const EigenCluster& cluster,
                                          const std::vector<double>& epsilons) {
  if (cluster.indices.empty())
    throw std::invalid_argument("verify_domain_splitting: empty cluster");
  const std::size_t lo = cluster.indices.front();
  const std::size_t nu = cluster.multiplicity();
  if (cluster.indices.back() >= base.spectrum.dim())
    throw std::invalid_argument("verify_domain_splitting: cluster outside spectrum");

  // the coefficient cannot be transplanted to a deformed domain from nodal
  // values alone; constants can
  double amin = base.base_a.values.front(), amax = amin;
  for (double v : base.base_a.values) {
    amin = std::min(amin, v);
    amax = std::max(amax, v);
  }
  if (amax - amin > 1e-14 * (1.0 + std::abs(amax)))
    throw std::invalid_argument(
        "verify_domain_splitting: base coefficient must be constant for domain re-solves");
  const double a_const = amax;

  const Grid& g = *base.frac_op.grid;
  const double s = base.frac_op.s;

  // traces and the boundary gamma of the unperturbed cluster
  std::vector<BoundaryTrace> traces;
  for (std::size_t k = 0; k < nu; ++k) {
    const ScalarField phi(base.frac_op.grid,
                          base.spectrum.vectors.column(cluster.indices[k]));
    traces.push_back(extract_trace(phi, k, g, s));
  }

  DomainSplitReport rep;
  rep.gamma_dom = gamma_domain(psi, traces, cluster);
  rep.lambda0 = cluster.center;
  rep.predicted = hadamard_derivative(cluster.center, rep.gamma_dom, s);

  for (double eps : epsilons) {
    if (!(eps > 0.0))
      throw std::invalid_argument("verify_domain_splitting: stencil eps must be positive");
    const EigenSystem p1 = solve_on_perturbed(base, psi, eps, a_const);
    const EigenSystem m1 = solve_on_perturbed(base, psi, -eps, a_const);
    const EigenSystem p2 = solve_on_perturbed(base, psi, 0.5 * eps, a_const);
    const EigenSystem m2 = solve_on_perturbed(base, psi, -0.5 * eps, a_const);

    DomainDerivativeObservation obs;
    obs.eps = eps;
    obs.measured = cluster_central_difference(p1.values, m1.values, lo, nu, eps);
    const Vector half =
        cluster_central_difference(p2.values, m2.values, lo, nu, 0.5 * eps);
    obs.richardson.resize(nu);
    for (std::size_t k = 0; k < nu; ++k)
      obs.richardson[k] = (4.0 * half[k] - obs.measured[k]) / 3.0;
    for (std::size_t k = 0; k < nu; ++k)
      obs.max_deviation =
          std::max(obs.max_deviation, std::abs(obs.measured[k] - rep.predicted[k]));
    rep.observations.push_back(std::move(obs));
  }
  return rep;
}

}  // namespace fracspec

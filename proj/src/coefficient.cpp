#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fracspec/coefficient.hpp"

namespace fracspec {

namespace {

// eigensolve for the flavor without smallness validation (callers guard)
EigenSystem solve_flavor(Flavor flavor, const FracOperator& op, const ScalarField& a) {
  const Grid& g = *op.grid;
  if (flavor == Flavor::additive)
    return eig_gen(op.with_potential(a).system_matrix(), mass_matrix(g));
  return eig_gen(op.system_matrix(), mass_matrix(g, &a, MassRole::metric));
}

ScalarField shifted_field(const ScalarField& a, const ScalarField& b, double eps) {
  Vector v = a.values;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += eps * b.values[k];
  return ScalarField(a.grid, std::move(v));
}

}  // namespace

CoefficientProblem solve_problem(Flavor flavor, const FracOperator& op,
                                 const ScalarField& a, double cluster_tol,
                                 IndexRange window) {
  if (!op.grid) throw std::invalid_argument("solve_problem: operator has no grid");
  if (a.values.size() != op.grid->node_count())
    throw std::invalid_argument("solve_problem: coefficient field does not match grid");

  double amin = a.values.empty() ? 0.0 : a.values[0];
  for (double v : a.values) amin = std::min(amin, v);
  const double asup = a.sup_abs();

  if (flavor == Flavor::multiplicative) {
    if (!(amin > 0.0))
      throw std::invalid_argument(
          "solve_problem: multiplicative weight must be strictly positive");
  } else if (!(amin > 0.0) && asup > 0.0) {
    const EigenSystem base = eig_gen(op.system_matrix(), mass_matrix(*op.grid));
    if (!(asup <= 0.5 * base.values.front())) {
      std::ostringstream msg;
      msg << "solve_problem: additive potential too large (sup " << asup
          << " exceeds half the ground eigenvalue " << base.values.front() << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  CoefficientProblem p;
  p.flavor = flavor;
  p.base_a = a;
  p.frac_op = op;
  p.spectrum = solve_flavor(flavor, op, a);
  p.clusters = detect_clusters(p.spectrum, cluster_tol, window);
  return p;
}

GammaMatrix gamma_coefficient(const ScalarField& b, const EigenCluster& cluster,
                              const CoefficientProblem& p) {
  if (b.values.size() != p.frac_op.grid->node_count())
    throw std::invalid_argument("gamma_coefficient: field does not match problem grid");
  return gamma_quadrature(b, cluster, mass_matrix(*p.frac_op.grid),
                          GammaFlavor::coefficient);
}

SplittingReport verify_splitting(const CoefficientProblem& p, const ScalarField& b,
                                 const EigenCluster& cluster,
                                 const std::vector<double>& epsilons) {
  if (cluster.indices.empty())
    throw std::invalid_argument("verify_splitting: empty cluster");
  const std::size_t lo = cluster.indices.front();
  const std::size_t hi = cluster.indices.back();
  if (hi >= p.spectrum.dim())
    throw std::invalid_argument("verify_splitting: cluster outside spectrum");

  const Vector& lam = p.spectrum.values;
  const double lambda1 = lam.front();
  double gap = std::numeric_limits<double>::infinity();
  if (lo > 0) gap = std::min(gap, lam[lo] - lam[lo - 1]);
  if (hi + 1 < lam.size()) gap = std::min(gap, lam[hi + 1] - lam[hi]);

  SplittingReport rep;
  rep.gamma = gamma_coefficient(b, cluster, p);
  rep.lambda0 = cluster.center;
  rep.base_cluster_values.assign(lam.begin() + long(lo), lam.begin() + long(hi) + 1);
  rep.b_sup = b.sup_abs();
  rep.b_grad_sup = b.grad_sup();

  const double budget = 0.25 * std::min(lambda1, gap);
  const SplitDirection dir = p.flavor == Flavor::additive ? SplitDirection::value
                                                          : SplitDirection::inverse;

  for (double eps : epsilons) {
    if (!(std::abs(eps) * rep.b_sup <= budget)) {
      std::ostringstream msg;
      msg << "verify_splitting: |eps|*sup|b| = " << std::abs(eps) * rep.b_sup
          << " exceeds the separation budget min(lambda_1/4, gap/4) = " << budget;
      throw std::invalid_argument(msg.str());
    }
    const EigenSystem pert =
        solve_flavor(p.flavor, p.frac_op, shifted_field(p.base_a, b, eps));
    const Vector& plam = pert.values;

    // the window must stay separated from its neighbors
    if (lo > 0 && plam[lo] - plam[lo - 1] < 0.5 * (lam[lo] - lam[lo - 1]))
      throw NumericalError("verify_splitting: cluster collision at index " +
                           std::to_string(lo - 1));
    if (hi + 1 < plam.size() && plam[hi + 1] - plam[hi] < 0.5 * (lam[hi + 1] - lam[hi]))
      throw NumericalError("verify_splitting: cluster collision at index " +
                           std::to_string(hi + 1));

    SplittingObservation obs;
    obs.eps = eps;
    obs.predicted = predict_splitting(rep.lambda0, rep.gamma, eps, dir);
    obs.measured.assign(plam.begin() + long(lo), plam.begin() + long(hi) + 1);
    for (std::size_t k = 0; k < obs.measured.size(); ++k)
      obs.max_deviation =
          std::max(obs.max_deviation, std::abs(obs.measured[k] - obs.predicted[k]));
    obs.cluster_width = obs.measured.back() - obs.measured.front();
    rep.observations.push_back(std::move(obs));
  }

  for (std::size_t k = 0; k + 1 < rep.observations.size(); ++k) {
    const auto& a0 = rep.observations[k];
    const auto& a1 = rep.observations[k + 1];
    rep.deviation_ratios.push_back(a0.max_deviation /
                                   std::max(a1.max_deviation, 1e-300));
    rep.width_ratios.push_back(a0.cluster_width / std::max(a1.cluster_width, 1e-300));
  }
  return rep;
}

IndependenceReport independence_test(const EigenCluster& cluster,
                                     const SymmetricMatrix& mass) {
  const std::size_t nu = cluster.multiplicity();
  if (nu < 2) throw std::invalid_argument("independence_test: needs multiplicity >= 2");
  const std::size_t dim = cluster.basis.rows();
  if (mass.dim() != dim)
    throw std::invalid_argument("independence_test: mass does not match basis");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i; j < nu; ++j) pairs.emplace_back(i, j);
  const std::size_t m = pairs.size();

  std::vector<Vector> prod(m, Vector(dim));
  for (std::size_t a = 0; a < m; ++a) {
    double nrm2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      prod[a][k] = cluster.basis(k, pairs[a].first) * cluster.basis(k, pairs[a].second);
      nrm2 += prod[a][k] * prod[a][k] * mass(k, k);
    }
    const double nrm = std::sqrt(std::max(nrm2, 1e-300));
    for (double& v : prod[a]) v /= nrm;
  }

  IndependenceReport rep;
  rep.nu = nu;
  rep.gram = SymmetricMatrix(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = a; c < m; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += prod[a][k] * prod[c][k] * mass(k, k);
      rep.gram.set(a, c, acc);
    }
  rep.min_eigenvalue = eig_sym(rep.gram).values.front();
  rep.independent = rep.min_eigenvalue > 1e-3;
  return rep;
}

}  // namespace fracspec

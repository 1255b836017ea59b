#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracspec/perturbation.hpp"

namespace fracspec {

Vector GammaMatrix::spectrum() const { return eig_sym(entries).values; }

GammaMatrix gamma_abstract(const SymmetricMatrix& dT, const EigenCluster& cluster) {
  const std::size_t dim = cluster.basis.rows();
  const std::size_t nu = cluster.multiplicity();
  if (dT.dim() != dim)
    throw std::invalid_argument("gamma_abstract: operator and basis dimensions differ");
  Matrix raw(nu, nu);
  for (std::size_t j = 0; j < nu; ++j) {
    const Vector xj = cluster.basis.column(j);
    const Vector txj = matvec(dT, xj);
    for (std::size_t i = 0; i < nu; ++i) raw(i, j) = dot(cluster.basis.column(i), txj);
  }
  GammaMatrix g;
  g.nu = nu;
  g.entries = SymmetricMatrix::from_dense(raw, 1e-10);
  g.flavor = GammaFlavor::abstract;
  g.basis_id = cluster.label;
  return g;
}

GammaMatrix gamma_quadrature(const ScalarField& b, const EigenCluster& cluster,
                             const SymmetricMatrix& mass, GammaFlavor flavor) {
  const std::size_t dim = cluster.basis.rows();
  const std::size_t nu = cluster.multiplicity();
  if (b.values.size() != dim || mass.dim() != dim)
    throw std::invalid_argument("gamma_quadrature: field/mass/basis shape mismatch");
  Matrix raw(nu, nu);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i; j < nu; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        acc += b.values[k] * cluster.basis(k, i) * cluster.basis(k, j) * mass(k, k);
      raw(i, j) = acc;
      raw(j, i) = acc;
    }
  GammaMatrix g;
  g.nu = nu;
  g.entries = SymmetricMatrix::from_dense(raw, 1e-10);
  g.flavor = flavor;
  g.basis_id = cluster.label;
  return g;
}

Vector predict_splitting(double lambda0, const GammaMatrix& gamma, double eps,
                         SplitDirection direction) {
  Vector spec = gamma.spectrum();
  Vector out(spec.size());
  if (direction == SplitDirection::value) {
    for (std::size_t k = 0; k < spec.size(); ++k) out[k] = lambda0 + eps * spec[k];
  } else {
    if (lambda0 == 0.0)
      throw std::invalid_argument("predict_splitting: inverse direction needs lambda0 != 0");
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double mu_scale = 1.0 + eps * spec[k];
      if (mu_scale == 0.0)
        throw NumericalError("predict_splitting: perturbed inverse eigenvalue vanishes");
      out[k] = lambda0 / mu_scale;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

HMembership h_membership(const GammaMatrix& gamma, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("h_membership: tol must be positive");
  const SymmetricMatrix& g = gamma.entries;
  double off = 0.0;
  double dmin = g(0, 0), dmax = g(0, 0), dsum = 0.0;
  for (std::size_t i = 0; i < gamma.nu; ++i) {
    dmin = std::min(dmin, g(i, i));
    dmax = std::max(dmax, g(i, i));
    dsum += g(i, i);
    for (std::size_t j = i + 1; j < gamma.nu; ++j) off = std::max(off, std::abs(g(i, j)));
  }
  HMembership m;
  m.off_diag_norm = off;
  m.diag_spread = dmax - dmin;
  m.tol = tol;
  m.is_member = off <= tol && m.diag_spread <= tol;
  m.rho = dsum / double(gamma.nu);
  return m;
}

namespace {

// symmetric index pairs i <= j in a fixed order: diagonal first, then rows
std::vector<std::pair<std::size_t, std::size_t>> sym_pairs(std::size_t nu) {
  std::vector<std::pair<std::size_t, std::size_t>> p;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i; j < nu; ++j) p.emplace_back(i, j);
  return p;
}

}  // namespace

ScalarField project_to_H(const ScalarField& b, const EigenCluster& cluster,
                         const SymmetricMatrix& mass) {
  const std::size_t dim = cluster.basis.rows();
  const std::size_t nu = cluster.multiplicity();
  if (b.values.size() != dim || mass.dim() != dim)
    throw std::invalid_argument("project_to_H: field/mass/basis shape mismatch");

  const auto pairs = sym_pairs(nu);
  const std::size_t m = pairs.size();

  // pointwise products of basis columns
  std::vector<Vector> prod(m, Vector(dim));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t k = 0; k < dim; ++k)
      prod[a][k] = cluster.basis(k, pairs[a].first) * cluster.basis(k, pairs[a].second);

  // Gram of the products in the mass metric; gamma_ij(prod_a) equals its
  // (pair(i,j), a) entry, so one matrix serves both roles
  SymmetricMatrix gram(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = a; c < m; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        acc += prod[a][k] * prod[c][k] * mass(k, k);
      gram.set(a, c, acc);
    }

  const EigenSystem ge = eig_sym(gram);
  const double gmax = std::max(std::abs(ge.values.front()), std::abs(ge.values.back()));
  if (!(ge.values.front() > 1e-12 * std::max(1.0, gmax))) {
    std::ostringstream msg;
    msg << "project_to_H: product Gram matrix is singular (min eigenvalue "
        << ge.values.front() << ")";
    throw NumericalError(msg.str());
  }

  // deviation of gamma(b) from its scalar part
  const GammaMatrix gb = gamma_quadrature(b, cluster, mass, GammaFlavor::coefficient);
  double mean_diag = 0.0;
  for (std::size_t i = 0; i < nu; ++i) mean_diag += gb.entries(i, i);
  mean_diag /= double(nu);
  Vector target(m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto [i, j] = pairs[a];
    target[a] = i == j ? gb.entries(i, i) - mean_diag : gb.entries(i, j);
  }

  const Vector coef = solve_spd(gram, target);
  Vector out = b.values;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t k = 0; k < dim; ++k) out[k] -= coef[a] * prod[a][k];
  return ScalarField(b.grid, std::move(out));
}

SymmetricMatrix project_to_H(const SymmetricMatrix& b, const EigenCluster& cluster) {
  const std::size_t dim = cluster.basis.rows();
  const std::size_t nu = cluster.multiplicity();
  if (b.dim() != dim)
    throw std::invalid_argument("project_to_H: matrix and basis dimensions differ");

  const GammaMatrix gb = gamma_abstract(b, cluster);
  double mean_diag = 0.0;
  for (std::size_t i = 0; i < nu; ++i) mean_diag += gb.entries(i, i);
  mean_diag /= double(nu);

  // deviation D = gamma(b) - rho I, pushed back to operator space as X D X^T;
  // orthonormality of the basis makes gamma of the correction exactly D
  Matrix dev(nu, nu);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nu; ++j)
      dev(i, j) = gb.entries(i, j) - (i == j ? mean_diag : 0.0);

  SymmetricMatrix out(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r; c < dim; ++c) {
      double corr = 0.0;
      for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nu; ++j)
          corr += cluster.basis(r, i) * dev(i, j) * cluster.basis(c, j);
      out.set(r, c, b(r, c) - corr);
    }
  return out;
}

TransversalityReport transversality_check(const std::vector<GammaMatrix>& gammas,
                                          double rank_tol) {
  if (gammas.empty())
    throw std::invalid_argument("transversality_check: needs at least one gamma matrix");
  if (!(rank_tol > 0.0))
    throw std::invalid_argument("transversality_check: rank_tol must be positive");
  const std::size_t nu = gammas.front().nu;
  for (const auto& g : gammas)
    if (g.nu != nu)
      throw std::invalid_argument("transversality_check: mixed cluster multiplicities");

  const auto pairs = sym_pairs(nu);
  const std::size_t m = pairs.size();
  const double root2 = std::sqrt(2.0);

  // rows: vec(gamma_k) for each sample, plus vec(identity)
  const std::size_t rows = gammas.size() + 1;
  Matrix v(rows, m);
  for (std::size_t r = 0; r < gammas.size(); ++r)
    for (std::size_t a = 0; a < m; ++a) {
      const auto [i, j] = pairs[a];
      const double e = gammas[r].entries(i, j);
      v(r, a) = i == j ? e : root2 * e;
    }
  for (std::size_t a = 0; a < m; ++a)
    v(gammas.size(), a) = pairs[a].first == pairs[a].second ? 1.0 : 0.0;

  // singular values via the m x m normal matrix (m <= 6 in practice)
  SymmetricMatrix vtv(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = a; c < m; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < rows; ++r) acc += v(r, a) * v(r, c);
      vtv.set(a, c, acc);
    }
  EigenSystem es = eig_sym(vtv);

  TransversalityReport rep;
  rep.nu = nu;
  rep.sample_count = gammas.size();
  rep.singular_values.resize(m);
  for (std::size_t a = 0; a < m; ++a)
    rep.singular_values[a] = std::sqrt(std::max(0.0, es.values[m - 1 - a]));
  const double smax = rep.singular_values.front();
  rep.span_dim = 0;
  for (double sv : rep.singular_values)
    if (sv >= rank_tol * smax && sv > 0.0) ++rep.span_dim;
  rep.full = rep.span_dim == m;
  rep.codimension = m - 1;
  return rep;
}

}  // namespace fracspec

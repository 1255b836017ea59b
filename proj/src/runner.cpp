#include "fracspec/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "fracspec/special.hpp"

namespace fracspec {

namespace {

using SteadyClock = std::chrono::steady_clock;

class StageClock {
 public:
  explicit StageClock(ExperimentReport& r) : rep_(r), t_(SteadyClock::now()) {}
  void lap(const std::string& stage) {
    const auto now = SteadyClock::now();
    rep_.timings.push_back({stage, std::chrono::duration<double>(now - t_).count()});
    t_ = now;
  }

 private:
  ExperimentReport& rep_;
  SteadyClock::time_point t_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific << v;
  return os.str();
}

// margin >= 0 passes; the margin is the signed slack against the threshold
CriterionResult grade(std::string name, double margin, std::string detail) {
  return {std::move(name), margin >= 0.0, margin, std::move(detail)};
}

FracOperator assemble(const ExperimentConfig& cfg) {
  AssemblyOptions opts;
  opts.threads = cfg.threads;
  if (cfg.dimension == 1) return assemble_1d(cfg.s, cfg.lo, cfg.hi, cfg.n, opts);
  return assemble_2d_square(cfg.s, cfg.lo, cfg.hi, cfg.n, opts);
}

ScalarField base_coefficient(const ExperimentConfig& cfg, GridPtr g) {
  if (cfg.a.present()) return cfg.a.realize(g);
  return ScalarField::constant(g, cfg.flavor == Flavor::multiplicative ? 1.0 : 0.0);
}

const EigenCluster& pick_cluster(const CoefficientProblem& p, const ExperimentConfig& cfg,
                                 std::size_t min_mult) {
  if (cfg.cluster_start) {
    for (const auto& c : p.clusters)
      if (std::find(c.indices.begin(), c.indices.end(), *cfg.cluster_start) !=
          c.indices.end()) {
        if (c.multiplicity() < min_mult)
          throw NumericalError("cluster at index " + std::to_string(*cfg.cluster_start) +
                               " has multiplicity " + std::to_string(c.multiplicity()) +
                               " but the experiment needs at least " +
                               std::to_string(min_mult));
        return c;
      }
    throw NumericalError("no cluster contains eigenvalue index " +
                         std::to_string(*cfg.cluster_start) +
                         " inside the spectrum window");
  }
  for (const auto& c : p.clusters)
    if (c.multiplicity() >= min_mult) return c;
  throw NumericalError("no eigenvalue cluster of multiplicity >= " +
                       std::to_string(min_mult) +
                       " inside the spectrum window; widen spectrum_window or relax "
                       "cluster_tol");
}

ScalarField member_field(const EigenCluster& cluster, std::size_t member, GridPtr g) {
  ScalarField f = ScalarField::zeros(g);
  for (std::size_t r = 0; r < cluster.basis.rows(); ++r)
    f.values[r] = cluster.basis(r, member);
  return f;
}

void fill_common_payload(ExperimentReport& rep, const CoefficientProblem& p,
                         const ExperimentConfig& cfg) {
  const std::size_t w = std::min<std::size_t>(cfg.spectrum_window, p.spectrum.dim());
  Vector head(p.spectrum.values.begin(), p.spectrum.values.begin() + w);
  rep.payload["spectrum"] = json_vector(head);
  nlohmann::json cl = nlohmann::json::array();
  for (const auto& c : p.clusters) cl.push_back(json_cluster(c));
  rep.payload["clusters"] = cl;
}

// h_membership tolerance for a discretized gamma: absolute floor plus a
// relative part, since entries carry quadrature error proportional to scale
double membership_tol(const ExperimentConfig& cfg, const GammaMatrix& g) {
  return std::max(cfg.h_tol, 1e-6 * max_abs(g.entries.dense()));
}

void run_solve(const ExperimentConfig& cfg, const FracOperator& op,
               const CoefficientProblem& p, ExperimentReport& rep) {
  const double lam1 = p.spectrum.values.at(0);
  rep.criteria.push_back(grade("ground-positive", lam1,
                               "lambda_1 = " + fmt(lam1) + " (must be > 0)"));

  const SymmetricMatrix sys =
      cfg.flavor == Flavor::multiplicative || !cfg.a.present()
          ? op.system_matrix()
          : op.with_potential(cfg.a.realize(op.grid)).system_matrix();
  const SymmetricMatrix mass =
      cfg.flavor == Flavor::multiplicative && cfg.a.present()
          ? mass_matrix(*op.grid, &p.base_a, MassRole::metric)
          : mass_matrix(*op.grid);
  const double res = eigen_residual(sys, mass, p.spectrum);
  const double scale = 1.0 + std::abs(p.spectrum.values.back());
  const double tol = 1e-8 * scale;
  rep.criteria.push_back(grade("eigen-residual", tol - res,
                               "max ||K v - lambda M v|| = " + fmt(res) +
                                   " vs tol " + fmt(tol)));
}

void run_coeff_split(const ExperimentConfig& cfg, const FracOperator& op,
                     const CoefficientProblem& p, ExperimentReport& rep,
                     StageClock& clock) {
  const EigenCluster& cluster = pick_cluster(p, cfg, 1);
  ScalarField b = cfg.b.realize(op.grid);
  const SymmetricMatrix mass = mass_matrix(*op.grid);
  if (cfg.project_b) {
    b = project_to_H(b, cluster, mass);
    rep.payload["b_projected"] = true;
  }
  clock.lap("prepare");

  SplittingReport sr = verify_splitting(p, b, cluster, cfg.epsilons);
  clock.lap("splitting");

  const HMembership mem = h_membership(sr.gamma, membership_tol(cfg, sr.gamma));
  rep.payload["gamma"] = json_gamma(sr.gamma);
  rep.payload["membership"] = json_membership(mem);
  rep.payload["splitting"] = json_splitting(sr);

  for (const auto& obs : sr.observations)
    for (std::size_t k = 0; k < obs.predicted.size(); ++k)
      rep.rows.push_back({obs.eps, k, obs.predicted[k], obs.measured[k],
                          std::abs(obs.predicted[k] - obs.measured[k])});

  // observations sorted by |eps| descending for the decay checks
  std::vector<const SplittingObservation*> by_mag;
  for (const auto& obs : sr.observations) by_mag.push_back(&obs);
  std::sort(by_mag.begin(), by_mag.end(), [](const auto* x, const auto* y) {
    return std::abs(x->eps) > std::abs(y->eps);
  });
  const auto& big = *by_mag.front();
  const auto& small = *by_mag[1];
  const double r = std::abs(big.eps / small.eps);
  const double floor = 1e-11 * (1.0 + std::abs(sr.lambda0));

  // the prediction error is the second-order remainder, so shrinking eps by r
  // must shrink it by about r^2; 0.4 absorbs the remainder's own variation
  if (small.max_deviation <= floor) {
    rep.criteria.push_back(grade("remainder-quadratic", 1.0,
                                 "deviation " + fmt(small.max_deviation) +
                                     " at eps " + fmt(small.eps) +
                                     " is below the noise floor " + fmt(floor)));
  } else {
    const double ratio = big.max_deviation / small.max_deviation;
    rep.criteria.push_back(grade(
        "remainder-quadratic", ratio - 0.4 * r * r,
        "deviation ratio " + fmt(ratio) + " vs quadratic expectation " + fmt(r * r)));
  }

  if (mem.is_member) {
    // gamma is (numerically) scalar: the first-order splitting vanishes and
    // the measured width itself must decay quadratically
    if (small.cluster_width <= floor) {
      rep.criteria.push_back(grade("width-quadratic", 1.0,
                                   "width " + fmt(small.cluster_width) + " at eps " +
                                       fmt(small.eps) + " is below the noise floor " +
                                       fmt(floor)));
    } else {
      const double wr = big.cluster_width / small.cluster_width;
      rep.criteria.push_back(grade("width-quadratic", wr - 0.4 * r * r,
                                   "width ratio " + fmt(wr) +
                                       " vs quadratic expectation " + fmt(r * r)));
    }
  } else {
    // gamma splits the cluster: the measured width at the largest eps must
    // match the predicted first-order width within 10 percent
    const Vector pred = big.predicted;
    const double expected =
        *std::max_element(pred.begin(), pred.end()) -
        *std::min_element(pred.begin(), pred.end());
    const double rel = std::abs(big.cluster_width - expected) / expected;
    rep.criteria.push_back(grade("width-match", 0.10 - rel,
                                 "measured width " + fmt(big.cluster_width) +
                                     " vs predicted " + fmt(expected) +
                                     " (rel dev " + fmt(rel) + ")"));
  }
}

void run_independence(const ExperimentConfig& cfg, const FracOperator& op,
                      const CoefficientProblem& p, ExperimentReport& rep) {
  const EigenCluster& cluster = pick_cluster(p, cfg, 2);
  const IndependenceReport ind = independence_test(cluster, mass_matrix(*op.grid));
  rep.payload["independence"] = json_independence(ind);
  rep.criteria.push_back(grade("products-independent", ind.min_eigenvalue - 1e-3,
                               "min Gram eigenvalue " + fmt(ind.min_eigenvalue) +
                                   " vs threshold 1e-03"));
}

void run_coeff_transversality(const ExperimentConfig& cfg, const FracOperator& op,
                              const CoefficientProblem& p, ExperimentReport& rep) {
  const EigenCluster& cluster = pick_cluster(p, cfg, 2);
  const std::size_t nu = cluster.multiplicity();

  // the pairwise eigenfunction products themselves are the canonical samples;
  // together with the identity they must span all symmetric directions
  std::vector<GammaMatrix> gammas;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i; j < nu; ++j) {
      ScalarField prod = ScalarField::zeros(op.grid);
      for (std::size_t r = 0; r < cluster.basis.rows(); ++r)
        prod.values[r] = cluster.basis(r, i) * cluster.basis(r, j);
      gammas.push_back(gamma_coefficient(prod, cluster, p));
    }
  if (cfg.b.present())
    gammas.push_back(gamma_coefficient(cfg.b.realize(op.grid), cluster, p));

  const TransversalityReport t = transversality_check(gammas, cfg.rank_tol);
  rep.payload["transversality"] = json_transversality(t);

  const std::size_t dim_sym = nu * (nu + 1) / 2;
  double margin = -1.0;
  if (t.singular_values.size() >= dim_sym && t.singular_values.front() > 0.0)
    margin = t.singular_values[dim_sym - 1] /
                 (cfg.rank_tol * t.singular_values.front()) -
             1.0;
  rep.criteria.push_back(grade(
      "span-full", t.full ? margin : std::min(margin, -1.0),
      "span " + std::to_string(t.span_dim) + " of " + std::to_string(dim_sym) +
          ", certified codimension " + std::to_string(t.codimension)));
}

std::vector<BoundaryTrace> member_traces(const EigenCluster& cluster,
                                         const FracOperator& op, double s) {
  std::vector<BoundaryTrace> traces;
  for (std::size_t k = 0; k < cluster.multiplicity(); ++k)
    traces.push_back(
        extract_trace(member_field(cluster, k, op.grid), k, *op.grid, s));
  return traces;
}

double max_used_residual(const std::vector<BoundaryTrace>& traces) {
  double worst = 0.0;
  for (const auto& t : traces)
    for (const auto& smp : t.samples)
      if (!smp.excluded) worst = std::max(worst, smp.residual);
  return worst;
}

void run_domain_hadamard(const ExperimentConfig& cfg, const FracOperator& op,
                         const CoefficientProblem& p, ExperimentReport& rep,
                         StageClock& clock) {
  const EigenCluster& cluster = pick_cluster(p, cfg, 1);
  const std::vector<BoundaryTrace> traces = member_traces(cluster, op, cfg.s);
  clock.lap("traces");

  const DomainPerturbation psi = cfg.psi.realize();
  const GammaMatrix gamma = gamma_domain(psi, traces, cluster);
  const Vector derivative = hadamard_derivative(p.spectrum.values[cluster.indices[0]],
                                                gamma, cfg.s);

  nlohmann::json jt = nlohmann::json::array();
  for (const auto& t : traces) jt.push_back(json_trace(t));
  rep.payload["traces"] = jt;
  rep.payload["gamma_dom"] = json_gamma(gamma);
  rep.payload["hadamard_derivative"] = json_vector(derivative);

  const double worst_res = max_used_residual(traces);
  rep.criteria.push_back(grade("trace-quality", 0.05 - worst_res,
                               "max boundary-fit residual " + fmt(worst_res) +
                                   " vs cutoff 5.0e-02"));

  const double hc = hadamard_constant(cfg.s);
  if (psi.family == PsiFamily::dilation) {
    if (cfg.dimension == 1) {
      // scale identity: hc * gamma_kk(psi = c x) = 2 s c lambda_k
      double worst = 0.0;
      for (std::size_t k = 0; k < cluster.multiplicity(); ++k) {
        const double lam = p.spectrum.values[cluster.indices[k]];
        const double expected = 2.0 * cfg.s * psi.dilation * lam;
        const double got = hc * gamma.entries(k, k);
        worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
        rep.rows.push_back({0.0, k, expected, got, std::abs(got - expected)});
      }
      rep.criteria.push_back(grade("scale-identity", 0.05 - worst,
                                   "max relative deviation " + fmt(worst) +
                                       " vs tol 5.0e-02"));
    } else {
      // dilation respects every symmetry of the square, so the degenerate
      // cluster's derivative spectrum must stay scalar
      if (cluster.multiplicity() >= 2) {
        double mean = 0.0;
        for (double d : derivative) mean += d;
        mean /= static_cast<double>(derivative.size());
        const double spread =
            *std::max_element(derivative.begin(), derivative.end()) -
            *std::min_element(derivative.begin(), derivative.end());
        const double rel = spread / std::abs(mean);
        rep.criteria.push_back(grade("dilation-isotropy", 0.05 - rel,
                                     "derivative spread " + fmt(spread) +
                                         " over mean " + fmt(mean)));
      }
      double worst_sign = 0.0;  // outward dilation must lower every eigenvalue
      for (double d : derivative)
        worst_sign = std::max(worst_sign, psi.dilation > 0 ? d : -d);
      rep.criteria.push_back(grade("derivative-sign", -worst_sign,
                                   "max signed derivative " + fmt(worst_sign) +
                                       " (must be < 0 for outward dilation)"));
    }
  } else if (psi.family == PsiFamily::translation) {
    // translations preserve the spectrum exactly; their gamma must vanish
    // relative to the dilation gamma of the same traces
    const GammaMatrix ref = gamma_domain(DomainPerturbation::dilation_of(1.0), traces,
                                         cluster);
    const double scale = max_abs(ref.entries.dense());
    const double null = max_abs(gamma.entries.dense());
    rep.criteria.push_back(grade("translation-null", 0.05 * scale - null,
                                 "max |gamma| " + fmt(null) + " vs 5 percent of the "
                                 "dilation gamma " + fmt(scale)));
  } else {
    const HMembership mem = h_membership(gamma, membership_tol(cfg, gamma));
    rep.payload["membership"] = json_membership(mem);
    rep.criteria.push_back(grade("gamma-finite", 0.0,
                                 "tabulated boundary field produced gamma with "
                                 "max entry " + fmt(max_abs(gamma.entries.dense()))));
  }
}

void run_domain_split(const ExperimentConfig& cfg, const CoefficientProblem& p,
                      ExperimentReport& rep, StageClock& clock) {
  const EigenCluster& cluster = pick_cluster(p, cfg, 1);
  const DomainPerturbation psi = cfg.psi.realize();
  const DomainSplitReport dsr = verify_domain_splitting(p, psi, cluster, cfg.epsilons);
  clock.lap("resolve");

  rep.payload["domain_split"] = json_domain_split(dsr);
  for (const auto& obs : dsr.observations)
    for (std::size_t k = 0; k < obs.richardson.size(); ++k)
      rep.rows.push_back({obs.eps, k, dsr.predicted[k], obs.richardson[k],
                          std::abs(dsr.predicted[k] - obs.richardson[k])});

  const auto& finest = *std::min_element(
      dsr.observations.begin(), dsr.observations.end(),
      [](const auto& x, const auto& y) { return x.eps < y.eps; });

  if (psi.family == PsiFamily::dilation) {
    const double c = psi.dilation;
    // the dilated matrix scales each entry by (1+eps c)^{-2s} exactly, so the
    // plain central difference must match the same stencil applied to the law
    double worst_law = 0.0;
    for (const auto& obs : dsr.observations)
      for (std::size_t k = 0; k < obs.measured.size(); ++k) {
        const double lam = dsr.lambda0;
        const double law = lam *
                           (std::pow(1.0 + obs.eps * c, -2.0 * cfg.s) -
                            std::pow(1.0 - obs.eps * c, -2.0 * cfg.s)) /
                           (2.0 * obs.eps);
        worst_law = std::max(worst_law, std::abs(obs.measured[k] - law) /
                                            std::abs(lam));
      }
    rep.criteria.push_back(grade("dilation-stencil-exact", 1e-9 - worst_law,
                                 "max |central diff - scaling law at same stencil| "
                                 "= " + fmt(worst_law) + " of lambda, tol 1.0e-09"));

    double worst_slope = 0.0;
    for (std::size_t k = 0; k < finest.richardson.size(); ++k) {
      const double target = -2.0 * cfg.s * c * dsr.lambda0;
      worst_slope = std::max(worst_slope, std::abs(finest.richardson[k] - target) /
                                              std::abs(target));
    }
    rep.criteria.push_back(grade("dilation-slope", 1e-8 - worst_slope,
                                 "extrapolated derivative vs -2 s c lambda: rel dev "
                                 + fmt(worst_slope) + ", tol 1.0e-08"));
  } else if (psi.family == PsiFamily::translation) {
    // the scheme is translation invariant, so the re-solved spectra must agree
    // to machine precision and every derivative must vanish
    double worst = 0.0;
    for (const auto& obs : dsr.observations)
      for (double d : obs.richardson) worst = std::max(worst, std::abs(d));
    const double tol = 1e-8 * (1.0 + std::abs(dsr.lambda0));
    rep.criteria.push_back(grade("translation-zero", tol - worst,
                                 "max |derivative| " + fmt(worst) + " vs tol " +
                                     fmt(tol)));
  } else {
    double worst = 0.0;
    double pred_sup = 0.0;
    for (double v : dsr.predicted) pred_sup = std::max(pred_sup, std::abs(v));
    const double scale = std::max(pred_sup, 1e-12 * (1.0 + dsr.lambda0));
    for (std::size_t k = 0; k < finest.richardson.size(); ++k)
      worst = std::max(worst,
                       std::abs(finest.richardson[k] - dsr.predicted[k]) / scale);
    rep.criteria.push_back(grade("hadamard-match", 0.10 - worst,
                                 "measured vs predicted derivatives: max rel dev " +
                                     fmt(worst) + ", tol 1.0e-01"));
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config_echo = cfg.echo;
  StageClock clock(rep);

  const FracOperator op = assemble(cfg);
  clock.lap("assemble");

  const ScalarField a = base_coefficient(cfg, op.grid);
  const CoefficientProblem p =
      solve_problem(cfg.flavor, op, a, cfg.cluster_tol,
                    IndexRange{0, cfg.spectrum_window});
  clock.lap("solve");

  fill_common_payload(rep, p, cfg);

  if (cfg.kind == "solve") {
    run_solve(cfg, op, p, rep);
  } else if (cfg.kind == "coeff-split") {
    run_coeff_split(cfg, op, p, rep, clock);
  } else if (cfg.kind == "independence") {
    run_independence(cfg, op, p, rep);
  } else if (cfg.kind == "coeff-transversality") {
    run_coeff_transversality(cfg, op, p, rep);
  } else if (cfg.kind == "domain-hadamard") {
    run_domain_hadamard(cfg, op, p, rep, clock);
  } else if (cfg.kind == "domain-split") {
    run_domain_split(cfg, p, rep, clock);
  } else {
    throw ConfigError("config field 'kind': unknown experiment kind '" + cfg.kind + "'");
  }
  clock.lap("grade");
  return rep;
}

}  // namespace fracspec

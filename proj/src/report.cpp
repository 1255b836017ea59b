#include <sstream>

#include "fracspec/report.hpp"

namespace fracspec {

using nlohmann::json;

bool ExperimentReport::all_passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return true;
}

json json_vector(const Vector& v) { return json(v); }

json json_matrix(const SymmetricMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json json_gamma(const GammaMatrix& g) {
  const char* flavor = g.flavor == GammaFlavor::abstract      ? "abstract"
                       : g.flavor == GammaFlavor::coefficient ? "coefficient"
                                                              : "domain";
  return json{{"nu", g.nu},
              {"entries", json_matrix(g.entries)},
              {"flavor", flavor},
              {"basis_id", g.basis_id},
              {"spectrum", json_vector(g.spectrum())}};
}

json json_cluster(const EigenCluster& c) {
  return json{{"center", c.center},
              {"indices", c.indices},
              {"label", c.label},
              {"multiplicity", c.multiplicity()}};
}

json json_membership(const HMembership& m) {
  return json{{"is_member", m.is_member},
              {"rho", m.rho},
              {"off_diag_norm", m.off_diag_norm},
              {"diag_spread", m.diag_spread},
              {"tol", m.tol}};
}

json json_transversality(const TransversalityReport& t) {
  return json{{"nu", t.nu},
              {"sample_count", t.sample_count},
              {"span_dim", t.span_dim},
              {"full", t.full},
              {"codimension", t.codimension},
              {"singular_values", json_vector(t.singular_values)}};
}

json json_independence(const IndependenceReport& r) {
  return json{{"nu", r.nu},
              {"gram", json_matrix(r.gram)},
              {"min_eigenvalue", r.min_eigenvalue},
              {"independent", r.independent}};
}

json json_splitting(const SplittingReport& r) {
  json obs = json::array();
  for (const auto& o : r.observations)
    obs.push_back(json{{"eps", o.eps},
                       {"predicted", json_vector(o.predicted)},
                       {"measured", json_vector(o.measured)},
                       {"max_deviation", o.max_deviation},
                       {"cluster_width", o.cluster_width}});
  return json{{"gamma", json_gamma(r.gamma)},
              {"lambda0", r.lambda0},
              {"base_cluster", json_vector(r.base_cluster_values)},
              {"observations", std::move(obs)},
              {"deviation_ratios", json_vector(r.deviation_ratios)},
              {"width_ratios", json_vector(r.width_ratios)},
              {"b_sup", r.b_sup},
              {"b_grad_sup", r.b_grad_sup}};
}

json json_domain_split(const DomainSplitReport& r) {
  json obs = json::array();
  for (const auto& o : r.observations)
    obs.push_back(json{{"eps", o.eps},
                       {"measured", json_vector(o.measured)},
                       {"richardson", json_vector(o.richardson)},
                       {"max_deviation", o.max_deviation}});
  return json{{"gamma_dom", json_gamma(r.gamma_dom)},
              {"lambda0", r.lambda0},
              {"predicted", json_vector(r.predicted)},
              {"observations", std::move(obs)}};
}

json json_trace(const BoundaryTrace& t) {
  json samples = json::array();
  for (const auto& s : t.samples)
    samples.push_back(json{{"point", {s.point[0], s.point[1]}},
                           {"normal", {s.normal[0], s.normal[1]}},
                           {"value", s.value},
                           {"residual", s.residual},
                           {"excluded", s.excluded}});
  return json{{"cluster_index", t.cluster_index}, {"samples", std::move(samples)}};
}

json report_json(const ExperimentReport& r, bool include_timings) {
  json criteria = json::array();
  for (const auto& c : r.criteria)
    criteria.push_back(json{{"name", c.name},
                            {"passed", c.passed},
                            {"margin", c.margin},
                            {"detail", c.detail}});
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"eps", row.eps},
                        {"member", row.member},
                        {"predicted", row.predicted},
                        {"measured", row.measured},
                        {"deviation", row.deviation}});
  json out{{"config", r.config_echo},
           {"results", r.payload},
           {"comparisons", std::move(rows)},
           {"criteria", std::move(criteria)},
           {"all_passed", r.all_passed()}};
  if (include_timings) {
    json t = json::array();
    for (const auto& st : r.timings)
      t.push_back(json{{"stage", st.stage}, {"seconds", st.seconds}});
    out["timings"] = std::move(t);
  }
  return out;
}

std::string report_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "eps,member,predicted,measured,deviation\n";
  os.precision(17);
  for (const auto& row : r.rows)
    os << row.eps << ',' << row.member << ',' << row.predicted << ',' << row.measured
       << ',' << row.deviation << '\n';
  return os.str();
}

std::string report_text(const ExperimentReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "experiment: " << r.config_echo.value("kind", "?") << "\n";
  for (const auto& c : r.criteria)
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  margin=" << c.margin
       << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  os << (r.all_passed() ? "all criteria passed\n" : "criteria FAILED\n");
  return os.str();
}

}  // namespace fracspec

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/coefficient.hpp"
#include "fracspec/domain.hpp"
#include "fracspec/perturbation.hpp"

namespace fracspec {

struct CriterionResult {
  std::string name;
  bool passed = false;
  double margin = 0.0;  // signed distance to the threshold, positive = slack
  std::string detail;
};

struct StageTime {
  std::string stage;
  double seconds = 0.0;
};

// one prediction/measurement pair, flattened for the CSV table
struct ComparisonRow {
  double eps = 0.0;
  std::size_t member = 0;
  double predicted = 0.0;
  double measured = 0.0;
  double deviation = 0.0;
};

struct ExperimentReport {
  nlohmann::json config_echo;
  nlohmann::json payload;  // kind-specific structured results
  std::vector<ComparisonRow> rows;
  std::vector<CriterionResult> criteria;
  std::vector<StageTime> timings;

  bool all_passed() const;
};

// Full structured report. Key order is alphabetical (library default), and
// every float serializes shortest-round-trip, so two runs with the same
// config produce byte-identical output when timings are excluded.
nlohmann::json report_json(const ExperimentReport& r, bool include_timings);

// Flat (eps, member, predicted, measured, deviation) table.
std::string report_csv(const ExperimentReport& r);

// Human-readable summary with one pass/fail line per criterion.
std::string report_text(const ExperimentReport& r);

// JSON value builders shared by the runner
nlohmann::json json_vector(const Vector& v);
nlohmann::json json_matrix(const SymmetricMatrix& m);
nlohmann::json json_gamma(const GammaMatrix& g);
nlohmann::json json_cluster(const EigenCluster& c);
nlohmann::json json_membership(const HMembership& m);
nlohmann::json json_transversality(const TransversalityReport& t);
nlohmann::json json_independence(const IndependenceReport& r);
nlohmann::json json_splitting(const SplittingReport& r);
nlohmann::json json_domain_split(const DomainSplitReport& r);
nlohmann::json json_trace(const BoundaryTrace& t);

}  // namespace fracspec

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/coefficient.hpp"
#include "fracspec/domain.hpp"

namespace fracspec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// one monomial coeff * x^px * y^py
struct PolyTerm {
  int px = 0;
  int py = 0;
  double coeff = 0.0;
};

// scalar-field specification: a constant, a polynomial given as a monomial
// coefficient map ("1", "x", "y^2", "x*y", ...), or node values from a file
struct FieldSpec {
  enum class Kind { none, constant, polynomial, tabulated };
  Kind kind = Kind::none;
  double constant = 0.0;
  std::vector<PolyTerm> poly;
  std::string file;
  Vector values;

  bool present() const { return kind != Kind::none; }
  ScalarField realize(GridPtr g) const;
};

struct PsiSpec {
  bool present = false;
  PsiFamily family = PsiFamily::translation;
  std::array<double, 2> vec{0.0, 0.0};  // translation vector
  double coeff = 0.0;                   // dilation coefficient
  Vector values;                        // tabulated psi.N samples

  DomainPerturbation realize() const;
};

struct ExperimentConfig {
  std::string kind;  // solve | coeff-split | coeff-transversality | independence |
                     // domain-hadamard | domain-split
  double s = 0.5;
  int dimension = 1;
  double lo = -1.0;
  double hi = 1.0;
  std::size_t n = 128;
  Flavor flavor = Flavor::additive;
  FieldSpec a;
  FieldSpec b;
  PsiSpec psi;
  std::vector<double> epsilons;
  double cluster_tol = 1e-6;
  double rank_tol = 1e-8;
  double h_tol = 1e-8;
  std::uint64_t seed = 0;
  std::size_t spectrum_window = 12;
  std::optional<std::size_t> cluster_start;  // eigen index the tracked cluster contains
  bool project_b = false;  // replace b with its multiplicity-preserving projection
  int threads = 1;
  nlohmann::json echo;
};

// Parses and validates a config object. relative tabulated-file paths resolve
// against base_dir; all referenced files must exist. Throws ConfigError with
// the offending field in the message.
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir);

// Reads a file, reporting JSON syntax errors with a line number.
ExperimentConfig load_config(const std::string& path);

}  // namespace fracspec

#include "fracspec/config.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fracspec {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

double need_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

// json integer literals may arrive signed; accept them when non-negative
bool is_uint(const nlohmann::json& j) {
  return j.is_number_unsigned() ||
         (j.is_number_integer() && j.get<long long>() >= 0);
}

// "x^2*y" -> (2, 1); "1" -> (0, 0)
std::pair<int, int> parse_monomial(const std::string& raw, const std::string& field) {
  std::string key;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) key.push_back(c);
  if (key.empty()) fail(field, "empty monomial key");
  if (key == "1") return {0, 0};
  int px = 0, py = 0;
  std::stringstream ss(key);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    if (factor.empty()) fail(field, "malformed monomial '" + raw + "'");
    char var = factor[0];
    if (var != 'x' && var != 'y')
      fail(field, "monomial '" + raw + "' uses variable '" + std::string(1, var) +
                      "' (expected x or y)");
    int power = 1;
    if (factor.size() > 1) {
      if (factor[1] != '^') fail(field, "malformed monomial '" + raw + "'");
      const std::string exp = factor.substr(2);
      if (exp.empty() || exp.find_first_not_of("0123456789") != std::string::npos)
        fail(field, "monomial '" + raw + "' has a non-integer exponent");
      power = std::stoi(exp);
    }
    (var == 'x' ? px : py) += power;
  }
  return {px, py};
}

Vector read_value_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) fail(field, "cannot open file '" + path + "'");
  Vector out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) fail(field, "non-numeric data in file '" + path + "'");
  if (out.empty()) fail(field, "file '" + path + "' holds no values");
  return out;
}

std::string resolve(const std::string& file, const std::string& base_dir) {
  std::filesystem::path p(file);
  if (p.is_absolute() || base_dir.empty()) return file;
  return (std::filesystem::path(base_dir) / p).string();
}

FieldSpec parse_field(const nlohmann::json& j, const std::string& field,
                      const std::string& base_dir) {
  FieldSpec f;
  if (j.is_number()) {
    f.kind = FieldSpec::Kind::constant;
    f.constant = j.get<double>();
    return f;
  }
  if (j.is_object() && j.contains("file")) {
    if (!j["file"].is_string()) fail(field + ".file", "expected a string path");
    f.kind = FieldSpec::Kind::tabulated;
    f.file = resolve(j["file"].get<std::string>(), base_dir);
    f.values = read_value_file(f.file, field + ".file");
    return f;
  }
  if (j.is_object()) {
    f.kind = FieldSpec::Kind::polynomial;
    for (const auto& [key, val] : j.items()) {
      auto [px, py] = parse_monomial(key, field);
      f.poly.push_back({px, py, need_number(val, field + "." + key)});
    }
    if (f.poly.empty()) fail(field, "polynomial map holds no monomials");
    return f;
  }
  fail(field, "expected a number, a monomial map, or {\"file\": path}");
}

PsiSpec parse_psi(const nlohmann::json& j, const std::string& base_dir) {
  PsiSpec p;
  p.present = true;
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    fail("psi", "expected an object with a string 'family'");
  const std::string fam = j["family"].get<std::string>();
  if (fam == "translation") {
    p.family = PsiFamily::translation;
    if (!j.contains("vector") || !j["vector"].is_array() || j["vector"].empty() ||
        j["vector"].size() > 2)
      fail("psi.vector", "translation needs a direction array of 1 or 2 numbers");
    p.vec = {need_number(j["vector"][0], "psi.vector[0]"),
             j["vector"].size() > 1 ? need_number(j["vector"][1], "psi.vector[1]") : 0.0};
  } else if (fam == "dilation") {
    p.family = PsiFamily::dilation;
    p.coeff = j.contains("coefficient") ? need_number(j["coefficient"], "psi.coefficient") : 1.0;
    if (p.coeff == 0.0) fail("psi.coefficient", "dilation coefficient must be nonzero");
  } else if (fam == "tabulated") {
    p.family = PsiFamily::tabulated;
    if (j.contains("values")) {
      if (!j["values"].is_array() || j["values"].empty())
        fail("psi.values", "expected a non-empty array of numbers");
      for (std::size_t k = 0; k < j["values"].size(); ++k)
        p.values.push_back(need_number(j["values"][k], "psi.values"));
    } else if (j.contains("file") && j["file"].is_string()) {
      p.values = read_value_file(resolve(j["file"].get<std::string>(), base_dir), "psi.file");
    } else {
      fail("psi", "tabulated family needs 'values' or 'file'");
    }
  } else {
    fail("psi.family", "unknown family '" + fam +
                           "' (expected translation, dilation, or tabulated)");
  }
  return p;
}

}  // namespace

ScalarField FieldSpec::realize(GridPtr g) const {
  switch (kind) {
    case Kind::none:
      throw ConfigError("internal: realizing an absent field");
    case Kind::constant:
      return ScalarField::constant(g, constant);
    case Kind::polynomial:
      return ScalarField::sample(g, [this](double x, double y) {
        double acc = 0.0;
        for (const auto& t : poly)
          acc += t.coeff * std::pow(x, t.px) * std::pow(y, t.py);
        return acc;
      });
    case Kind::tabulated: {
      if (values.size() != g->node_count())
        throw ConfigError("config field tabulated file '" + file + "': holds " +
                          std::to_string(values.size()) + " values but the grid has " +
                          std::to_string(g->node_count()) + " nodes");
      ScalarField f = ScalarField::zeros(g);
      f.values = values;
      return f;
    }
  }
  throw ConfigError("internal: bad field kind");
}

DomainPerturbation PsiSpec::realize() const {
  switch (family) {
    case PsiFamily::translation:
      return DomainPerturbation::translation_of(vec[0], vec[1]);
    case PsiFamily::dilation:
      return DomainPerturbation::dilation_of(coeff);
    case PsiFamily::tabulated:
      return DomainPerturbation::tabulated_of(values);
  }
  throw ConfigError("internal: bad psi family");
}

ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("config root: expected a JSON object");
  ExperimentConfig c;
  c.echo = j;

  static const std::set<std::string> known = {
      "kind",       "s",        "geometry", "n",           "flavor",
      "a",          "b",        "psi",      "epsilons",    "cluster_tol",
      "rank_tol",   "h_tol",    "seed",     "spectrum_window", "cluster_start",
      "project_b",  "threads"};
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (!known.count(key)) fail(key, "unknown field");
  }

  if (!j.contains("kind") || !j["kind"].is_string()) fail("kind", "required string");
  c.kind = j["kind"].get<std::string>();
  static const std::set<std::string> kinds = {"solve",        "coeff-split",
                                              "coeff-transversality", "independence",
                                              "domain-hadamard",      "domain-split"};
  if (!kinds.count(c.kind))
    fail("kind", "unknown experiment kind '" + c.kind + "'");

  if (!j.contains("s")) fail("s", "required");
  c.s = need_number(j["s"], "s");
  if (!(c.s > 0.0 && c.s < 1.0)) fail("s", "must lie strictly between 0 and 1");

  if (!j.contains("geometry") || !j["geometry"].is_object())
    fail("geometry", "required object with 'interval' or 'square'");
  const auto& g = j["geometry"];
  const bool has_i = g.contains("interval"), has_sq = g.contains("square");
  if (has_i == has_sq)
    fail("geometry", "give exactly one of 'interval' or 'square'");
  const auto& bounds = has_i ? g["interval"] : g["square"];
  if (!bounds.is_array() || bounds.size() != 2)
    fail(has_i ? "geometry.interval" : "geometry.square", "expected [lo, hi]");
  c.dimension = has_i ? 1 : 2;
  c.lo = need_number(bounds[0], "geometry bounds");
  c.hi = need_number(bounds[1], "geometry bounds");
  if (!(c.lo < c.hi)) fail("geometry", "bounds must satisfy lo < hi");

  if (!j.contains("n") || !is_uint(j["n"]) || j["n"].get<long long>() < 1) fail("n", "required positive integer");
  c.n = j["n"].get<std::size_t>();
  if (c.dimension == 1 && (c.n < 8 || c.n > 4096))
    fail("n", "interval grids support n in [8, 4096]");
  if (c.dimension == 2 && (c.n < 8 || c.n > 48))
    fail("n", "square grids support n in [8, 48] per axis");

  if (j.contains("flavor")) {
    if (!j["flavor"].is_string()) fail("flavor", "expected a string");
    const std::string fl = j["flavor"].get<std::string>();
    if (fl == "additive")
      c.flavor = Flavor::additive;
    else if (fl == "multiplicative")
      c.flavor = Flavor::multiplicative;
    else
      fail("flavor", "expected 'additive' or 'multiplicative'");
  }

  if (j.contains("a")) c.a = parse_field(j["a"], "a", base_dir);
  if (j.contains("b")) c.b = parse_field(j["b"], "b", base_dir);
  if (j.contains("psi")) c.psi = parse_psi(j["psi"], base_dir);

  if (j.contains("epsilons")) {
    if (!j["epsilons"].is_array() || j["epsilons"].empty())
      fail("epsilons", "expected a non-empty array of numbers");
    for (std::size_t k = 0; k < j["epsilons"].size(); ++k) {
      const double e = need_number(j["epsilons"][k], "epsilons");
      if (e == 0.0) fail("epsilons", "entries must be nonzero");
      c.epsilons.push_back(e);
    }
  }

  auto opt_pos = [&](const char* name, double& slot) {
    if (!j.contains(name)) return;
    slot = need_number(j[name], name);
    if (!(slot > 0.0)) fail(name, "must be positive");
  };
  opt_pos("cluster_tol", c.cluster_tol);
  opt_pos("rank_tol", c.rank_tol);
  opt_pos("h_tol", c.h_tol);

  if (j.contains("seed")) {
    if (!is_uint(j["seed"])) fail("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("spectrum_window")) {
    if (!is_uint(j["spectrum_window"]) || j["spectrum_window"].get<std::size_t>() == 0)
      fail("spectrum_window", "expected a positive integer");
    c.spectrum_window = j["spectrum_window"].get<std::size_t>();
  }
  if (j.contains("cluster_start")) {
    if (!is_uint(j["cluster_start"]))
      fail("cluster_start", "expected a non-negative integer");
    c.cluster_start = j["cluster_start"].get<std::size_t>();
  }
  if (j.contains("project_b")) {
    if (!j["project_b"].is_boolean()) fail("project_b", "expected a boolean");
    c.project_b = j["project_b"].get<bool>();
  }
  if (j.contains("threads")) {
    if (!is_uint(j["threads"]) || j["threads"].get<int>() < 1)
      fail("threads", "expected a positive integer");
    c.threads = j["threads"].get<int>();
  }

  // per-kind requirements
  const bool needs_b = c.kind == "coeff-split";
  const bool is_domain = c.kind == "domain-hadamard" || c.kind == "domain-split";
  const bool needs_psi = is_domain;
  if (is_domain) {
    if (c.flavor == Flavor::multiplicative)
      fail("flavor", "domain experiments use the unweighted operator");
    if (c.a.present() &&
        !(c.a.kind == FieldSpec::Kind::constant && c.a.constant == 0.0))
      fail("a", "domain experiments run on the bare operator; drop 'a'");
    if (c.b.present()) fail("b", "not used by domain experiments");
  }
  const bool needs_eps = c.kind == "coeff-split" || c.kind == "domain-split";
  if (needs_b && !c.b.present()) fail("b", "required for kind '" + c.kind + "'");
  if (needs_psi && !c.psi.present) fail("psi", "required for kind '" + c.kind + "'");
  if (needs_eps && c.epsilons.empty())
    fail("epsilons", "required for kind '" + c.kind + "'");
  if (c.kind == "coeff-split" && c.epsilons.size() < 2)
    fail("epsilons", "kind 'coeff-split' needs at least two magnitudes to measure decay");
  if (c.kind == "domain-split")
    for (double e : c.epsilons)
      if (!(e > 0.0)) fail("epsilons", "kind 'domain-split' needs positive magnitudes");
  if (c.psi.present && c.psi.family == PsiFamily::tabulated && c.dimension == 2)
    fail("psi", "tabulated boundary fields are supported on intervals only");
  if (c.psi.present && c.psi.family == PsiFamily::tabulated && c.psi.values.size() != 2)
    fail("psi.values", "an interval boundary has exactly two points; give two values");

  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t k = 0; k < stop; ++k)
      if (text[k] == '\n') ++line;
    throw ConfigError("config file '" + path + "' line " + std::to_string(line) + ": " +
                      e.what());
  }
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(j, dir);
}

}  // namespace fracspec

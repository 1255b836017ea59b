#include <doctest.h>

#include <string>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fracspec/config.hpp"

using namespace fracspec;
namespace fs = std::filesystem;

namespace {

nlohmann::json minimal() {
  return nlohmann::json{{"kind", "solve"},
                        {"s", 0.5},
                        {"geometry", {{"interval", {-1.0, 1.0}}}},
                        {"n", 32}};
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& body,
                    const std::string& name = "cfg_test.json")
      : path(fs::temp_directory_path() / name) {
    std::ofstream out(path);
    out << body;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  const ExperimentConfig c = parse_config(minimal(), ".");
  CHECK(c.kind == "solve");
  CHECK(c.dimension == 1);
  CHECK(c.lo == -1.0);
  CHECK(c.hi == 1.0);
  CHECK(c.n == 32);
  CHECK(c.flavor == Flavor::additive);
  CHECK(c.cluster_tol == 1e-6);
  CHECK(c.rank_tol == 1e-8);
  CHECK(c.h_tol == 1e-8);
  CHECK(c.spectrum_window == 12);
  CHECK(!c.cluster_start.has_value());
  CHECK(!c.a.present());
  CHECK(c.echo == minimal());
}

TEST_CASE("config errors name the offending field") {
  auto expect_message = [](nlohmann::json j, const std::string& needle) {
    try {
      parse_config(j, ".");
      FAIL_CHECK("expected ConfigError mentioning '" << needle << "'");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  auto j = minimal();
  j.erase("kind");
  expect_message(j, "kind");

  j = minimal();
  j["kind"] = "banana";
  expect_message(j, "banana");

  j = minimal();
  j["s"] = 1.5;
  expect_message(j, "'s'");

  j = minimal();
  j["geometry"] = {{"interval", {-1.0, 1.0}}, {"square", {0.0, 1.0}}};
  expect_message(j, "geometry");

  j = minimal();
  j["geometry"] = {{"interval", {1.0, -1.0}}};
  expect_message(j, "geometry");

  j = minimal();
  j["n"] = 4;
  expect_message(j, "n");

  j = minimal();
  j["surprise"] = 1;
  expect_message(j, "surprise");

  j = minimal();
  j["epsilons"] = {0.0};
  expect_message(j, "epsilons");
}

TEST_CASE("polynomial coefficient maps evaluate monomials in x and y") {
  auto j = minimal();
  j["geometry"] = {{"square", {0.0, 1.0}}};
  j["n"] = 8;
  j["a"] = {{"1", 2.0}, {"x", 1.0}, {"y^2", -1.0}, {"x*y", 0.5}};
  const ExperimentConfig c = parse_config(j, ".");
  const auto g = Grid::square(0.0, 1.0, 8);
  const ScalarField f = c.a.realize(g);
  for (std::size_t p : {std::size_t(0), std::size_t(27), std::size_t(63)}) {
    const auto xy = g->point(p);
    const double want =
        2.0 + xy[0] - xy[1] * xy[1] + 0.5 * xy[0] * xy[1];
    CHECK(f.values[p] == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("bad monomials are rejected with the key in the message") {
  auto j = minimal();
  for (const std::string key : {"z", "x^", "x**y", "x^-2", "2x"}) {
    j["a"] = {{key, 1.0}};
    CHECK_THROWS_AS(parse_config(j, "."), ConfigError);
  }
}

TEST_CASE("per-kind requirements are enforced") {
  auto j = minimal();
  j["kind"] = "coeff-split";
  CHECK_THROWS_AS(parse_config(j, "."), ConfigError);  // no b

  j["b"] = {{"x", 1.0}};
  CHECK_THROWS_AS(parse_config(j, "."), ConfigError);  // no epsilons

  j["epsilons"] = {1e-2};
  CHECK_THROWS_AS(parse_config(j, "."), ConfigError);  // needs two epsilons

  j["epsilons"] = {1e-2, 1e-3};
  CHECK(parse_config(j, ".").kind == "coeff-split");

  auto d = minimal();
  d["kind"] = "domain-split";
  d["epsilons"] = {1e-4};
  CHECK_THROWS_AS(parse_config(d, "."), ConfigError);  // no psi
  d["psi"] = {{"family", "dilation"}, {"coefficient", 1.0}};
  CHECK(parse_config(d, ".").kind == "domain-split");

  d["a"] = 0.3;  // domain experiments run on the bare operator
  CHECK_THROWS_AS(parse_config(d, "."), ConfigError);
  d.erase("a");
  d["epsilons"] = {-1e-4};
  CHECK_THROWS_AS(parse_config(d, "."), ConfigError);
}

TEST_CASE("psi specifications parse all three families") {
  auto j = minimal();
  j["kind"] = "domain-hadamard";

  j["psi"] = {{"family", "translation"}, {"vector", {1.0, 0.0}}};
  CHECK(parse_config(j, ".").psi.family == PsiFamily::translation);

  j["psi"] = {{"family", "dilation"}, {"coefficient", 2.0}};
  CHECK(parse_config(j, ".").psi.coeff == 2.0);

  j["psi"] = {{"family", "tabulated"}, {"values", {0.0, 1.0}}};
  CHECK(parse_config(j, ".").psi.values.size() == 2);

  j["psi"] = {{"family", "tabulated"}, {"values", {0.0, 1.0, 2.0}}};
  CHECK_THROWS_AS(parse_config(j, "."), ConfigError);

  j["psi"] = {{"family", "spiral"}};
  CHECK_THROWS_AS(parse_config(j, "."), ConfigError);

  // tabulated boundary fields only make sense where the boundary is two points
  j["geometry"] = {{"square", {0.0, 1.0}}};
  j["n"] = 8;
  j["psi"] = {{"family", "tabulated"}, {"values", {0.0, 1.0}}};
  CHECK_THROWS_AS(parse_config(j, "."), ConfigError);
}

TEST_CASE("tabulated coefficient files load relative to the config") {
  TempFile values("1.0 2.0 3.0 4.0\n", "cfg_field_values.txt");
  auto j = minimal();
  j["a"] = {{"file", "cfg_field_values.txt"}};
  const ExperimentConfig c =
      parse_config(j, fs::temp_directory_path().string());
  REQUIRE(c.a.kind == FieldSpec::Kind::tabulated);
  REQUIRE(c.a.values.size() == 4);
  CHECK(c.a.values[2] == 3.0);

  // node-count mismatch surfaces at realize time
  const auto g = Grid::interval(-1.0, 1.0, 32);
  CHECK_THROWS_AS(c.a.realize(g), ConfigError);

  j["a"] = {{"file", "no_such_file.txt"}};
  CHECK_THROWS_AS(parse_config(j, fs::temp_directory_path().string()), ConfigError);
}

TEST_CASE("load_config reports JSON syntax errors with a line number") {
  TempFile bad("{\n  \"kind\": \"solve\",\n  \"s\": oops\n}\n", "cfg_bad.json");
  try {
    load_config(bad.path.string());
    FAIL_CHECK("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/nothing.json"), ConfigError);
}

TEST_CASE("load_config round trips a full file") {
  TempFile good(minimal().dump(), "cfg_good.json");
  const ExperimentConfig c = load_config(good.path.string());
  CHECK(c.kind == "solve");
  CHECK(c.n == 32);
}

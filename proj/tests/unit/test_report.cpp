#include <doctest.h>

#include <string>
#include <cstdio>
#include <sstream>

#include "fracspec/report.hpp"

using namespace fracspec;

namespace {

ExperimentReport sample_report(double seconds) {
  ExperimentReport r;
  r.config_echo = {{"kind", "solve"}, {"s", 0.5}};
  r.payload["spectrum"] = json_vector({1.0, 2.5});
  r.rows.push_back({1e-2, 0, 1.25, 1.2500001, 1e-7});
  r.rows.push_back({1e-3, 1, 0.1 + 0.2, 0.3, 5.551115123125783e-17});
  r.criteria.push_back({"alpha", true, 0.5, "fine"});
  r.criteria.push_back({"beta", false, -0.25, "short by a quarter"});
  r.timings.push_back({"assemble", seconds});
  return r;
}

}  // namespace

TEST_CASE("json reports are byte-identical when timings are excluded") {
  const std::string a = report_json(sample_report(0.123), false).dump(2);
  const std::string b = report_json(sample_report(9.876), false).dump(2);
  CHECK(a == b);
  CHECK(a.find("timings") == std::string::npos);

  const std::string with = report_json(sample_report(0.5), true).dump(2);
  CHECK(with.find("timings") != std::string::npos);
}

TEST_CASE("json report carries criteria with margins and the overall verdict") {
  const nlohmann::json j = report_json(sample_report(0.1), false);
  CHECK(j["all_passed"] == false);
  REQUIRE(j["criteria"].size() == 2);
  CHECK(j["criteria"][0]["name"] == "alpha");
  CHECK(j["criteria"][0]["passed"] == true);
  CHECK(j["criteria"][0]["margin"] == 0.5);
  CHECK(j["criteria"][1]["passed"] == false);
  CHECK(j["config"]["kind"] == "solve");
}

TEST_CASE("csv rows round trip doubles exactly") {
  const std::string csv = report_csv(sample_report(0.1));
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "eps,member,predicted,measured,deviation");

  std::string line;
  std::getline(in, line);
  double eps, pred, meas, dev;
  int member;
  CHECK(std::sscanf(line.c_str(), "%lg,%d,%lg,%lg,%lg", &eps, &member, &pred, &meas,
                    &dev) == 5);
  CHECK(eps == 1e-2);
  CHECK(member == 0);
  CHECK(pred == 1.25);
  CHECK(meas == 1.2500001);
  CHECK(dev == 1e-7);

  // 17 significant digits preserve the bit pattern of 0.1 + 0.2
  std::getline(in, line);
  CHECK(std::sscanf(line.c_str(), "%lg,%d,%lg,%lg,%lg", &eps, &member, &pred, &meas,
                    &dev) == 5);
  CHECK(pred == 0.1 + 0.2);
  CHECK(pred != 0.3);
}

TEST_CASE("text report prints one graded line per criterion") {
  const std::string text = report_text(sample_report(0.1));
  CHECK(text.find("[PASS] alpha") != std::string::npos);
  CHECK(text.find("[FAIL] beta") != std::string::npos);
  CHECK(text.find("margin") != std::string::npos);
  CHECK(!sample_report(0.1).all_passed());
}

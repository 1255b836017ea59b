#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fracspec/runner.hpp"
#include "fracspec/version.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCriterionFail = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFail = 3;

std::set<std::string> parse_formats(const std::string& csv) {
  std::set<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok != "json" && tok != "csv" && tok != "text")
      throw fracspec::ConfigError("unknown output format '" + tok +
                                  "' (expected json, csv, or text)");
    out.insert(tok);
  }
  if (out.empty()) throw fracspec::ConfigError("no output format selected");
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::string& formats_csv, int threads, bool no_timings) {
  const std::set<std::string> formats = parse_formats(formats_csv);
  fracspec::ExperimentConfig cfg = fracspec::load_config(config_path);
  if (threads > 0) cfg.threads = threads;

  const fracspec::ExperimentReport rep = fracspec::run_experiment(cfg);

  std::filesystem::create_directories(out_dir);
  const std::string stem = std::filesystem::path(config_path).stem().string();
  const std::filesystem::path base = std::filesystem::path(out_dir) / stem;
  if (formats.count("json"))
    write_file(base.string() + ".report.json",
               fracspec::report_json(rep, !no_timings).dump(2) + "\n");
  if (formats.count("csv"))
    write_file(base.string() + ".report.csv", fracspec::report_csv(rep));
  if (formats.count("text"))
    write_file(base.string() + ".report.txt", fracspec::report_text(rep));

  std::cout << fracspec::report_text(rep);
  return rep.all_passed() ? kExitPass : kExitCriterionFail;
}

int validate_command(const std::string& config_path) {
  const fracspec::ExperimentConfig cfg = fracspec::load_config(config_path);
  std::cout << "ok: kind=" << cfg.kind << " s=" << cfg.s << " dim=" << cfg.dimension
            << " n=" << cfg.n << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracspec: spectral perturbation experiments for the integral "
               "fractional Laplacian"};
  app.set_version_flag("--version", std::string(fracspec::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", formats = "json,text";
  int threads = 0;
  bool no_timings = false;

  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--out", out_dir, "output directory (default .)");
  run->add_option("--format", formats, "comma list of json,csv,text");
  run->add_option("--threads", threads, "worker threads for assembly");
  run->add_flag("--no-timings", no_timings,
                "omit wall times from the JSON report so reruns are byte-identical");

  CLI::App* validate = app.add_subcommand("validate", "parse and check a config");
  validate->add_option("config", config_path, "JSON experiment config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, out_dir, formats, threads, no_timings);
    return validate_command(config_path);
  } catch (const fracspec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const fracspec::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFail;
  }
}

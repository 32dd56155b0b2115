// Command-line front end. Talks to the library only through bhgen.h.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "bhgen/bhgen.h"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_error = 2;

unsigned default_jobs() {
  if (const char* env = std::getenv("BHGEN_JOBS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
    std::fprintf(stderr, "warning: ignoring BHGEN_JOBS=%s\n", env);
  }
  return 1;
}

int report(bhg_status s) {
  if (s == BHG_OK) return exit_pass;
  std::fprintf(stderr, "error (%s): %s\n", bhg_status_name(s), bhg_last_error_message());
  return s == BHG_VERIFY_FAILED ? exit_verify_failed : exit_error;
}

using ConfigPtr = std::unique_ptr<bhg_config, decltype(&bhg_config_destroy)>;

ConfigPtr load(const std::string& path, bhg_status& s) {
  bhg_config* raw = nullptr;
  s = bhg_config_load_file(path.c_str(), &raw);
  return ConfigPtr(raw, &bhg_config_destroy);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bellman-Harris generation simulator"};
  app.require_subcommand(1);
  unsigned jobs = default_jobs();

  std::string config_path, out, figures_dir, ensemble_dir, oracle_csv;
  double dt = 0.0, scale = 1.0;
  std::uint64_t seed = 2019;

  auto* malthus = app.add_subcommand("malthus", "print calibrated constants");
  malthus->add_option("config", config_path, "run config (JSON)")->required();

  auto* ensemble = app.add_subcommand("ensemble", "simulate replicates and write CSVs");
  ensemble->add_option("config", config_path, "run config (JSON)")->required();
  ensemble->add_option("-o,--out", out, "output directory (default: config outputs)");
  ensemble->add_option("-j,--jobs", jobs, "worker threads (default: BHGEN_JOBS or 1)")
      ->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "solve the moment renewal equations");
  oracle->add_option("config", config_path, "run config (JSON)")->required();
  oracle->add_option("-o,--out", out, "oracle CSV (default: <outputs>/oracle.csv)");
  oracle->add_option("--dt", dt, "grid step in hours")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "check an ensemble against an oracle");
  verify->add_option("ensemble_dir", ensemble_dir)->required()->check(CLI::ExistingDirectory);
  verify->add_option("oracle_csv", oracle_csv)->required()->check(CLI::ExistingFile);
  verify->add_option("-o,--out", out, "verdict file (default: <ensemble_dir>/verdict.json)");

  auto* figures = app.add_subcommand("figures", "write the data behind each figure panel");
  figures->add_option("-o,--out", figures_dir, "output directory")->default_val("figures");
  figures->add_option("--scale", scale, "multiplier on replicate counts")
      ->check(CLI::PositiveNumber);
  figures->add_option("--seed", seed, "master seed");
  figures->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_pass : exit_error;
  }

  bhg_status s = BHG_OK;
  if (malthus->parsed()) {
    auto cfg = load(config_path, s);
    if (s != BHG_OK) return report(s);
    char* text = nullptr;
    s = bhg_malthus_report(cfg.get(), &text);
    if (s != BHG_OK) return report(s);
    std::fputs(text, stdout);
    bhg_string_free(text);
    return exit_pass;
  }
  if (ensemble->parsed()) {
    auto cfg = load(config_path, s);
    if (s != BHG_OK) return report(s);
    const std::string dir = out.empty() ? bhg_config_outputs(cfg.get()) : out;
    s = bhg_run_ensemble(cfg.get(), dir.c_str(), jobs);
    if (s == BHG_OK) std::printf("wrote %s\n", dir.c_str());
    return report(s);
  }
  if (oracle->parsed()) {
    auto cfg = load(config_path, s);
    if (s != BHG_OK) return report(s);
    std::string path = out;
    if (path.empty()) {
      const std::filesystem::path dir = bhg_config_outputs(cfg.get());
      std::filesystem::create_directories(dir);
      path = (dir / "oracle.csv").string();
    }
    s = bhg_run_oracle(cfg.get(), path.c_str(), dt);
    if (s == BHG_OK) std::printf("wrote %s\n", path.c_str());
    return report(s);
  }
  if (verify->parsed()) {
    const std::string path =
        out.empty() ? (std::filesystem::path(ensemble_dir) / "verdict.json").string() : out;
    char* verdict = nullptr;
    s = bhg_run_verify(ensemble_dir.c_str(), oracle_csv.c_str(), path.c_str(), &verdict);
    if (verdict) {
      std::fputs(verdict, stdout);
      bhg_string_free(verdict);
    }
    return report(s);
  }
  if (figures->parsed()) {
    s = bhg_run_figures(figures_dir.c_str(), scale, seed, jobs);
    if (s == BHG_OK) std::printf("wrote %s\n", figures_dir.c_str());
    return report(s);
  }
  return exit_error;
}

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bgk/checks.hpp"
#include "bgk/experiment.hpp"

namespace {

int run_command(const std::map<std::string, std::string>& flags, const std::string& config_path) {
  std::map<std::string, std::string> entries;
  if (!config_path.empty()) entries = bgk::read_config_file(config_path);
  for (const auto& [key, value] : flags) entries[key] = value;
  const bgk::RunConfig config = bgk::load_config(entries);

  const bgk::RunResult result = bgk::run_experiment(config);
  Eigen::Index max_rank = 0;
  for (const auto& r : result.records) max_rank = std::max(max_rank, r.rank);
  const auto& last = result.records.back();
  std::printf("%s %s: %ld steps, dt=%.6g, t=%.6g, %.2f s, max rank %ld\n", config.preset.c_str(),
              bgk::scheme_name(config.scheme).c_str(), result.steps, result.dt, last.t,
              result.wall_seconds, static_cast<long>(max_rank));
  std::printf("  h_norm_sq %.12g -> %.12g, kappa in [%.15g, %.15g]\n",
              result.records.front().h_norm_sq, last.h_norm_sq, last.kappa_minus,
              last.kappa_plus);
  if (!config.output_dir.empty()) std::printf("  outputs in %s\n", config.output_dir.c_str());
  if (result.status != 0) std::fprintf(stderr, "run aborted: %s\n", result.error.c_str());
  return result.status;
}

int check_command(std::uint64_t seed) {
  bool ok = true;
  for (const auto& r : bgk::run_check_suite(seed)) {
    std::printf("%s  %-40s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable low-rank solver for the linear BGK equation"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a preset experiment");
  std::map<std::string, std::string> flags;
  std::string config_path;
  std::string preset, scheme, nx, nv, sigma, cfl, tend, theta, rmax, out, seed, snapshots, r0;
  run->add_option("--config", config_path, "key = value file; flags override it")
      ->check(CLI::ExistingFile);
  run->add_option("--preset", preset, "plane1d[-small], plane2d[-small], beam2d[-small], custom");
  run->add_option("--scheme", scheme, "full_stable, full_naive, dlra_2r, dlra_4r");
  run->add_option("--nx", nx, "spatial points per axis");
  run->add_option("--nv", nv, "velocity points per axis");
  run->add_option("--sigma", sigma, "collision frequency");
  run->add_option("--cfl", cfl, "CFL number");
  run->add_option("--tend", tend, "final time");
  run->add_option("--theta", theta, "truncation tolerance relative to the largest singular value");
  run->add_option("--rmax", rmax, "maximal rank");
  run->add_option("--r0", r0, "initial rank");
  run->add_option("--out", out, "output directory");
  run->add_option("--seed", seed, "random seed");
  run->add_option("--snapshots", snapshots, "comma separated snapshot times");

  auto* check = app.add_subcommand("check", "Run the numerical property suite");
  std::uint64_t check_seed = 2024;
  check->add_option("--seed", check_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const std::pair<const char*, const std::string*> named[] = {
          {"preset", &preset}, {"scheme", &scheme}, {"nx", &nx},       {"nv", &nv},
          {"sigma", &sigma},   {"cfl", &cfl},       {"tend", &tend},   {"theta", &theta},
          {"rmax", &rmax},     {"r0", &r0},         {"out", &out},     {"seed", &seed},
          {"snapshots", &snapshots}};
      for (const auto& [key, value] : named)
        if (run->count("--" + std::string(key)) > 0) flags[key] = *value;
      return run_command(flags, config_path);
    }
    return check_command(check_seed);
  } catch (const bgk::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

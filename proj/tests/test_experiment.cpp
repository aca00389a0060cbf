#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bgk/csv_io.hpp"
#include "bgk/experiment.hpp"

using namespace bgk;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bgk_exp_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig tiny_custom(const std::string& scheme) {
  return load_config({{"preset", "custom"}, {"scheme", scheme}, {"nx", "24"}, {"nv", "12"},
                      {"tend", "0.25"}, {"snapshots", "0,0.1,0.25"}, {"r0", "4"}, {"seed", "7"}});
}

}  // namespace

TEST_CASE("preset defaults") {
  const RunConfig p = preset_config("plane1d");
  CHECK(p.n_x == 1000);
  CHECK(p.n_v == 500);
  CHECK(p.sigma == 10.0);
  CHECK(p.t_end == 8.0);
  CHECK(p.r_max == 200);
  CHECK(p.dim() == 1);
  const RunConfig b = preset_config("beam2d-small");
  CHECK(b.dim() == 2);
  CHECK(b.sigma == 1.5);
  CHECK(b.theta_coeff == 1e-4);
  CHECK(b.r_max == 100);
  for (const auto& name : preset_names()) CHECK_NOTHROW(validate(preset_config(name)));
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
}

TEST_CASE("config overrides and validation") {
  const RunConfig c = load_config({{"preset", "plane2d-small"}, {"nx", "32"}, {"sigma", "0.5"},
                                   {"snapshots", "0,1.5"}, {"scheme", "dlra_4r"}});
  CHECK(c.n_x == 32);
  CHECK(c.n_v == 16);
  CHECK(c.sigma == 0.5);
  CHECK(c.scheme == Scheme::Dlra4r);
  CHECK(c.snapshot_times == std::vector<double>{0.0, 1.5});

  CHECK_THROWS_WITH_AS(load_config({{"preset", "plane1d"}, {"cfl", "1.5"}}),
                       doctest::Contains("cfl"), ConfigError);
  CHECK_NOTHROW(load_config({{"preset", "plane1d"}, {"cfl", "1.5"}, {"scheme", "full_naive"}}));
  CHECK_THROWS_WITH_AS(load_config({{"preset", "plane1d"}, {"colour", "red"}}),
                       doctest::Contains("colour"), ConfigError);
  CHECK_THROWS_AS(load_config({{"nx", "2"}}), ConfigError);
  CHECK_THROWS_AS(load_config({{"nx", "ten"}}), ConfigError);
  CHECK_THROWS_AS(load_config({{"scheme", "rk4"}}), ConfigError);
  CHECK_THROWS_AS(load_config({{"r0", "300"}}), ConfigError);
  CHECK_THROWS_AS(load_config({{"snapshots", "0,9"}}), ConfigError);
  CHECK_THROWS_AS(load_config({{"tend", "3"}, {"snapshots", "0,4"}}), ConfigError);
  CHECK(load_config({{"tend", "3"}}).snapshot_times == std::vector<double>{0.0, 2.0});
  CHECK_THROWS_AS(load_config({{"sigma", "-1"}}), ConfigError);
}

TEST_CASE("config file parsing") {
  const auto dir = scratch_dir("cfg");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "# a comment\npreset = beam2d-small\n\nnx=48   # inline\n theta = 1e-3\n";
  }
  const auto entries = read_config_file(dir / "run.cfg");
  CHECK(entries.at("preset") == "beam2d-small");
  CHECK(entries.at("nx") == "48");
  const RunConfig c = load_config(entries);
  CHECK(c.n_x == 48);
  CHECK(c.theta_coeff == 1e-3);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "preset beam2d\n";
  }
  CHECK_THROWS_AS(read_config_file(dir / "bad.cfg"), ConfigError);
  CHECK_THROWS(read_config_file(dir / "missing.cfg"));
}

TEST_CASE("initial data") {
  SUBCASE("beam profile is normalized") {
    const RunConfig c = preset_config("beam2d-small");
    const PhaseSpace ps = build_phase_space(c);
    const InitialData d = initial_data(c, ps);
    const double moment = ps.velocity.maxwell_norm * d.g_profile.dot(ps.velocity.w_half);
    CHECK(moment == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.rho.minCoeff() > 0.0);
  }
  SUBCASE("plane source") {
    const RunConfig c = preset_config("plane1d-small");
    const PhaseSpace ps = build_phase_space(c);
    const InitialData d = initial_data(c, ps);
    CHECK(d.rho.minCoeff() >= 1e-4);
    CHECK(d.rho.maxCoeff() == doctest::Approx(1.0 / std::sqrt(2 * M_PI * 0.09)).epsilon(1e-3));
    CHECK((d.g_profile.array() == 1.0).all());
  }
}

TEST_CASE("custom preset runs with every scheme") {
  for (const char* scheme : {"full_stable", "full_naive", "dlra_2r", "dlra_4r"}) {
    CAPTURE(scheme);
    RunConfig c = tiny_custom(scheme);
    c.output_dir = scratch_dir(std::string("custom_") + scheme);
    const RunResult r = run_experiment(c);
    CHECK(r.status == 0);
    CHECK(r.records.back().t == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.rho_snapshots.size() == 3);
    CHECK(std::filesystem::exists(c.output_dir / "diagnostics.csv"));
    CHECK(std::filesystem::exists(c.output_dir / "rho_t0.1.csv"));
    CHECK(std::filesystem::exists(c.output_dir / "f_t0.25.csv"));
    const auto manifest = nlohmann::json::parse(slurp(c.output_dir / "manifest.json"));
    CHECK(manifest.at("steps").get<long>() == r.steps);
    CHECK(manifest.at("status") == "ok");
    const auto rec = read_csv(c.output_dir / "diagnostics.csv");
    CHECK(rec.size() == r.records.size());
  }
}

TEST_CASE("runs are deterministic") {
  RunConfig a = tiny_custom("dlra_2r");
  RunConfig b = a;
  a.output_dir = scratch_dir("det_a");
  b.output_dir = scratch_dir("det_b");
  run_experiment(a);
  run_experiment(b);
  CHECK(slurp(a.output_dir / "diagnostics.csv") == slurp(b.output_dir / "diagnostics.csv"));
  CHECK(slurp(a.output_dir / "rho_t0.25.csv") == slurp(b.output_dir / "rho_t0.25.csv"));
}

TEST_CASE("positivity failure aborts with partial outputs") {
  RunConfig c = load_config({{"preset", "custom"}, {"scheme", "full_naive"}, {"nx", "24"},
                             {"nv", "12"}, {"cfl", "25"}, {"seed", "3"}});
  c.output_dir = scratch_dir("abort");
  const RunResult r = run_experiment(c);
  CHECK(r.status != 0);
  CHECK(r.error.find("rho") != std::string::npos);
  CHECK(std::filesystem::exists(c.output_dir / "diagnostics.csv"));
  const auto manifest = nlohmann::json::parse(slurp(c.output_dir / "manifest.json"));
  CHECK(manifest.at("status") == "aborted");
  CHECK(manifest.at("t_reached").get<double>() < c.t_end);
}

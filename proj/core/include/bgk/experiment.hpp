#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bgk/diagnostics.hpp"
#include "bgk/phase_space.hpp"

namespace bgk {

enum class Problem { PlaneSource1D, PlaneSource2D, Beam2D, Custom };

enum class Scheme { FullStable, FullNaive, Dlra2r, Dlra4r };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved run parameters. Sizes (n_x, n_v) are per axis.
struct RunConfig {
  std::string preset = "plane1d";
  Problem problem = Problem::PlaneSource1D;
  Scheme scheme = Scheme::Dlra2r;
  int n_x = 1000;
  int n_v = 500;
  double sigma = 10.0;
  double cfl = 0.99;
  bool round_up_vcap = true;
  double t_end = 8.0;
  int r0 = 20;
  double theta_coeff = 1e-5;
  int r_max = 200;
  std::vector<double> snapshot_times{0.0, 2.0, 4.0, 6.0};
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;

  int dim() const { return problem == Problem::PlaneSource1D || problem == Problem::Custom ? 1 : 2; }
};

/// Names accepted by `preset`.
std::vector<std::string> preset_names();
std::string scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

/// Preset defaults with no overrides applied.
RunConfig preset_config(const std::string& name);

/// Resolves a flat key/value set (config file entries and CLI flags share the
/// keys preset, scheme, nx, nv, sigma, cfl, round_up_vcap, tend, r0, theta,
/// rmax, out, seed, snapshots). The preset is applied first, other keys
/// override it. Unknown keys and invalid values raise ConfigError.
RunConfig load_config(const std::map<std::string, std::string>& entries);

/// Reads "key = value" lines ('#' starts a comment) into a key/value map.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

void validate(const RunConfig& config);

PhaseSpace build_phase_space(const RunConfig& config);

/// Initial density and initial g. Preset g's do not depend on x and are
/// stored as a single velocity profile; the custom problem carries a dense g.
struct InitialData {
  Eigen::VectorXd rho;
  Eigen::VectorXd g_profile;
  Eigen::MatrixXd g_dense;

  Eigen::MatrixXd dense_g() const;
};

InitialData initial_data(const RunConfig& config, const PhaseSpace& ps);

struct RunResult {
  int status = 0;  // 0 ok, nonzero on abort
  std::string error;
  double wall_seconds = 0.0;
  double dt = 0.0;
  long steps = 0;
  std::vector<DiagRecord> records;
  std::map<double, Eigen::VectorXd> rho_snapshots;
};

/// Steps the configured scheme from 0 to t_end and, if output_dir is set,
/// writes diagnostics.csv, rho/f snapshots, and manifest.json there.
/// Steps are shortened to land exactly on snapshot times and on t_end.
RunResult run_experiment(const RunConfig& config);

}  // namespace bgk

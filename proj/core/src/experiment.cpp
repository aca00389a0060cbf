#include "bgk/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "bgk/csv_io.hpp"
#include "bgk/dlra_solver.hpp"
#include "bgk/full_solver.hpp"
#include "bgk/parallel.hpp"
#include "bgk/random_state.hpp"

namespace bgk {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a real number, got '" + value + "'");
  }
}

long long parse_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_times(const std::string& key, const std::string& value) {
  std::vector<double> times;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) times.push_back(parse_real(key, item));
  }
  return times;
}

std::string snapshot_label(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

// Plane-source style density (1/4pi) max(floor, A/(4 pi s^2) exp(-|x|^2/(4 s^2))).
Eigen::VectorXd gaussian_density_2d(const PhaseSpace& ps, double s, double amplitude,
                                    double floor) {
  const auto& x1 = ps.space[0].points;
  const auto& x2 = ps.space[1].points;
  Eigen::VectorXd rho(ps.n_space());
  for (Eigen::Index j = 0; j < x2.size(); ++j)
    for (Eigen::Index i = 0; i < x1.size(); ++i) {
      const double r2 = x1(i) * x1(i) + x2(j) * x2(j);
      const double bump = amplitude / (4.0 * kPi * s * s) * std::exp(-r2 / (4.0 * s * s));
      rho(i + x1.size() * j) = std::max(floor, bump) / (4.0 * kPi);
    }
  return rho;
}

// Beam profile exp(-|v - v_beam|^2/(4 s^2)) rescaled to
// c_M sum_k g_k w_half_k = 1, evaluated in log space.
Eigen::VectorXd beam_profile(const VelocityGrid& vg, double s, double vb1, double vb2) {
  const Eigen::Index n = vg.size();
  Eigen::VectorXd a(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d1 = vg.components[0](k) - vb1;
    const double d2 = vg.components[1](k) - vb2;
    a(k) = -(d1 * d1 + d2 * d2) / (4.0 * s * s);
  }
  const double a_max = a.maxCoeff();
  Eigen::VectorXd g = (a.array() - a_max).exp().matrix();
  const double moment = vg.maxwell_norm * g.dot(vg.w_half);
  return g / moment;
}

// Rank-`rank` factors of g = 1 profile^T (at least rank 2). X holds the
// constant vector and V holds both the moment direction w_half and the
// profile, padded with seeded normal columns and orthonormalized.
LowRankState low_rank_from_profile(const Eigen::VectorXd& rho, const Eigen::VectorXd& profile,
                                   const VelocityGrid& velocity, Eigen::Index rank,
                                   std::uint64_t seed) {
  const Eigen::Index n_x = rho.size();
  const Eigen::Index n_v = profile.size();
  rank = std::min({std::max<Eigen::Index>(rank, 2), n_x, n_v});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto padded = [&](std::initializer_list<Eigen::VectorXd> lead, Eigen::Index rows) {
    Eigen::MatrixXd m(rows, rank);
    Eigen::Index c = 0;
    for (const auto& col : lead) m.col(c++) = col;
    for (; c < rank; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
    return orthonormalize(m).q;
  };
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n_x);
  LowRankState st;
  st.x_basis = padded({ones}, n_x);
  st.v_basis = padded({velocity.w_half, profile}, n_v);
  st.s_core = (st.x_basis.transpose() * ones) * (st.v_basis.transpose() * profile).transpose();
  st.rho = rho;
  return st;
}

// Dense g cut to at most `rank` by the conservative truncation.
LowRankState conservative_low_rank(const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                                   const VelocityGrid& velocity, Eigen::Index rank) {
  const TruncationResult tr = truncate_conservative(
      Eigen::MatrixXd::Identity(g.rows(), g.rows()), g,
      Eigen::MatrixXd::Identity(g.cols(), g.cols()), velocity, {0.0, rank, true});
  LowRankState st;
  st.x_basis = tr.factors.x;
  st.s_core = tr.factors.s;
  st.v_basis = tr.factors.v;
  st.rho = rho;
  return st;
}

struct Output {
  std::filesystem::path dir;
  bool enabled() const { return !dir.empty(); }
};

void write_snapshot(const Output& out, const PhaseSpace& ps, double t, const Eigen::VectorXd& rho,
                    const Eigen::MatrixXd* g) {
  if (!out.enabled()) return;
  const std::string label = snapshot_label(t);
  write_rho_snapshot(out.dir / ("rho_t" + label + ".csv"), ps, rho);
  if (ps.dim() == 1 && g != nullptr)
    write_f_snapshot(out.dir / ("f_t" + label + ".csv"), ps, reconstruct_f(rho, *g, ps.velocity));
}

nlohmann::json config_json(const RunConfig& c) {
  return {{"preset", c.preset},
          {"scheme", scheme_name(c.scheme)},
          {"nx", c.n_x},
          {"nv", c.n_v},
          {"sigma", c.sigma},
          {"cfl", c.cfl},
          {"round_up_vcap", c.round_up_vcap},
          {"tend", c.t_end},
          {"r0", c.r0},
          {"theta", c.theta_coeff},
          {"rmax", c.r_max},
          {"snapshots", c.snapshot_times},
          {"out", c.output_dir.string()},
          {"seed", c.seed}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"plane1d", "plane1d-small", "plane2d", "plane2d-small", "beam2d", "beam2d-small",
          "custom"};
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::FullStable: return "full_stable";
    case Scheme::FullNaive: return "full_naive";
    case Scheme::Dlra2r: return "dlra_2r";
    case Scheme::Dlra4r: return "dlra_4r";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::FullStable, Scheme::FullNaive, Scheme::Dlra2r, Scheme::Dlra4r})
    if (scheme_name(s) == name) return s;
  throw ConfigError("key 'scheme': unknown scheme '" + name +
                    "' (expected full_stable, full_naive, dlra_2r, dlra_4r)");
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "plane1d" || name == "plane1d-small") {
    c.problem = Problem::PlaneSource1D;
    if (name == "plane1d-small") {
      c.n_x = 400;
      c.n_v = 128;
    }
  } else if (name == "plane2d" || name == "plane2d-small") {
    c.problem = Problem::PlaneSource2D;
    c.n_x = name == "plane2d" ? 128 : 64;
    c.n_v = name == "plane2d" ? 32 : 16;
    c.sigma = 100.0;
    c.cfl = 0.7;
    c.t_end = 3.0;
    c.snapshot_times = {0.0, 1.0, 2.0, 3.0};
  } else if (name == "beam2d" || name == "beam2d-small") {
    c.problem = Problem::Beam2D;
    c.n_x = name == "beam2d" ? 128 : 64;
    c.n_v = name == "beam2d" ? 32 : 16;
    c.sigma = 1.5;
    c.cfl = 0.7;
    c.t_end = 3.0;
    c.theta_coeff = 1e-4;
    c.r_max = name == "beam2d" ? 200 : 100;
    c.snapshot_times = {0.0, 1.0, 2.0, 3.0};
  } else if (name == "custom") {
    c.problem = Problem::Custom;
    c.n_x = 64;
    c.n_v = 32;
    c.sigma = 1.0;
    c.round_up_vcap = false;
    c.t_end = 1.0;
    c.r0 = 8;
    c.theta_coeff = 1e-8;
    c.r_max = 32;
    c.snapshot_times = {0.0, 1.0};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("key 'preset': unknown preset '" + name + "' (expected one of " + known +
                      ")");
  }
  return c;
}

RunConfig load_config(const std::map<std::string, std::string>& entries) {
  static const std::vector<std::string> known = {"preset", "scheme", "nx",    "nv",   "sigma",
                                                 "cfl",    "round_up_vcap",   "tend", "r0",
                                                 "theta",  "rmax",   "out",   "seed", "snapshots"};
  for (const auto& [key, value] : entries)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "'");

  const auto preset = entries.find("preset");
  RunConfig c = preset_config(preset == entries.end() ? "plane1d" : preset->second);
  auto positive_int = [](const std::string& key, const std::string& value) {
    const long long x = parse_integer(key, value);
    if (x <= 0) throw ConfigError("key '" + key + "': must be positive, got " + value);
    return static_cast<int>(x);
  };
  for (const auto& [key, value] : entries) {
    if (key == "scheme") c.scheme = parse_scheme(value);
    else if (key == "nx") c.n_x = positive_int(key, value);
    else if (key == "nv") c.n_v = positive_int(key, value);
    else if (key == "sigma") c.sigma = parse_real(key, value);
    else if (key == "cfl") c.cfl = parse_real(key, value);
    else if (key == "round_up_vcap") c.round_up_vcap = parse_flag(key, value);
    else if (key == "tend") c.t_end = parse_real(key, value);
    else if (key == "r0") c.r0 = positive_int(key, value);
    else if (key == "theta") c.theta_coeff = parse_real(key, value);
    else if (key == "rmax") c.r_max = positive_int(key, value);
    else if (key == "out") c.output_dir = value;
    else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("key 'seed': must be non-negative, got " + value);
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "snapshots") c.snapshot_times = parse_times(key, value);
  }
  // Preset snapshot times past an overridden end time are dropped.
  if (!entries.count("snapshots"))
    std::erase_if(c.snapshot_times, [&](double t) { return t > c.t_end; });
  validate(c);
  return c;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value, got '" + line + "'");
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

void validate(const RunConfig& c) {
  if (c.n_x < 3) throw ConfigError("key 'nx': need at least 3 points, got " + std::to_string(c.n_x));
  if (c.n_v < 1) throw ConfigError("key 'nv': must be positive");
  if (!(c.sigma >= 0.0)) throw ConfigError("key 'sigma': must be non-negative");
  if (!(c.cfl > 0.0)) throw ConfigError("key 'cfl': must be positive");
  if (c.cfl > 1.0 && c.scheme != Scheme::FullNaive)
    throw ConfigError("key 'cfl': " + format_real(c.cfl) + " violates the CFL bound max|v| dt <= dx (cfl <= 1) required for stability of " + scheme_name(c.scheme));
  if (!(c.t_end > 0.0)) throw ConfigError("key 'tend': must be positive");
  if (!(c.theta_coeff >= 0.0)) throw ConfigError("key 'theta': must be non-negative");
  if (c.r0 > c.r_max)
    throw ConfigError("key 'r0': initial rank " + std::to_string(c.r0) + " exceeds rmax " +
                      std::to_string(c.r_max));
  for (double t : c.snapshot_times)
    if (!(t >= 0.0 && t <= c.t_end))
      throw ConfigError("key 'snapshots': time " + format_real(t) + " outside [0, tend]");
}

PhaseSpace build_phase_space(const RunConfig& c) {
  switch (c.problem) {
    case Problem::PlaneSource1D:
      return make_phase_space_1d(SpatialGrid::uniform(-10.0, 10.0, c.n_x),
                                 gauss_hermite_rule(c.n_v));
    case Problem::Custom:
      return make_phase_space_1d(SpatialGrid::uniform(-1.0, 1.0, c.n_x),
                                 gauss_hermite_rule(c.n_v));
    case Problem::PlaneSource2D: {
      const auto g = SpatialGrid::uniform(-3.0, 3.0, c.n_x);
      return make_phase_space_2d(g, g, c.n_v, c.n_v);
    }
    case Problem::Beam2D: {
      const auto g = SpatialGrid::uniform(-5.0, 5.0, c.n_x);
      return make_phase_space_2d(g, g, c.n_v, c.n_v);
    }
  }
  throw ConfigError("unknown problem");
}

Eigen::MatrixXd InitialData::dense_g() const {
  if (g_dense.size() > 0) return g_dense;
  return Eigen::VectorXd::Ones(rho.size()) * g_profile.transpose();
}

InitialData initial_data(const RunConfig& c, const PhaseSpace& ps) {
  InitialData d;
  switch (c.problem) {
    case Problem::PlaneSource1D: {
      const double s = 0.3;
      const auto& x = ps.space[0].points;
      d.rho = x.unaryExpr([s](double xi) {
        return std::max(1e-4, std::exp(-xi * xi / (2 * s * s)) / std::sqrt(2 * kPi * s * s));
      });
      d.g_profile = Eigen::VectorXd::Ones(ps.n_velocity());
      break;
    }
    case Problem::PlaneSource2D:
      d.rho = gaussian_density_2d(ps, 0.3, 100.0, 0.1);
      d.g_profile = Eigen::VectorXd::Ones(ps.n_velocity());
      break;
    case Problem::Beam2D:
      d.rho = gaussian_density_2d(ps, 0.01, 100.0, 0.1);
      d.g_profile = beam_profile(ps.velocity, 0.01, -1.0, -1.0);
      break;
    case Problem::Custom: {
      std::mt19937_64 rng(c.seed);
      FullState s = random_normalized_state(ps, rng);
      d.rho = std::move(s.rho);
      d.g_dense = std::move(s.g);
      break;
    }
  }
  return d;
}

RunResult run_experiment(const RunConfig& config) {
  validate(config);
  apply_thread_budget();
  RunResult result;
  const PhaseSpace ps = build_phase_space(config);
  const InitialData init = initial_data(config, ps);
  const Output out{config.output_dir};
  if (out.enabled()) std::filesystem::create_directories(out.dir);

  result.dt = config.scheme == Scheme::FullNaive
                  ? cfl_timestep_unchecked(ps.min_dx(), ps.velocity.v_cap, config.cfl,
                                           config.round_up_vcap)
                  : cfl_timestep(ps.min_dx(), ps.velocity.v_cap, config.cfl, config.round_up_vcap);

  const bool low_rank = config.scheme == Scheme::Dlra2r || config.scheme == Scheme::Dlra4r;
  std::variant<FullState, LowRankState> state;
  if (low_rank) {
    LowRankState lr = init.g_dense.size() > 0
                          ? conservative_low_rank(init.rho, init.g_dense, ps.velocity, config.r0)
                          : low_rank_from_profile(init.rho, init.g_profile, ps.velocity,
                                                  config.r0, config.seed);
    state = std::move(lr);
  } else {
    state = FullState{init.rho, init.dense_g(), 0.0};
  }
  const TruncationPolicy policy{config.theta_coeff, config.r_max, true};
  const AugmentationMode mode =
      config.scheme == Scheme::Dlra4r ? AugmentationMode::BasisAug4r : AugmentationMode::Reduced2r;
  const SchemeVariant variant = config.scheme == Scheme::FullNaive
                                    ? SchemeVariant::NaiveAdvection
                                    : SchemeVariant::StableConservative;

  std::vector<double> stops = config.snapshot_times;
  stops.push_back(config.t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  auto is_snapshot = [&](double t) {
    return std::find(config.snapshot_times.begin(), config.snapshot_times.end(), t) !=
           config.snapshot_times.end();
  };

  auto record = [&] {
    return std::visit([&](const auto& s) { return make_record(ps, s); }, state);
  };
  auto snapshot = [&](double t) {
    if (!out.enabled()) return;
    if (const auto* fs = std::get_if<FullState>(&state)) {
      write_snapshot(out, ps, t, fs->rho, &fs->g);
    } else {
      const auto& lr = std::get<LowRankState>(state);
      if (ps.dim() == 1) {
        const Eigen::MatrixXd g = lr.g();
        write_snapshot(out, ps, t, lr.rho, &g);
      } else {
        write_snapshot(out, ps, t, lr.rho, nullptr);
      }
    }
  };
  auto current_rho = [&]() -> const Eigen::VectorXd& {
    return std::visit([](const auto& s) -> const Eigen::VectorXd& { return s.rho; }, state);
  };

  double t = 0.0;
  double stepping_seconds = 0.0;
  result.records.push_back(record());
  if (is_snapshot(0.0)) {
    result.rho_snapshots[0.0] = current_rho();
    snapshot(0.0);
  }

  try {
    for (double stop : stops) {
      while (t < stop) {
        const auto tick = std::chrono::steady_clock::now();
        double h = result.dt;
        double t_next = t + h;
        if (t_next >= stop || stop - t_next < 1e-9 * result.dt) {
          h = stop - t;
          t_next = stop;
        }
        if (auto* fs = std::get_if<FullState>(&state)) {
          FullState next = full_step(ps, *fs, variant, config.sigma, h);
          next.t = t_next;
          *fs = std::move(next);
        } else {
          auto& lr = std::get<LowRankState>(state);
          LowRankState next = dlra_step(ps, lr, config.sigma, h, mode, policy);
          next.t = t_next;
          lr = std::move(next);
        }
        t = t_next;
        ++result.steps;
        result.records.push_back(record());
        stepping_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
      }
      if (stop > 0.0 && is_snapshot(stop)) {
        result.rho_snapshots[stop] = current_rho();
        snapshot(stop);
      }
    }
  } catch (const PositivityError& e) {
    result.status = 2;
    result.error = e.what();
  }
  result.wall_seconds = stepping_seconds;

  if (out.enabled()) {
    write_csv(out.dir / "diagnostics.csv", result.records);
    Eigen::Index max_rank = 0;
    for (const auto& r : result.records) max_rank = std::max(max_rank, r.rank);
    nlohmann::json manifest = {{"config", config_json(config)},
                               {"dt", result.dt},
                               {"steps", result.steps},
                               {"t_reached", t},
                               {"wall_seconds", result.wall_seconds},
                               {"threads", thread_budget()},
                               {"max_rank", max_rank},
                               {"status", result.status == 0 ? "ok" : "aborted"},
                               {"error", result.error}};
    std::ofstream mf(out.dir / "manifest.json");
    if (!mf) throw IoError("cannot write " + (out.dir / "manifest.json").string());
    mf << manifest.dump(2) << '\n';
  }
  return result;
}

}  // namespace bgk

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bgk/diagnostics.hpp"
#include "bgk/phase_space.hpp"

namespace bgk {

/// Thrown for any failed read or write; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kDiagnosticsHeader = "t,rank,h_norm_sq,kappa_plus,kappa_minus,mass";

/// Formats a double with 17 significant digits (round-trips exactly).
std::string format_real(double value);

void write_csv(const std::filesystem::path& path, const std::vector<DiagRecord>& records);
std::vector<DiagRecord> read_csv(const std::filesystem::path& path);

/// Density snapshot: "x,rho" rows in 1D; in 2D a "# n_x1=..,n_x2=..,x1=[a,b],x2=[a,b]"
/// header followed by n_x1 rows of n_x2 values (rho(x1_i, x2_j)).
void write_rho_snapshot(const std::filesystem::path& path, const PhaseSpace& ps,
                        const Eigen::VectorXd& rho);

/// 1D distribution snapshot: header "x,<v_1>,...,<v_n>", then one row per x_j.
void write_f_snapshot(const std::filesystem::path& path, const PhaseSpace& ps,
                      const Eigen::MatrixXd& f);

/// Parses a dense numeric CSV, skipping '#' lines and a non-numeric header.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace bgk

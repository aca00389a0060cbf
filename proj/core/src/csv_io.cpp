#include "bgk/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bgk {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

bool parse_real(const std::string& text, double& value) {
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<DiagRecord>& records) {
  std::ofstream out = open_out(path);
  out << kDiagnosticsHeader << '\n';
  for (const DiagRecord& r : records) {
    out << format_real(r.t) << ',' << r.rank << ',' << format_real(r.h_norm_sq) << ','
        << format_real(r.kappa_plus) << ',' << format_real(r.kappa_minus) << ','
        << format_real(r.mass) << '\n';
  }
  out.flush();
  check_written(out, path);
}

std::vector<DiagRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader)
    throw IoError("'" + path.string() + "': missing diagnostics header");
  std::vector<DiagRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    double values[6];
    bool ok = cells.size() == 6;
    for (std::size_t i = 0; ok && i < 6; ++i) ok = parse_real(cells[i], values[i]);
    if (!ok) throw IoError("'" + path.string() + "': malformed row at line " + std::to_string(lineno));
    records.push_back({values[0], static_cast<Eigen::Index>(values[1]), values[2], values[3],
                       values[4], values[5]});
  }
  return records;
}

void write_rho_snapshot(const std::filesystem::path& path, const PhaseSpace& ps,
                        const Eigen::VectorXd& rho) {
  std::ofstream out = open_out(path);
  if (ps.dim() == 1) {
    out << "x,rho\n";
    const Eigen::VectorXd& x = ps.space[0].points;
    for (Eigen::Index j = 0; j < rho.size(); ++j)
      out << format_real(x(j)) << ',' << format_real(rho(j)) << '\n';
  } else {
    const SpatialGrid& g1 = ps.space[0];
    const SpatialGrid& g2 = ps.space[1];
    out << "# n_x1=" << g1.n_x << ",n_x2=" << g2.n_x << ",x1=[" << format_real(g1.a) << ','
        << format_real(g1.b) << "],x2=[" << format_real(g2.a) << ',' << format_real(g2.b)
        << "]\n";
    for (int i = 0; i < g1.n_x; ++i) {
      for (int j = 0; j < g2.n_x; ++j) {
        if (j) out << ',';
        out << format_real(rho(i + static_cast<Eigen::Index>(g1.n_x) * j));
      }
      out << '\n';
    }
  }
  out.flush();
  check_written(out, path);
}

void write_f_snapshot(const std::filesystem::path& path, const PhaseSpace& ps,
                      const Eigen::MatrixXd& f) {
  if (ps.dim() != 1) throw std::invalid_argument("write_f_snapshot: 1D phase space only");
  std::ofstream out = open_out(path);
  const Eigen::VectorXd& v = ps.velocity.nodes();
  out << 'x';
  for (Eigen::Index k = 0; k < v.size(); ++k) out << ',' << format_real(v(k));
  out << '\n';
  const Eigen::VectorXd& x = ps.space[0].points;
  for (Eigen::Index j = 0; j < f.rows(); ++j) {
    out << format_real(x(j));
    for (Eigen::Index k = 0; k < f.cols(); ++k) out << ',' << format_real(f(j, k));
    out << '\n';
  }
  out.flush();
  check_written(out, path);
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; numeric && i < cells.size(); ++i) numeric = parse_real(cells[i], row[i]);
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw IoError("'" + path.string() + "': non-numeric row");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("'" + path.string() + "': ragged rows");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace bgk

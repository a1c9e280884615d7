#include "tumorctl/io.hpp"

#include "tumorctl/config.hpp"

#include <fmt/format.h>

#include <sstream>

namespace tumorctl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

void write_matrix(const std::filesystem::path& path, const Field& f) {
  auto out = open_out(path);
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      if (i) out << ' ';
      out << format_number(f(i, j));
    }
    out << '\n';
  }
}

Field read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("matrix file " + path.string() + " is empty");
  Field f(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
  for (int j = 0; j < f.ny; ++j) {
    if (static_cast<int>(rows[j].size()) != f.nx) {
      throw ConfigError("matrix file " + path.string() + ": ragged row " + std::to_string(j + 1));
    }
    for (int i = 0; i < f.nx; ++i) f(i, j) = rows[j][i];
  }
  return f;
}

void write_vtk(const std::filesystem::path& path, const Field& f, const Grid& grid, const std::string& name,
               double time) {
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << name << " t=" << format_number(time) << " day\n";
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << f.nx << ' ' << f.ny << " 1\n";
  out << "ORIGIN " << format_number(grid.x(0)) << ' ' << format_number(grid.y(0)) << " 0\n";
  out << "SPACING " << format_number(grid.hx()) << ' ' << format_number(grid.hy()) << " 1\n";
  out << "POINT_DATA " << f.values.size() << '\n';
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index c = 0; c < f.values.size(); ++c) out << format_number(f.values[c]) << '\n';
}

void write_s_csv(const std::filesystem::path& path, const TimeSeries& s, const ModelParams& p,
                 const TimeMesh& mesh) {
  check_length(s, mesh);
  auto out = open_out(path);
  out << "t_day,s,s_minus,s_plus,s_c\n";
  for (int n = 0; n <= mesh.steps(); ++n) {
    out << format_number(mesh.time(n)) << ',' << format_number(s.values[n]) << ',' << format_number(p.s_minus)
        << ',' << format_number(p.s_plus) << ',' << format_number(p.s_m) << '\n';
  }
}

void write_u_csv(const std::filesystem::path& path, const ControlVector& u, const TimeMesh& mesh,
                 const std::string& column) {
  check_length(u, mesh);
  auto out = open_out(path);
  out << "t_start_day,t_end_day," << column << '\n';
  for (int n = 0; n < mesh.steps(); ++n) {
    out << format_number(mesh.time(n)) << ',' << format_number(mesh.time(n + 1)) << ','
        << format_number(u.values[n]) << '\n';
  }
}

std::vector<double> center_line(const Field& f) {
  std::vector<double> line(static_cast<std::size_t>(f.nx));
  const int j = f.ny / 2;
  for (int i = 0; i < f.nx; ++i) {
    line[i] = f.ny % 2 == 1 ? f(i, j) : 0.5 * (f(i, j - 1) + f(i, j));
  }
  return line;
}

void write_cross_section_csv(const std::filesystem::path& path, const std::vector<const Field*>& snapshots,
                             const std::vector<double>& times, const Grid& grid) {
  auto out = open_out(path);
  out << "x_cm";
  for (double t : times) out << ",y_t" << format_number(t) << "_day";
  out << '\n';
  std::vector<std::vector<double>> lines;
  for (const Field* f : snapshots) lines.push_back(center_line(*f));
  for (int i = 0; i < grid.nx(); ++i) {
    out << format_number(grid.x(i));
    for (const auto& line : lines) out << ',' << format_number(line[i]);
    out << '\n';
  }
}

IterateCsvWriter::IterateCsvWriter(const std::filesystem::path& path) : out_(open_out(path)) {
  out_ << "k,J,J_eps,penalty1,penalty2,grad_norm,max_violation_upper,max_violation_lower,control_norm\n";
  out_.flush();
}

void IterateCsvWriter::write(const IterateRecord& r) {
  out_ << r.k << ',' << format_number(r.J) << ',' << format_number(r.J_eps) << ',' << format_number(r.penalty1)
       << ',' << format_number(r.penalty2) << ',' << format_number(r.grad_norm) << ','
       << format_number(r.max_violation_upper) << ',' << format_number(r.max_violation_lower) << ','
       << format_number(r.control_norm) << '\n';
  out_.flush();
}

}  // namespace tumorctl

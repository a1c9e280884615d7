#include "tumorctl/types.hpp"

#include <cmath>

namespace tumorctl {

TimeMesh::TimeMesh(double horizon, int steps) : nt_(steps), T_(horizon) {
  if (steps <= 0) throw InvalidInput("time mesh needs at least one step");
  if (!(horizon > 0.0)) throw InvalidInput("time horizon must be positive");
}

std::vector<double> TimeMesh::times() const {
  std::vector<double> t(nt_ + 1);
  for (int n = 0; n <= nt_; ++n) t[n] = time(n);
  return t;
}

int TimeMesh::node_index(double t) const {
  if (t < -0.5 * dt() || t > T_ + 0.5 * dt()) {
    throw InvalidInput("time " + std::to_string(t) + " outside [0, T]");
  }
  return static_cast<int>(std::lround(t / dt()));
}

Grid::Grid(int nx, int ny, double edge, Vector diffusivity)
    : nx_(nx), ny_(ny), L_(edge), k_(std::move(diffusivity)) {
  if (nx <= 0 || ny <= 0) throw InvalidInput("grid needs at least one interior cell per axis");
  if (!(edge > 0.0)) throw InvalidInput("domain edge length must be positive");
  if (k_.size() != Eigen::Index(nx) * ny) throw InvalidInput("diffusivity field size does not match grid");
  for (Eigen::Index c = 0; c < k_.size(); ++c) {
    if (!(k_[c] > 0.0) || !std::isfinite(k_[c])) {
      throw InvalidInput("diffusion coefficient must be positive and finite (0 < k0 <= k(x) <= k1)");
    }
  }
}

Grid Grid::uniform(int nx, int ny, double edge, double diffusivity) {
  return Grid(nx, ny, edge, Vector::Constant(Eigen::Index(nx) * ny, diffusivity));
}

double inner(const Field& a, const Field& b, const Grid& grid) {
  return grid.cell_area() * a.values.dot(b.values);
}

double l2_norm(const Field& f, const Grid& grid) { return std::sqrt(inner(f, f, grid)); }

double inner(const ControlVector& a, const ControlVector& b, const TimeMesh& mesh) {
  return mesh.dt() * a.values.dot(b.values);
}

double l2_norm(const ControlVector& u, const TimeMesh& mesh) { return std::sqrt(inner(u, u, mesh)); }

double l2_norm(const TimeSeries& s, const TimeMesh& mesh) {
  const auto& v = s.values;
  const Eigen::Index n = v.size() - 1;
  double sum = 0.5 * (v[0] * v[0] + v[n] * v[n]);
  for (Eigen::Index i = 1; i < n; ++i) sum += v[i] * v[i];
  return std::sqrt(mesh.dt() * sum);
}

void check_length(const ControlVector& u, const TimeMesh& mesh) {
  if (u.values.size() != mesh.steps()) {
    throw InvalidInput("control has " + std::to_string(u.values.size()) + " intervals, mesh has " +
                       std::to_string(mesh.steps()));
  }
}

void check_length(const TimeSeries& s, const TimeMesh& mesh) {
  if (s.values.size() != mesh.steps() + 1) {
    throw InvalidInput("time series has " + std::to_string(s.values.size()) + " nodes, mesh has " +
                       std::to_string(mesh.steps() + 1));
  }
}

}  // namespace tumorctl

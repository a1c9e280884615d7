#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tumorctl {

using Vector = Eigen::VectorXd;

/// Raised for inconsistent inputs (length mismatches, out-of-range times, bad parameters).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform partition of (0, T) into nt steps.
class TimeMesh {
 public:
  TimeMesh() = default;
  TimeMesh(double horizon, int steps);

  int steps() const { return nt_; }
  double horizon() const { return T_; }
  double dt() const { return T_ / nt_; }
  double time(int n) const { return T_ * n / nt_; }
  std::vector<double> times() const;

  /// Nearest node to t; throws when t lies outside [0, T].
  int node_index(double t) const;

 private:
  int nt_ = 0;
  double T_ = 0.0;
};

/// Structured grid of interior nodes on the square (0, L)^2. Boundary nodes
/// carry the homogeneous Dirichlet value and are not stored.
class Grid {
 public:
  Grid() = default;
  Grid(int nx, int ny, double edge, Vector diffusivity);

  static Grid uniform(int nx, int ny, double edge, double diffusivity);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int cells() const { return nx_ * ny_; }
  double edge() const { return L_; }
  double hx() const { return L_ / (nx_ + 1); }
  double hy() const { return L_ / (ny_ + 1); }
  double cell_area() const { return hx() * hy(); }
  double x(int i) const { return (i + 1) * hx(); }
  double y(int j) const { return (j + 1) * hy(); }
  int index(int i, int j) const { return j * nx_ + i; }

  const Vector& diffusivity() const { return k_; }
  double k_min() const { return k_.minCoeff(); }
  double k_max() const { return k_.maxCoeff(); }

 private:
  int nx_ = 0;
  int ny_ = 0;
  double L_ = 0.0;
  Vector k_;
};

/// Scalar field on the interior nodes, stored row by row (x fastest).
struct Field {
  int nx = 0;
  int ny = 0;
  Vector values;

  Field() = default;
  Field(int nx_, int ny_) : nx(nx_), ny(ny_), values(Vector::Zero(Eigen::Index(nx_) * ny_)) {}
  explicit Field(const Grid& g) : Field(g.nx(), g.ny()) {}

  double& operator()(int i, int j) { return values[Eigen::Index(j) * nx + i]; }
  double operator()(int i, int j) const { return values[Eigen::Index(j) * nx + i]; }
};

/// h^2-weighted cell quadrature of (a, b) over the domain.
double inner(const Field& a, const Field& b, const Grid& grid);
/// L2(Omega) norm by the same quadrature.
double l2_norm(const Field& f, const Grid& grid);

/// Values on the nt + 1 mesh nodes (drug concentration s, adjoint p2).
struct TimeSeries {
  Vector values;
};

/// Piecewise-constant control: one value per mesh interval, units 1/day.
struct ControlVector {
  Vector values;

  static ControlVector constant(const TimeMesh& mesh, double value) {
    return {Vector::Constant(mesh.steps(), value)};
  }
};

/// Exact L2(0, T) norm of a piecewise-constant control.
double l2_norm(const ControlVector& u, const TimeMesh& mesh);
double inner(const ControlVector& a, const ControlVector& b, const TimeMesh& mesh);

/// Composite-trapezoid L2(0, T) norm of node values.
double l2_norm(const TimeSeries& s, const TimeMesh& mesh);

void check_length(const ControlVector& u, const TimeMesh& mesh);
void check_length(const TimeSeries& s, const TimeMesh& mesh);

}  // namespace tumorctl

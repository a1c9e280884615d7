#include "tumorctl/objective.hpp"

namespace tumorctl {

namespace {

double tracking_term(const StateTrajectory& y, const Grid& grid, const TimeMesh& mesh, const Field& mask) {
  if (y.steps() != mesh.steps()) throw InvalidInput("state trajectory length does not match the time mesh");
  const Vector w = trapezoid_weights(mesh);
  double sum = 0.0;
  for (int n = 0; n <= mesh.steps(); ++n) {
    sum += w[n] * tracking_density(y.at(n), mask);
  }
  return 0.5 * grid.cell_area() * sum;
}

}  // namespace

double tracking_density(const Field& y, const Field& mask) {
  return mask.values.size() == 0 ? y.values.squaredNorm() : y.values.cwiseAbs2().dot(mask.values);
}

Vector trapezoid_weights(const TimeMesh& mesh, int first_node) {
  const int nt = mesh.steps();
  Vector w = Vector::Zero(nt + 1);
  if (first_node >= nt) return w;
  const double dt = mesh.dt();
  w.segment(first_node, nt - first_node + 1).setConstant(dt);
  w[first_node] = 0.5 * dt;
  w[nt] = 0.5 * dt;
  return w;
}

double eval_J(const StateTrajectory& y, const ControlVector& u, double lambda, const Grid& grid,
              const TimeMesh& mesh, const Field& mask) {
  check_length(u, mesh);
  return tracking_term(y, grid, mesh, mask) + 0.5 * lambda * mesh.dt() * u.values.squaredNorm();
}

ObjectiveBreakdown assemble_objective(double tracking, const TimeSeries& s, const ControlVector& u,
                                      const ModelParams& p, const TimeMesh& mesh) {
  check_length(u, mesh);
  check_length(s, mesh);
  ObjectiveBreakdown b;
  b.tracking = tracking;
  b.control = 0.5 * p.lambda * mesh.dt() * u.values.squaredNorm();
  b.J = b.tracking + b.control;

  const Vector w1 = trapezoid_weights(mesh);
  const Vector w2 = trapezoid_weights(mesh, mesh.node_index(p.t0));
  for (int n = 0; n <= mesh.steps(); ++n) {
    b.f1_integral += w1[n] * penalty_f1(s.values[n], p.s_plus);
    b.f2_integral += w2[n] * penalty_f2(s.values[n], p.s_minus);
  }
  b.penalty1 = b.f1_integral / p.eps;
  b.penalty2 = b.f2_integral / p.eps;
  b.J_eps = b.J + b.penalty1 + b.penalty2;
  return b;
}

ObjectiveBreakdown eval_Jeps(const StateTrajectory& y, const TimeSeries& s, const ControlVector& u,
                             const ModelParams& p, const Grid& grid, const TimeMesh& mesh, const Field& mask) {
  return assemble_objective(tracking_term(y, grid, mesh, mask), s, u, p, mesh);
}

}  // namespace tumorctl

#include "tumorctl/adjoint.hpp"

#include "tumorctl/objective.hpp"

#include <cmath>

namespace tumorctl {

std::vector<Field> solve_p1(const StateTrajectory& y, const TimeSeries& s, const DiffusionOperator& A,
                            const ModelParams& p, const TimeMesh& mesh, const Field& mask,
                            const CgOptions& options) {
  const int nt = mesh.steps();
  if (y.steps() != nt) throw InvalidInput("solve_p1: state trajectory length does not match the time mesh");
  check_length(s, mesh);
  const GrowthLaw law = p.growth_law();
  const Vector w = trapezoid_weights(mesh);
  const double dt = mesh.dt();

  const Field& shape = y.at(0);
  std::vector<Field> p1(static_cast<std::size_t>(nt) + 1, Field(shape.nx, shape.ny));
  Vector rhs(shape.values.size());
  for (int n = nt - 1; n >= 0; --n) {
    const Vector& yn = y.at(n + 1).values;
    rhs = p1[n + 1].values;
    if (mask.values.size() == 0) {
      rhs -= w[n + 1] * yn;
    } else {
      rhs -= w[n + 1] * yn.cwiseProduct(mask.values);
    }
    const double shift = 1.0 - dt * law(s.values[n + 1]);
    Vector& x = p1[n].values;
    x = p1[n + 1].values;
    solve_shifted(A, shift, dt, rhs, x, options);
  }
  return p1;
}

P2Solution integrate_p2(const Vector& impulses, const ModelParams& p, const TimeMesh& mesh) {
  const int nt = mesh.steps();
  if (impulses.size() != nt + 1) throw InvalidInput("integrate_p2: impulse vector must have nt + 1 entries");
  const double decay = std::exp(-p.M0 * mesh.dt());
  // mean over an interval of a e^{-M0 (t_{n+1} - t)}-shaped function, relative to its right-limit at t_n
  const double mean_factor = std::expm1(p.M0 * mesh.dt()) / (p.M0 * mesh.dt());

  P2Solution out;
  out.nodes.values = Vector::Zero(nt + 1);
  out.interval = Vector::Zero(nt);
  double q = 0.0;  // left limit at t_{n+1}
  for (int n = nt - 1; n >= 0; --n) {
    q = impulses[n + 1] + decay * q;
    out.nodes.values[n] = decay * q;
    out.interval[n] = mean_factor * out.nodes.values[n];
  }
  return out;
}

P2Solution solve_p2(const TimeSeries& s, const StateTrajectory& y, const std::vector<Field>& p1,
                    const ModelParams& p, const TimeMesh& mesh, const Grid& grid, const GrowthLaw& law) {
  const int nt = mesh.steps();
  check_length(s, mesh);
  if (y.steps() != nt || static_cast<int>(p1.size()) != nt + 1) {
    throw InvalidInput("solve_p2: trajectory lengths do not match the time mesh");
  }
  const Vector w1 = trapezoid_weights(mesh);
  const Vector w2 = trapezoid_weights(mesh, mesh.node_index(p.t0));
  const double dt = mesh.dt();

  Vector impulses = Vector::Zero(nt + 1);
  for (int m = 1; m <= nt; ++m) {
    const double sm = s.values[m];
    const double coupling = dt * law.derivative(sm) * inner(y.at(m), p1[m - 1], grid);
    const double penalty =
        (w1[m] * penalty_f1_prime(sm, p.s_plus) + w2[m] * penalty_f2_prime(sm, p.s_minus)) / p.eps;
    impulses[m] = coupling - penalty;
  }
  return integrate_p2(impulses, p, mesh);
}

ControlVector reduced_gradient(const ControlVector& u, const Vector& p2_interval, double lambda) {
  if (u.values.size() != p2_interval.size()) throw InvalidInput("reduced_gradient: length mismatch");
  return {lambda * u.values - p2_interval};
}

}  // namespace tumorctl

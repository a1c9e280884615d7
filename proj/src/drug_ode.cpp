#include "tumorctl/drug_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tumorctl {

TimeSeries solve_s(const ControlVector& u, const ModelParams& p, const TimeMesh& mesh) {
  check_length(u, mesh);
  const int nt = mesh.steps();
  const double decay = std::exp(-p.M0 * mesh.dt());
  const double gain = -std::expm1(-p.M0 * mesh.dt()) / p.M0;
  TimeSeries s{Vector::Zero(nt + 1)};
  for (int n = 0; n < nt; ++n) s.values[n + 1] = decay * s.values[n] + gain * u.values[n];
  return s;
}

double convolution_oracle(const ControlVector& u, const ModelParams& p, const TimeMesh& mesh, double t) {
  check_length(u, mesh);
  if (t < 0.0 || t > mesh.horizon() * (1.0 + 1e-14)) {
    throw InvalidInput("convolution_oracle: t = " + std::to_string(t) + " outside [0, T]");
  }
  // int_a^b e^{-M0 (t - tau)} dtau = (e^{-M0 (t - b)} - e^{-M0 (t - a)}) / M0
  double sum = 0.0;
  for (int n = 0; n < mesh.steps(); ++n) {
    const double a = mesh.time(n);
    if (a >= t) break;
    const double b = std::min(mesh.time(n + 1), t);
    const double w = std::exp(-p.M0 * (t - b)) * -std::expm1(-p.M0 * (b - a)) / p.M0;
    sum += w * u.values[n];
  }
  return sum;
}

Vector convolution_oracle_nodes(const ControlVector& u, const ModelParams& p, const TimeMesh& mesh) {
  check_length(u, mesh);
  const int nt = mesh.steps();
  const double dt = mesh.dt();
  // contribution of an interval ending j steps before the node
  Vector kernel(nt);
  const double area = -std::expm1(-p.M0 * dt) / p.M0;
  for (int j = 0; j < nt; ++j) kernel[j] = std::exp(-p.M0 * dt * j) * area;
  Vector s = Vector::Zero(nt + 1);
  for (int m = 1; m <= nt; ++m) {
    double sum = 0.0;
    for (int n = 0; n < m; ++n) sum += kernel[m - 1 - n] * u.values[n];
    s[m] = sum;
  }
  return s;
}

BoundsReport verify_bounds(const ControlVector& u, const TimeSeries& s, const ModelParams& p,
                           const TimeMesh& mesh) {
  check_length(u, mesh);
  check_length(s, mesh);
  const double dt = mesh.dt();
  BoundsReport r;
  r.u_norm = l2_norm(u, mesh);

  r.pointwise_slack = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= mesh.steps(); ++n) {
    r.pointwise_slack =
        std::min(r.pointwise_slack, std::sqrt(mesh.time(n)) * r.u_norm - std::abs(s.values[n]));
  }
  r.l2_slack = p.T * r.u_norm - l2_norm(s, mesh);

  // On each interval s' = (u_n - M0 s_n) e^{-M0 tau}; square-integrate exactly.
  const double weight = -std::expm1(-2.0 * p.M0 * dt) / (2.0 * p.M0);
  double ds2 = 0.0;
  for (int n = 0; n < mesh.steps(); ++n) {
    const double r0 = u.values[n] - p.M0 * s.values[n];
    ds2 += r0 * r0 * weight;
  }
  r.derivative_slack = (1.0 + p.M0 * p.T) * r.u_norm - std::sqrt(ds2);

  // round-off allowance relative to the bound scale
  const double tol = 1e-12 * (1.0 + (1.0 + p.M0 * p.T) * r.u_norm);
  if (r.pointwise_slack < -tol) {
    throw BoundViolation("|s(t)| <= sqrt(t)||u|| violated, slack " + std::to_string(r.pointwise_slack));
  }
  if (r.l2_slack < -tol) {
    throw BoundViolation("||s|| <= T||u|| violated, slack " + std::to_string(r.l2_slack));
  }
  if (r.derivative_slack < -tol) {
    throw BoundViolation("||s'|| <= (1 + M0 T)||u|| violated, slack " + std::to_string(r.derivative_slack));
  }
  return r;
}

}  // namespace tumorctl

#pragma once

#include "tumorctl/types.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace tumorctl {

/// Reaction rate d(s) of the tumor equation. Positive below the zero
/// crossing s_m, negative above it.
class GrowthLaw {
 public:
  enum class Kind { Linear, Table };

  /// d(s) = rho * (1 - s / s_m).
  static GrowthLaw linear(double rho, double s_m);

  /// Piecewise-linear interpolant through (s, d) points sorted by s, held
  /// constant outside the table. Sign and Lipschitz conditions are checked here.
  static GrowthLaw table(std::vector<std::pair<double, double>> points, double s_m);

  double operator()(double s) const;

  /// d'(s). Throws NotDifferentiable at interior table breakpoints.
  double derivative(double s) const;

  /// Lipschitz constant of d on |s| <= a.
  double lipschitz(double a) const;

  Kind kind() const { return kind_; }
  double zero_crossing() const { return s_m_; }
  /// sup of d over s >= 0 (rho for the linear law, largest table value otherwise).
  double rho() const { return rho_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  Kind kind_ = Kind::Linear;
  double rho_ = 0.0;
  double s_m_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

class NotDifferentiable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double d_eval(const GrowthLaw& law, double s) { return law(s); }
inline double d_prime(const GrowthLaw& law, double s) { return law.derivative(s); }

/// Scalar model and algorithm constants. Times in days, rates in 1/day.
struct ModelParams {
  double M0 = 0.5;       // drug clearance rate
  double lambda = 1.0;   // control regularization weight
  double eps = 0.2;      // penalty coefficient
  double s_minus = 0.4;  // lower drug bound, active on [t0, T]
  double s_plus = 0.8;   // upper drug bound, active on [0, T]
  double s_m = 0.2;      // growth-law zero crossing (critical level s_c)
  double t0 = 7.0;
  double T = 28.0;
  double rho = 0.1;      // growth-law magnitude
  double delta = 0.0;    // gradient step; <= 0 selects default_step()
  int N = 10;            // max iterations
  double tol = 0.0;      // stopping tolerance on the J_eps decrease; <= 0 means 1e-6 * J_eps(u0)
  double grad_tol = 0.0; // optional stop when ||lambda u - p2||_U < grad_tol
  bool clamp_nonnegative = false;
  std::vector<std::pair<double, double>> growth_table;  // empty: linear law

  /// Throws InvalidInput naming the offending field.
  void validate() const;

  GrowthLaw growth_law() const;

  /// Inverse of a curvature bound for J_eps along controls:
  /// lambda + 2 / (eps * M0^2), the penalty term's worst case.
  double default_step() const { return 1.0 / (lambda + 2.0 / (eps * M0 * M0)); }
  double step() const { return delta > 0.0 ? delta : default_step(); }
};

/// f1(s) = (s - s_plus)^2 for s > s_plus, else 0.
inline double penalty_f1(double s, double s_plus) {
  const double e = s - s_plus;
  return e > 0.0 ? e * e : 0.0;
}
inline double penalty_f1_prime(double s, double s_plus) {
  const double e = s - s_plus;
  return e > 0.0 ? 2.0 * e : 0.0;
}

/// f2(s) = (s - s_minus)^2 for s < s_minus, else 0.
inline double penalty_f2(double s, double s_minus) {
  const double e = s - s_minus;
  return e < 0.0 ? e * e : 0.0;
}
inline double penalty_f2_prime(double s, double s_minus) {
  const double e = s - s_minus;
  return e < 0.0 ? 2.0 * e : 0.0;
}

/// f2'(s) once the lower constraint is active (t >= t0), zero before.
inline double chi_eval(double s, double t, double t0, double s_minus) {
  return t >= t0 ? penalty_f2_prime(s, s_minus) : 0.0;
}

struct FeasibilityReport {
  double lhs = 0.0;  // (1 - e^{-M0 T}) / (1 - e^{-M0 t0}) * s_minus
  double rhs = 0.0;  // s_plus
  bool feasible = false;
};

/// Whether a constant control can keep s within [s_minus, s_plus] where required.
FeasibilityReport check_feasibility(const ModelParams& p);

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constant control u = M0 s_minus / (1 - e^{-M0 t0}); its trajectory reaches
/// s_minus exactly at t0. Throws Infeasible when check_feasibility fails.
ControlVector reference_constant_control(const ModelParams& p, const TimeMesh& mesh);

}  // namespace tumorctl

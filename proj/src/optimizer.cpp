#include "tumorctl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tumorctl {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxIterations: return "max-iterations";
    case StopReason::Tolerance: return "tolerance";
    case StopReason::Stationary: return "stationary";
    case StopReason::Diverged: return "diverged";
  }
  return "unknown";
}

namespace {

IterateRecord make_record(int k, const Problem& problem, const ControlVector& u, const GradientEvaluation& g) {
  const auto& obj = g.eval.objective;
  const auto viol = constraint_violation(g.eval.forward.s, problem.params, problem.mesh);
  IterateRecord r;
  r.k = k;
  r.J = obj.J;
  r.J_eps = obj.J_eps;
  r.penalty1 = obj.penalty1;
  r.penalty2 = obj.penalty2;
  r.grad_norm = g.grad_norm;
  r.max_violation_upper = viol.upper;
  r.max_violation_lower = viol.lower;
  r.control_norm = l2_norm(u, problem.mesh);
  return r;
}

}  // namespace

OptimizationResult run(const Problem& problem, const ControlVector& u0, const IterateCallback& on_iterate) {
  const ModelParams& p = problem.params;
  check_length(u0, problem.mesh);

  OptimizationResult result;
  result.step = p.step();
  ControlVector u = u0;
  double previous = 0.0;
  int increases = 0;

  for (int k = 0; k <= p.N; ++k) {
    GradientEvaluation g;
    try {
      g = evaluate_with_gradient(problem, u);
    } catch (const std::exception& e) {
      if (k == 0) throw;
      result.reason = StopReason::Diverged;
      result.message = "iterate " + std::to_string(k) + " could not be evaluated (" + e.what() +
                       "); the gradient step delta = " + std::to_string(result.step) +
                       " is too large, choose a smaller delta";
      break;
    }
    IterateRecord rec = make_record(k, problem, u, g);
    result.history.push_back(rec);
    if (on_iterate) on_iterate(rec);

    if (k == 0) result.tolerance = p.tol > 0.0 ? p.tol : 1e-6 * rec.J_eps;

    ControlVector next{u.values - result.step * g.gradient.values};
    if (p.clamp_nonnegative) next.values = next.values.cwiseMax(0.0);

    if (k == 0 || rec.J_eps < result.history[result.best_k].J_eps) {
      result.best_k = k;
      result.u = u;
      result.best = std::move(g);
    }

    bool stop = false;
    if (k > 0) {
      const double decrease = previous - rec.J_eps;
      increases = decrease < 0.0 ? increases + 1 : 0;
      if (increases >= 3) {
        result.reason = StopReason::Diverged;
        result.message = "J_eps increased for 3 consecutive iterations; the gradient step delta = " +
                         std::to_string(result.step) + " is too large, choose a smaller delta";
        stop = true;
      } else if (decrease >= 0.0 && decrease < result.tolerance) {
        result.reason = StopReason::Tolerance;
        stop = true;
      }
    }
    if (!stop && (rec.grad_norm == 0.0 || (p.grad_tol > 0.0 && rec.grad_norm < p.grad_tol))) {
      result.reason = StopReason::Stationary;
      stop = true;
    }
    if (!stop && k == p.N) {
      result.reason = StopReason::MaxIterations;
      stop = true;
    }
    if (stop) break;
    previous = rec.J_eps;
    u = std::move(next);
  }
  return result;
}

ControlVector dosing_init(const TimeMesh& mesh, double dose_rate, double window, double period) {
  if (!(window > 0.0) || !(period > 0.0) || window > period) {
    throw InvalidInput("dosing_init: need 0 < window <= period");
  }
  const double dt = mesh.dt();
  auto whole_steps = [](double length, double unit, const char* what) {
    const double ratio = length / unit;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
      throw InvalidInput(std::string("dosing_init: ") + what + " is not resolvable by the time step (" +
                         std::to_string(ratio) + " steps); use a finer nt");
    }
    return static_cast<long>(rounded);
  };
  const long window_steps = whole_steps(window, dt, "dosing window");
  const long period_steps = whole_steps(period, dt, "dosing period");
  (void)whole_steps(mesh.horizon(), period, "horizon / period");

  ControlVector u = ControlVector::constant(mesh, 0.0);
  for (int n = 0; n < mesh.steps(); ++n) {
    if (n % period_steps < window_steps) u.values[n] = dose_rate;
  }
  return u;
}

}  // namespace tumorctl

#pragma once

#include "tumorctl/problem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tumorctl {

struct IterateRecord {
  int k = 0;
  double J = 0.0;
  double J_eps = 0.0;
  double penalty1 = 0.0;
  double penalty2 = 0.0;
  double grad_norm = 0.0;  // ||lambda u_k - p2_k||_U
  double max_violation_upper = 0.0;
  double max_violation_lower = 0.0;
  double control_norm = 0.0;
};

enum class StopReason {
  MaxIterations,  // k reached N
  Tolerance,      // 0 <= J_eps(k-1) - J_eps(k) < tol
  Stationary,     // grad_norm below grad_tol (or exactly zero)
  Diverged,       // J_eps increased three times in a row, or an iterate left the solvable range
};

const char* to_string(StopReason reason);

struct OptimizationResult {
  ControlVector u;            // best-J_eps iterate
  int best_k = 0;
  GradientEvaluation best;    // state, objective and adjoint at u
  std::vector<IterateRecord> history;
  StopReason reason = StopReason::MaxIterations;
  double step = 0.0;
  double tolerance = 0.0;
  std::string message;
};

using IterateCallback = std::function<void(const IterateRecord&)>;

/// Gradient descent u_{k+1} = u_k - delta (lambda u_k - p2_k) for k = 0..N.
/// `on_iterate` sees every record as soon as it is computed.
OptimizationResult run(const Problem& problem, const ControlVector& u0, const IterateCallback& on_iterate = {});

/// dose_rate on the first `window` of every `period`, zero otherwise.
/// Both must be whole multiples of dt and period must divide T.
ControlVector dosing_init(const TimeMesh& mesh, double dose_rate, double window, double period);

}  // namespace tumorctl

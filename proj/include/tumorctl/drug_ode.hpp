#pragma once

#include "tumorctl/model.hpp"
#include "tumorctl/types.hpp"

#include <stdexcept>

namespace tumorctl {

/// s' + M0 s = u, s(0) = 0, on the mesh nodes. Uses the exact update for
/// piecewise-constant u, so there is no time-discretization error.
TimeSeries solve_s(const ControlVector& u, const ModelParams& p, const TimeMesh& mesh);

/// s(t) = int_0^t e^{-M0 (t - tau)} u(tau) dtau, integrated interval by interval.
/// Independent route used to check solve_s.
double convolution_oracle(const ControlVector& u, const ModelParams& p, const TimeMesh& mesh, double t);

/// The same integral on every node at once: a direct sum against the
/// interval kernel, O(nt^2).
Vector convolution_oracle_nodes(const ControlVector& u, const ModelParams& p, const TimeMesh& mesh);

struct BoundsReport {
  // slack = right side - left side; all three must be >= 0
  double pointwise_slack = 0.0;  // min_t sqrt(t) ||u|| - |s(t)|
  double l2_slack = 0.0;         // T ||u|| - ||s||
  double derivative_slack = 0.0; // (1 + M0 T) ||u|| - ||s'||
  double u_norm = 0.0;
};

class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks |s(t)| <= sqrt(t)||u||, ||s|| <= T||u|| and ||s'|| <= (1 + M0 T)||u||
/// with s' = u - M0 s. Throws BoundViolation naming the first failed estimate.
BoundsReport verify_bounds(const ControlVector& u, const TimeSeries& s, const ModelParams& p,
                           const TimeMesh& mesh);

}  // namespace tumorctl

#pragma once

#include "tumorctl/diffusion.hpp"
#include "tumorctl/model.hpp"
#include "tumorctl/types.hpp"

#include <vector>

namespace tumorctl {

// The backward sweeps below are the exact transpose of the forward scheme
// (implicit Euler with d(s) at the new node, exact exponential ODE update,
// trapezoid quadrature in J_eps). Indexing: p1[n] is the multiplier of the
// step t_n -> t_{n+1}, so p1[nt] = 0 and
//   (I + dt A - dt d(s^{n+1}) I) p1[n] = p1[n+1] - w_{n+1} y^{n+1}
// with w the trapezoid weights.

/// p1[0..nt], p1[nt] = 0.
std::vector<Field> solve_p1(const StateTrajectory& y, const TimeSeries& s, const DiffusionOperator& A,
                            const ModelParams& p, const TimeMesh& mesh, const Field& mask = {},
                            const CgOptions& options = {});

/// Solution of -p2' + M0 p2 = g with p2(T) = 0, where g is a sum of point
/// sources at the mesh nodes. Between nodes p2 is an exponential.
struct P2Solution {
  TimeSeries nodes;    // right limits p2(t_n^+); nodes[nt] = 0
  Vector interval;     // exact mean of p2 over each interval, length nt
};

/// Backward exact-exponential sweep for node impulses (already multiplied by
/// their quadrature weights); impulses[0] has no effect.
P2Solution integrate_p2(const Vector& impulses, const ModelParams& p, const TimeMesh& mesh);

/// Source d'(s)(y, p1) - f1'(s)/eps - chi(s, t)/eps, each term weighted as the
/// discrete objective and forward step weight it.
P2Solution solve_p2(const TimeSeries& s, const StateTrajectory& y, const std::vector<Field>& p1,
                    const ModelParams& p, const TimeMesh& mesh, const Grid& grid, const GrowthLaw& law);

/// lambda u - p2 with p2 averaged over each control interval.
ControlVector reduced_gradient(const ControlVector& u, const Vector& p2_interval, double lambda);

}  // namespace tumorctl

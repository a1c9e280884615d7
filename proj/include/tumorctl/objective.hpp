#pragma once

#include "tumorctl/diffusion.hpp"
#include "tumorctl/model.hpp"
#include "tumorctl/types.hpp"

namespace tumorctl {

/// Composite-trapezoid weights over [t_first, T]; zero before `first_node`.
Vector trapezoid_weights(const TimeMesh& mesh, int first_node = 0);

struct ObjectiveBreakdown {
  double tracking = 0.0;  // 1/2 ||y||^2 over Q (or the masked subdomain)
  double control = 0.0;   // lambda/2 ||u||^2
  double J = 0.0;
  double penalty1 = 0.0;  // (1/eps) int_0^T f1(s)
  double penalty2 = 0.0;  // (1/eps) int_t0^T f2(s)
  double J_eps = 0.0;
  double f1_integral = 0.0;
  double f2_integral = 0.0;
};

/// Tracking weights default to the whole domain when `mask` is empty.
double eval_J(const StateTrajectory& y, const ControlVector& u, double lambda, const Grid& grid,
              const TimeMesh& mesh, const Field& mask = {});

/// ||y||^2 (mask-weighted when a mask is given) without the cell area.
double tracking_density(const Field& y, const Field& mask);

/// Combines a precomputed tracking term with the control and penalty terms.
ObjectiveBreakdown assemble_objective(double tracking, const TimeSeries& s, const ControlVector& u,
                                      const ModelParams& p, const TimeMesh& mesh);

ObjectiveBreakdown eval_Jeps(const StateTrajectory& y, const TimeSeries& s, const ControlVector& u,
                             const ModelParams& p, const Grid& grid, const TimeMesh& mesh,
                             const Field& mask = {});

}  // namespace tumorctl

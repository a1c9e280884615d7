#pragma once

#include "tumorctl/adjoint.hpp"
#include "tumorctl/diffusion.hpp"
#include "tumorctl/model.hpp"
#include "tumorctl/objective.hpp"
#include "tumorctl/types.hpp"

#include <vector>

namespace tumorctl {

/// Everything fixed during an optimization: parameters, discretization,
/// initial tumor, tracking subdomain and the assembled operator.
struct Problem {
  ModelParams params;
  Grid grid;
  TimeMesh mesh;
  Field y0;
  Field mask;  // tracking weights; empty tracks the whole domain
  DiffusionOperator A;
  GrowthLaw law;
  CgOptions cg;

  /// Validates parameters and the discretization (mesh horizon equals T,
  /// dt * sup d < 1 so the implicit step keeps y >= 0).
  Problem(ModelParams p, Grid g, TimeMesh m, Field initial, Field tracking_mask = {});
};

struct Evaluation {
  ForwardSolution forward;
  ObjectiveBreakdown objective;
};

struct GradientEvaluation {
  Evaluation eval;
  std::vector<Field> p1;
  P2Solution p2;
  ControlVector gradient;
  double grad_norm = 0.0;
};

Evaluation evaluate(const Problem& problem, const ControlVector& u);

/// Same objective as evaluate() without keeping the state history.
ObjectiveBreakdown evaluate_objective(const Problem& problem, const ControlVector& u);

/// Forward solve, objective, adjoint sweeps and lambda u - p2.
GradientEvaluation evaluate_with_gradient(const Problem& problem, const ControlVector& u);

struct ConstraintViolation {
  double upper = 0.0;  // max(0, max_t s - s_plus)
  double lower = 0.0;  // max over [t0, T] of max(0, s_minus - s)
};

ConstraintViolation constraint_violation(const TimeSeries& s, const ModelParams& p, const TimeMesh& mesh);

}  // namespace tumorctl

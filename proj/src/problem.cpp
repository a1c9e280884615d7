#include "tumorctl/problem.hpp"

#include "tumorctl/drug_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tumorctl {

Problem::Problem(ModelParams p, Grid g, TimeMesh m, Field initial, Field tracking_mask)
    : params(std::move(p)), grid(std::move(g)), mesh(m), y0(std::move(initial)), mask(std::move(tracking_mask)) {
  params.validate();
  if (std::abs(mesh.horizon() - params.T) > 1e-12 * params.T) {
    throw InvalidInput("time mesh horizon " + std::to_string(mesh.horizon()) + " differs from T = " +
                       std::to_string(params.T));
  }
  if (y0.values.size() != grid.cells() || y0.nx != grid.nx() || y0.ny != grid.ny()) {
    throw InvalidInput("initial condition does not match the grid");
  }
  if (mask.values.size() != 0 && mask.values.size() != grid.cells()) {
    throw InvalidInput("tracking mask does not match the grid");
  }
  law = params.growth_law();
  if (!(mesh.dt() * law.rho() < 1.0)) {
    throw InvalidInput("dt * sup d(s) = " + std::to_string(mesh.dt() * law.rho()) +
                       " must be < 1 for a positivity-preserving implicit step; increase nt");
  }
  A = assemble_A(grid);
}

Evaluation evaluate(const Problem& problem, const ControlVector& u) {
  Evaluation e;
  e.forward = solve_forward(u, problem.params, problem.grid, problem.A, problem.mesh, problem.y0, problem.cg);
  e.objective = eval_Jeps(e.forward.y, e.forward.s, u, problem.params, problem.grid, problem.mesh, problem.mask);
  return e;
}

ObjectiveBreakdown evaluate_objective(const Problem& problem, const ControlVector& u) {
  const TimeMesh& mesh = problem.mesh;
  const TimeSeries s = solve_s(u, problem.params, mesh);
  const Vector w = trapezoid_weights(mesh);
  Field y = problem.y0;
  // summation order matches eval_Jeps so both routes agree bit for bit
  double sum = w[0] * tracking_density(y, problem.mask);
  for (int n = 0; n < mesh.steps(); ++n) {
    y = step_y(y, s.values[n + 1], problem.A, mesh.dt(), problem.law, problem.cg);
    sum += w[n + 1] * tracking_density(y, problem.mask);
  }
  return assemble_objective(0.5 * problem.grid.cell_area() * sum, s, u, problem.params, mesh);
}

GradientEvaluation evaluate_with_gradient(const Problem& problem, const ControlVector& u) {
  GradientEvaluation g;
  g.eval = evaluate(problem, u);
  const auto& fwd = g.eval.forward;
  g.p1 = solve_p1(fwd.y, fwd.s, problem.A, problem.params, problem.mesh, problem.mask, problem.cg);
  g.p2 = solve_p2(fwd.s, fwd.y, g.p1, problem.params, problem.mesh, problem.grid, problem.law);
  g.gradient = reduced_gradient(u, g.p2.interval, problem.params.lambda);
  g.grad_norm = l2_norm(g.gradient, problem.mesh);
  return g;
}

ConstraintViolation constraint_violation(const TimeSeries& s, const ModelParams& p, const TimeMesh& mesh) {
  check_length(s, mesh);
  ConstraintViolation v;
  const int n0 = mesh.node_index(p.t0);
  for (int n = 0; n <= mesh.steps(); ++n) {
    v.upper = std::max(v.upper, s.values[n] - p.s_plus);
    if (n >= n0) v.lower = std::max(v.lower, p.s_minus - s.values[n]);
  }
  return v;
}

}  // namespace tumorctl

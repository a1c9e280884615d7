#pragma once

#include "tumorctl/model.hpp"
#include "tumorctl/types.hpp"

#include <Eigen/SparseCore>

#include <stdexcept>
#include <vector>

namespace tumorctl {

/// -div(k grad .) on the interior nodes: 5-point flux form, harmonic-mean
/// face diffusivities, Dirichlet unknowns eliminated. Symmetric positive definite.
struct DiffusionOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Vector diagonal;
  double poincare = 0.0;  // smallest eigenvalue of the constant-coefficient Laplacian on this grid

  Eigen::Index size() const { return matrix.rows(); }
};

DiffusionOperator assemble_A(const Grid& grid);

/// Smallest eigenvalue of the unit-coefficient discrete Laplacian:
/// (4/hx^2) sin^2(pi hx / 2L) + (4/hy^2) sin^2(pi hy / 2L).
double discrete_poincare_constant(const Grid& grid);

struct CgOptions {
  double tolerance = 1e-14;          // target relative residual
  double contract_tolerance = 1e-10; // accepted if the target stalls above this
  int max_iterations = 2000;
};

struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// Solves (shift I + scale A) x = rhs by Jacobi-preconditioned conjugate
/// gradients starting from `x`. Throws SolveFailure with the residual history
/// when the contract tolerance is not met.
CgStats solve_shifted(const DiffusionOperator& A, double shift, double scale, const Vector& rhs, Vector& x,
                      const CgOptions& options = {});

/// Tumor disc placed in the square. A mollify_width > 0 replaces the sharp
/// edge by a cosine ramp of that width centered on the circle.
struct TumorShape {
  double diameter = 1.0;
  double center_x = -1.0;  // negative: domain center
  double center_y = -1.0;
  double amplitude = 1.0;
  double mollify_width = 0.0;
};

Field initial_condition(const Grid& grid, const TumorShape& shape = {});

/// One implicit Euler step: (I + dt A - dt d(s_new) I) y_new = y.
Field step_y(const Field& y, double s_new, const DiffusionOperator& A, double dt, const GrowthLaw& law,
             const CgOptions& options = {});

/// Full state history y^0 .. y^nt.
struct StateTrajectory {
  std::vector<Field> states;

  const Field& at(int n) const { return states.at(static_cast<std::size_t>(n)); }
  int steps() const { return static_cast<int>(states.size()) - 1; }
};

struct ForwardSolution {
  StateTrajectory y;
  TimeSeries s;
};

/// Drug concentration from the exact ODE update, then y stepped with the
/// reaction rate taken at the end-of-step node.
ForwardSolution solve_forward(const ControlVector& u, const ModelParams& p, const Grid& grid,
                              const DiffusionOperator& A, const TimeMesh& mesh, const Field& y0,
                              const CgOptions& options = {});

ForwardSolution solve_forward(const ControlVector& u, const ModelParams& p, const Grid& grid,
                              const TimeMesh& mesh, const Field& y0);

}  // namespace tumorctl

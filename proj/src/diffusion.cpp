#include "tumorctl/diffusion.hpp"

#include "tumorctl/drug_ode.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tumorctl {

namespace {

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

}  // namespace

double discrete_poincare_constant(const Grid& grid) {
  const double pi = std::numbers::pi;
  const double sx = std::sin(pi * grid.hx() / (2.0 * grid.edge()));
  const double sy = std::sin(pi * grid.hy() / (2.0 * grid.edge()));
  return 4.0 * sx * sx / (grid.hx() * grid.hx()) + 4.0 * sy * sy / (grid.hy() * grid.hy());
}

DiffusionOperator assemble_A(const Grid& grid) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const Vector& k = grid.diffusivity();
  if (k.size() != grid.cells() || !(k.minCoeff() > 0.0)) {
    throw InvalidInput("assemble_A: diffusion coefficient must be positive everywhere");
  }
  const double ax = 1.0 / (grid.hx() * grid.hx());
  const double ay = 1.0 / (grid.hy() * grid.hy());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(grid.cells()) * 5);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = grid.index(i, j);
      const double kc = k[c];
      double diag = 0.0;
      // A boundary face sees the cell's own coefficient.
      auto face = [&](int ni, int nj, double a) {
        const bool inside = ni >= 0 && ni < nx && nj >= 0 && nj < ny;
        const double kf = inside ? harmonic_mean(kc, k[grid.index(ni, nj)]) : kc;
        diag += a * kf;
        if (inside) entries.emplace_back(c, grid.index(ni, nj), -a * kf);
      };
      face(i - 1, j, ax);
      face(i + 1, j, ax);
      face(i, j - 1, ay);
      face(i, j + 1, ay);
      entries.emplace_back(c, c, diag);
    }
  }
  DiffusionOperator op;
  op.matrix.resize(grid.cells(), grid.cells());
  op.matrix.setFromTriplets(entries.begin(), entries.end());
  op.matrix.makeCompressed();
  op.diagonal = op.matrix.diagonal();
  op.poincare = discrete_poincare_constant(grid);
  return op;
}

CgStats solve_shifted(const DiffusionOperator& A, double shift, double scale, const Vector& rhs, Vector& x,
                      const CgOptions& options) {
  const Eigen::Index n = A.size();
  if (rhs.size() != n) throw InvalidInput("solve_shifted: right-hand side size mismatch");
  if (x.size() != n) x = rhs;

  const double rhs_norm = rhs.norm();
  CgStats stats;
  if (rhs_norm == 0.0) {
    x.setZero();
    return stats;
  }
  const Vector inv_diag = (shift + scale * A.diagonal.array()).inverse().matrix();
  auto apply = [&](const Vector& v) -> Vector { return shift * v + scale * (A.matrix * v); };

  Vector r = rhs - apply(x);
  Vector z = inv_diag.cwiseProduct(r);
  Vector dir = z;
  double rz = r.dot(z);
  std::vector<double> history{r.norm() / rhs_norm};
  Vector q(n);
  double best = history.back();
  int stall = 0;
  for (int it = 0; it < options.max_iterations && history.back() > options.tolerance; ++it) {
    q = apply(dir);
    const double curvature = dir.dot(q);
    if (!(curvature > 0.0)) {
      throw SolveFailure("conjugate gradient: operator not positive definite (shift " +
                             std::to_string(shift) + ")",
                         history);
    }
    const double alpha = rz / curvature;
    x += alpha * dir;
    r -= alpha * q;
    history.push_back(r.norm() / rhs_norm);
    ++stats.iterations;
    // round-off floor reached
    if (history.back() < 0.5 * best) {
      best = history.back();
      stall = 0;
    } else if (++stall >= 5) {
      break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    dir = z + (rz_next / rz) * dir;
    rz = rz_next;
  }
  // recompute the true residual; the recurrence can drift
  stats.relative_residual = (rhs - apply(x)).norm() / rhs_norm;
  if (!(stats.relative_residual <= options.contract_tolerance)) {
    history.push_back(stats.relative_residual);
    throw SolveFailure("conjugate gradient did not converge: relative residual " +
                           std::to_string(stats.relative_residual) + " after " +
                           std::to_string(stats.iterations) + " iterations",
                       history);
  }
  return stats;
}

Field initial_condition(const Grid& grid, const TumorShape& shape) {
  const double L = grid.edge();
  const double cx = shape.center_x < 0.0 ? 0.5 * L : shape.center_x;
  const double cy = shape.center_y < 0.0 ? 0.5 * L : shape.center_y;
  const double R = 0.5 * shape.diameter;
  const double w = shape.mollify_width;
  if (!(shape.diameter > 0.0) || cx - R - 0.5 * w < 0.0 || cx + R + 0.5 * w > L || cy - R - 0.5 * w < 0.0 ||
      cy + R + 0.5 * w > L) {
    throw InvalidInput("initial tumor disc does not fit inside the domain");
  }
  Field y0(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const double r = std::hypot(grid.x(i) - cx, grid.y(j) - cy);
      double v = 0.0;
      if (w > 0.0) {
        if (r <= R - 0.5 * w) {
          v = 1.0;
        } else if (r < R + 0.5 * w) {
          v = 0.5 * (1.0 + std::cos(std::numbers::pi * (r - (R - 0.5 * w)) / w));
        }
      } else {
        v = r <= R ? 1.0 : 0.0;
      }
      y0(i, j) = shape.amplitude * v;
    }
  }
  return y0;
}

Field step_y(const Field& y, double s_new, const DiffusionOperator& A, double dt, const GrowthLaw& law,
             const CgOptions& options) {
  if (!(dt > 0.0)) throw InvalidInput("step_y: dt must be positive");
  const double shift = 1.0 - dt * law(s_new);
  if (!(shift > 0.0)) {
    throw InvalidInput("step_y: dt * d(s) = " + std::to_string(1.0 - shift) +
                       " >= 1, positivity of the implicit step is lost; refine the time mesh");
  }
  Field next = y;
  solve_shifted(A, shift, dt, y.values, next.values, options);
  return next;
}

ForwardSolution solve_forward(const ControlVector& u, const ModelParams& p, const Grid& grid,
                              const DiffusionOperator& A, const TimeMesh& mesh, const Field& y0,
                              const CgOptions& options) {
  if (y0.values.size() != grid.cells()) throw InvalidInput("initial condition does not match grid");
  ForwardSolution out;
  out.s = solve_s(u, p, mesh);
  const GrowthLaw law = p.growth_law();
  const double dt = mesh.dt();
  out.y.states.reserve(static_cast<std::size_t>(mesh.steps()) + 1);
  out.y.states.push_back(y0);
  for (int n = 0; n < mesh.steps(); ++n) {
    out.y.states.push_back(step_y(out.y.states.back(), out.s.values[n + 1], A, dt, law, options));
  }
  return out;
}

ForwardSolution solve_forward(const ControlVector& u, const ModelParams& p, const Grid& grid,
                              const TimeMesh& mesh, const Field& y0) {
  return solve_forward(u, p, grid, assemble_A(grid), mesh, y0);
}

}  // namespace tumorctl

#include "tumorctl/commands.hpp"

#include "tumorctl/io.hpp"
#include "tumorctl/optimizer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace tumorctl {

namespace fs = std::filesystem;

int thread_count_from_env() {
  const char* env = std::getenv("TUMORCTL_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return std::max(1, n);
}

GradcheckReport gradcheck(const Problem& problem, const ControlVector& u, int directions, double h,
                          std::uint64_t seed, int threads) {
  const TimeMesh& mesh = problem.mesh;
  GradcheckReport report;
  report.gradient = evaluate_with_gradient(problem, u).gradient;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<ControlVector> dirs;
  for (int d = 0; d < directions; ++d) {
    ControlVector v = ControlVector::constant(mesh, 0.0);
    for (Eigen::Index n = 0; n < v.values.size(); ++n) v.values[n] = normal(rng);
    v.values /= l2_norm(v, mesh);
    dirs.push_back(std::move(v));
  }

  std::vector<double> values(static_cast<std::size_t>(2 * directions));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < 2 * directions; task = next++) {
      const double sign = task % 2 == 0 ? 1.0 : -1.0;
      const ControlVector probe{u.values + sign * h * dirs[task / 2].values};
      values[task] = evaluate_objective(problem, probe).J_eps;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min(threads, 2 * directions); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (int d = 0; d < directions; ++d) {
    const double fd = (values[2 * d] - values[2 * d + 1]) / (2.0 * h);
    const double ad = inner(report.gradient, dirs[d], mesh);
    const double scale = std::max(std::abs(fd), std::abs(ad));
    const double err = scale == 0.0 ? 0.0 : std::abs(fd - ad) / scale;
    report.finite_difference.push_back(fd);
    report.adjoint.push_back(ad);
    report.relative_error.push_back(err);
    report.max_relative_error = std::max(report.max_relative_error, err);
  }
  return report;
}

namespace {

void write_snapshots(const fs::path& out, const StateTrajectory& y, const Config& config, const Grid& grid,
                     const TimeMesh& mesh) {
  std::vector<const Field*> fields;
  std::vector<double> times;
  for (double t : config.snapshot_times) {
    const int n = mesh.node_index(t);
    const Field& f = y.at(n);
    const std::string stem = fmt::format("y_t{:07.3f}", mesh.time(n));
    write_matrix(out / (stem + ".txt"), f);
    write_vtk(out / (stem + ".vtk"), f, grid, "tumor_density", mesh.time(n));
    fields.push_back(&f);
    times.push_back(mesh.time(n));
  }
  write_cross_section_csv(out / "cross_section.csv", fields, times, grid);
}

void write_manifest(const fs::path& out, const Config& config, const std::string& command,
                    const nlohmann::json& extra) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["config"] = to_json(config);
  const auto feas = check_feasibility(config.model);
  manifest["derived"] = {{"dt_day", config.model.T / config.nt},
                         {"hx_cm", config.edge / (config.nx + 1)},
                         {"hy_cm", config.edge / (config.ny + 1)},
                         {"gradient_step", config.model.step()},
                         {"feasibility_lhs", feas.lhs},
                         {"feasible", feas.feasible}};
  manifest["result"] = extra;
  std::ofstream f(out / "manifest.json", std::ios::binary);
  f << manifest.dump(2) << '\n';
}

}  // namespace

int cmd_simulate(const Config& config, const fs::path& out, std::ostream& log) {
  fs::create_directories(out);
  const Problem problem = make_problem(config);
  const ControlVector u = make_seed_control(config, problem.mesh);
  const Evaluation e = evaluate(problem, u);

  write_s_csv(out / "s.csv", e.forward.s, problem.params, problem.mesh);
  write_u_csv(out / "u.csv", u, problem.mesh);
  write_snapshots(out, e.forward.y, config, problem.grid, problem.mesh);
  const auto viol = constraint_violation(e.forward.s, problem.params, problem.mesh);
  write_manifest(out, config, "simulate",
                 {{"J", e.objective.J},
                  {"J_eps", e.objective.J_eps},
                  {"penalty1", e.objective.penalty1},
                  {"penalty2", e.objective.penalty2},
                  {"max_violation_upper", viol.upper},
                  {"max_violation_lower", viol.lower}});
  log << fmt::format("simulate: J = {:.6g}, J_eps = {:.6g}, final ||y|| = {:.6g}\n", e.objective.J,
                     e.objective.J_eps, l2_norm(e.forward.y.states.back(), problem.grid));
  return kExitOk;
}

int cmd_optimize(const Config& config, const fs::path& out, bool allow_infeasible, std::ostream& log) {
  const auto feas = check_feasibility(config.model);
  if (!feas.feasible && !allow_infeasible) {
    log << fmt::format(
        "optimize: feasibility condition (1-e^(-M0 T))/(1-e^(-M0 t0)) s_minus <= s_plus fails "
        "({:.6g} > {:.6g}); no constant control satisfies both drug bounds. Pass --allow-infeasible to run anyway.\n",
        feas.lhs, feas.rhs);
    return kExitInfeasible;
  }
  fs::create_directories(out);
  const Problem problem = make_problem(config);
  const ControlVector u0 = make_seed_control(config, problem.mesh);

  IterateCsvWriter iterates(out / "iterates.csv");
  const OptimizationResult result = run(problem, u0, [&](const IterateRecord& r) {
    iterates.write(r);
    log << fmt::format("k={:3d}  J_eps={:.8g}  J={:.8g}  pen1={:.4g}  pen2={:.4g}  |grad|={:.4g}\n", r.k, r.J_eps,
                       r.J, r.penalty1, r.penalty2, r.grad_norm);
  });

  const auto& best = result.best;
  write_u_csv(out / "u.csv", result.u, problem.mesh);
  write_u_csv(out / "u0.csv", u0, problem.mesh);
  write_s_csv(out / "s.csv", best.eval.forward.s, problem.params, problem.mesh);
  {
    std::ofstream f(out / "p2.csv", std::ios::binary);
    f << "t_day,p2\n";
    for (int n = 0; n <= problem.mesh.steps(); ++n) {
      f << format_number(problem.mesh.time(n)) << ',' << format_number(best.p2.nodes.values[n]) << '\n';
    }
  }
  write_u_csv(out / "gradient.csv", best.gradient, problem.mesh, "gradient");
  write_snapshots(out, best.eval.forward.y, config, problem.grid, problem.mesh);
  const auto& rec = result.history[static_cast<std::size_t>(result.best_k)];
  write_manifest(out, config, "optimize",
                 {{"stop_reason", to_string(result.reason)},
                  {"iterations", static_cast<int>(result.history.size()) - 1},
                  {"best_k", result.best_k},
                  {"gradient_step", result.step},
                  {"tolerance", result.tolerance},
                  {"J", rec.J},
                  {"J_eps", rec.J_eps},
                  {"max_violation_upper", rec.max_violation_upper},
                  {"max_violation_lower", rec.max_violation_lower}});
  log << fmt::format("optimize: stopped ({}), best iterate k = {}, J_eps = {:.8g}\n", to_string(result.reason),
                     result.best_k, rec.J_eps);
  if (result.reason == StopReason::Diverged) {
    log << "optimize: " << result.message << '\n';
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_gradcheck(const Config& config, const fs::path& out, std::ostream& log) {
  const Problem problem = make_problem(config);
  const ControlVector u = make_seed_control(config, problem.mesh);
  const GradcheckReport r = gradcheck(problem, u, config.gradcheck_directions, config.gradcheck_step, config.seed,
                                      thread_count_from_env());
  for (std::size_t d = 0; d < r.relative_error.size(); ++d) {
    log << fmt::format("direction {}: finite difference {:.12e}  adjoint {:.12e}  relative error {:.3e}\n", d,
                       r.finite_difference[d], r.adjoint[d], r.relative_error[d]);
  }
  log << fmt::format("max relative error {:.3e}\n", r.max_relative_error);
  if (!out.empty()) {
    fs::create_directories(out);
    write_u_csv(out / "gradient.csv", r.gradient, problem.mesh, "gradient");
  }
  return r.max_relative_error <= 1e-3 ? kExitOk : kExitCheckFailed;
}

int cmd_feasibility(const Config& config, std::ostream& log) {
  const auto r = check_feasibility(config.model);
  log << fmt::format("(1-e^(-M0 T))/(1-e^(-M0 t0)) * s_minus = {:.10g}\n", r.lhs);
  log << fmt::format("s_plus = {:.10g}\n", r.rhs);
  log << (r.feasible ? "feasible\n" : "infeasible\n");
  if (r.feasible) {
    const double u = config.model.M0 * config.model.s_minus / -std::expm1(-config.model.M0 * config.model.t0);
    log << fmt::format("reference constant control u = {:.10g} per day\n", u);
  }
  return r.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace tumorctl

#include "fixtures.hpp"

#include "tumorctl/optimizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace tumorctl;

namespace {

Problem tiny_problem(ModelParams p, double amplitude = 1.0, int n = 7, int nt = 56) {
  const Grid g = Grid::uniform(n, n, 3.0, 2.16e-4);
  TumorShape shape;
  shape.amplitude = amplitude;
  return Problem(p, g, TimeMesh(p.T, nt), initial_condition(g, shape));
}

}  // namespace

TEST_CASE("dosing schedule") {
  const TimeMesh mesh(28.0, 2688);
  const ControlVector u = dosing_init(mesh, 12.096, 1.0 / 24.0, 1.0);
  int active = 0, windows = 0;
  for (int n = 0; n < mesh.steps(); ++n) {
    if (u.values[n] != 0.0) {
      ++active;
      if (n == 0 || u.values[n - 1] == 0.0) ++windows;
      REQUIRE(u.values[n] == 12.096);
    }
  }
  CHECK(windows == 28);
  CHECK(active == 28 * 4);
  CHECK(mesh.dt() * u.values.head(96).sum() == doctest::Approx(12.096 / 24.0).epsilon(1e-14));

  const ControlVector full = dosing_init(mesh, 2.5, 1.0, 1.0);
  CHECK(full.values.minCoeff() == 2.5);
  CHECK(full.values.maxCoeff() == 2.5);

  CHECK_THROWS_WITH_AS(dosing_init(TimeMesh(28.0, 280), 1.0, 1.0 / 24.0, 1.0), doctest::Contains("finer nt"),
                       InvalidInput);
  CHECK_THROWS_AS(dosing_init(mesh, 1.0, 2.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(dosing_init(mesh, 1.0, 1.0 / 24.0, 5.0), InvalidInput);
}

TEST_CASE("no tumor and inactive constraints: stationary at the start") {
  ModelParams p = fixtures::unconstrained();
  p.grad_tol = 1e-12;
  const Problem pr = tiny_problem(p, 0.0);
  const OptimizationResult r = run(pr, ControlVector::constant(pr.mesh, 0.0));
  CHECK(r.reason == StopReason::Stationary);
  CHECK(r.history.size() == 1);
  CHECK(r.best_k == 0);
  CHECK(r.history[0].J_eps == 0.0);
  CHECK(r.u.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("large regularization drives the control toward zero") {
  ModelParams p = fixtures::unconstrained();
  p.lambda = 1e3;
  p.N = 8;
  p.tol = 1e-300;
  // a faint tumor keeps the tracking curvature well below lambda
  const Problem pr = tiny_problem(p, 0.01);
  const OptimizationResult r = run(pr, ControlVector::constant(pr.mesh, 1.0));
  REQUIRE(r.history.size() == 9);
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    REQUIRE(r.history[k].control_norm < r.history[k - 1].control_norm);
  }
  CHECK(r.history.back().control_norm < 1e-2 * r.history.front().control_norm);
}

TEST_CASE("default step gives monotone descent on a dosing start") {
  tumorctl::Config c = fixtures::small_config(11, 168);
  const Problem pr = make_problem(c);
  std::vector<IterateRecord> streamed;
  const OptimizationResult r = run(pr, make_seed_control(c, pr.mesh), [&](const IterateRecord& rec) {
    streamed.push_back(rec);
  });
  CHECK(r.reason == StopReason::MaxIterations);
  REQUIRE(r.history.size() == 11);
  CHECK(streamed.size() == r.history.size());
  for (std::size_t k = 1; k < r.history.size(); ++k) REQUIRE(r.history[k].J_eps < r.history[k - 1].J_eps);
  for (const auto& rec : r.history) {
    REQUIRE(std::abs(rec.J_eps - (rec.J + rec.penalty1 + rec.penalty2)) <= 1e-10);
    REQUIRE(rec.grad_norm >= 0.0);
  }
  CHECK(r.best_k == 10);
  CHECK(r.best.eval.objective.J_eps == r.history.back().J_eps);
  CHECK(r.step == doctest::Approx(1.0 / 41.0));
  CHECK(r.tolerance == doctest::Approx(1e-6 * r.history[0].J_eps));

  SUBCASE("identical inputs give identical records") {
    const OptimizationResult again = run(pr, make_seed_control(c, pr.mesh));
    REQUIRE(again.history.size() == r.history.size());
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      REQUIRE(again.history[k].J_eps == r.history[k].J_eps);
      REQUIRE(again.history[k].grad_norm == r.history[k].grad_norm);
    }
    CHECK(again.u.values == r.u.values);
  }
}

TEST_CASE("divergence guard") {
  tumorctl::Config c = fixtures::small_config(7, 56 * 3);
  c.model.delta = 0.07;
  c.model.N = 30;
  const Problem pr = make_problem(c);
  const OptimizationResult r = run(pr, make_seed_control(c, pr.mesh));
  CHECK(r.reason == StopReason::Diverged);
  CHECK(r.message.find("smaller delta") != std::string::npos);
  CHECK(r.best_k < static_cast<int>(r.history.size()) - 1);
  CHECK(r.best.eval.objective.J_eps == r.history[r.best_k].J_eps);
  for (const auto& rec : r.history) REQUIRE(rec.J_eps >= r.history[r.best_k].J_eps);

  SUBCASE("an iterate outside the solvable range also stops the run") {
    c.model.delta = 5.0;
    const Problem wild = make_problem(c);
    const OptimizationResult w = run(wild, make_seed_control(c, wild.mesh));
    CHECK(w.reason == StopReason::Diverged);
    CHECK(w.message.find("could not be evaluated") != std::string::npos);
    CHECK(w.best.eval.objective.J_eps == w.history[w.best_k].J_eps);
  }
}

TEST_CASE("tolerance stop") {
  ModelParams p;
  p.eps = 1.0;
  p.tol = 1e-3;
  p.N = 500;
  const Problem pr = tiny_problem(p);
  const OptimizationResult r = run(pr, reference_constant_control(p, pr.mesh));
  CHECK(r.reason == StopReason::Tolerance);
  const auto& h = r.history;
  const double last = h[h.size() - 2].J_eps - h.back().J_eps;
  CHECK(last >= 0.0);
  CHECK(last < 1e-3);
}

TEST_CASE("clamped iterates stay nonnegative") {
  tumorctl::Config c = fixtures::small_config(7, 168);
  c.model.clamp_nonnegative = true;
  c.model.N = 5;
  const Problem pr = make_problem(c);
  const OptimizationResult r = run(pr, make_seed_control(c, pr.mesh));
  CHECK(r.u.values.minCoeff() >= 0.0);
}

TEST_CASE("stop reasons print") {
  CHECK(std::string(to_string(StopReason::Diverged)) == "diverged");
  CHECK(std::string(to_string(StopReason::Tolerance)) == "tolerance");
  CHECK(std::string(to_string(StopReason::Stationary)) == "stationary");
  CHECK(std::string(to_string(StopReason::MaxIterations)) == "max-iterations");
}

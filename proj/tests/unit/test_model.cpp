#include "tumorctl/drug_ode.hpp"
#include "tumorctl/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace tumorctl;

// high-precision evaluations of the closed forms (mpmath, 40 digits)
constexpr double kLhsDefaults = 0.41245472073488911;
constexpr double kLhsShortActivation = 8.2016597773050355;
constexpr double kReferenceControl = 0.20622753185155996;

TEST_CASE("linear growth law values and derivative") {
  const GrowthLaw d = GrowthLaw::linear(0.1, 0.2);
  CHECK(d(0.2) == 0.0);
  CHECK(d(0.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(d(0.4) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(d.derivative(0.5) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(GrowthLaw::linear(0.2, 0.2).derivative(-3.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(GrowthLaw::linear(0.2, 0.2).derivative(7.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d.lipschitz(1.0) == doctest::Approx(0.5));
  CHECK(d.rho() == 0.1);
}

TEST_CASE("growth law derivative agrees with central differences") {
  const double h = 1e-5;
  const GrowthLaw lin = GrowthLaw::linear(0.1, 0.2);
  const GrowthLaw tab = GrowthLaw::table({{0.0, 0.3}, {0.1, 0.1}, {0.3, -0.2}, {1.0, -0.4}}, 0.1 + 0.1 * 0.1 / 0.15);
  for (double s : {0.03, 0.17, 0.25, 0.55, 0.9}) {
    CHECK(std::abs((lin(s + h) - lin(s - h)) / (2 * h) - lin.derivative(s)) < 1e-8);
    CHECK(std::abs((tab(s + h) - tab(s - h)) / (2 * h) - tab.derivative(s)) < 1e-8);
  }
}

TEST_CASE("sign condition holds on a dense sample") {
  const GrowthLaw d = GrowthLaw::linear(0.1, 0.2);
  for (int i = 0; i <= 10000; ++i) {
    const double s = -2.0 + 4.0 * i / 10000.0;
    if (s == 0.2) continue;
    REQUIRE(d(s) * (s - 0.2) < 0.0);
  }
}

TEST_CASE("table growth law") {
  const GrowthLaw tab = GrowthLaw::table({{0.0, 0.2}, {0.2, 0.0}, {0.6, -0.4}}, 0.2);
  CHECK(tab(0.1) == doctest::Approx(0.1));
  CHECK(tab(0.4) == doctest::Approx(-0.2));
  CHECK(tab(2.0) == doctest::Approx(-0.4));
  CHECK(tab(-1.0) == doctest::Approx(0.2));
  CHECK(tab.rho() == doctest::Approx(0.2));
  CHECK(tab.lipschitz(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)tab.derivative(0.2), NotDifferentiable);
  CHECK(tab.derivative(0.05) == doctest::Approx(-1.0));

  SUBCASE("invalid tables are rejected") {
    CHECK_THROWS_AS(GrowthLaw::table({{0.0, 0.1}, {0.0, -0.1}}, 0.0), InvalidInput);
    CHECK_THROWS_AS(GrowthLaw::table({{0.0, 0.1}, {0.5, 0.2}}, 0.2), InvalidInput);
    CHECK_THROWS_AS(GrowthLaw::table({{0.0, -0.1}, {0.5, 0.2}}, 0.2), InvalidInput);
    CHECK_THROWS_AS(GrowthLaw::table({{0.0, 0.1}, {0.5, -0.1}}, 0.1), InvalidInput);
  }
}

TEST_CASE("penalty functions") {
  CHECK(penalty_f1(0.5, 0.8) == 0.0);
  CHECK(penalty_f1(0.9, 0.8) == doctest::Approx(0.01));
  CHECK(penalty_f1(0.8, 0.8) == 0.0);
  CHECK(penalty_f2(0.5, 0.4) == 0.0);
  CHECK(penalty_f2(0.3, 0.4) == doctest::Approx(0.01));
  CHECK(penalty_f2(0.4, 0.4) == 0.0);
  CHECK(chi_eval(0.3, 10.0, 7.0, 0.4) == doctest::Approx(-0.2));
  CHECK(chi_eval(0.3, 3.0, 7.0, 0.4) == 0.0);
  CHECK(chi_eval(0.5, 10.0, 7.0, 0.4) == 0.0);
}

TEST_CASE("penalties are continuously differentiable at the bounds") {
  const double h = 1e-7;
  for (double b : {0.4, 0.8}) {
    CHECK(std::abs(penalty_f1(b + h, b) - penalty_f1(b - h, b)) < 1e-13);
    CHECK(std::abs(penalty_f2(b + h, b) - penalty_f2(b - h, b)) < 1e-13);
    CHECK(std::abs(penalty_f1_prime(b + h, b) - penalty_f1_prime(b - h, b)) < 1e-6);
    CHECK(std::abs(penalty_f2_prime(b + h, b) - penalty_f2_prime(b - h, b)) < 1e-6);
    CHECK((penalty_f1(b + h, b) - penalty_f1(b, b)) / h == doctest::Approx(penalty_f1_prime(b, b)).epsilon(1e-6));
  }
}

TEST_CASE("chi vanishes wherever the lower penalty does") {
  for (int i = 0; i <= 200; ++i) {
    const double s = -0.5 + i * 0.01;
    for (double t : {7.0, 10.0, 28.0}) {
      if (penalty_f2(s, 0.4) == 0.0) REQUIRE(chi_eval(s, t, 7.0, 0.4) == 0.0);
    }
  }
}

TEST_CASE("feasibility condition") {
  ModelParams p;
  auto r = check_feasibility(p);
  CHECK(r.feasible);
  CHECK(r.lhs == doctest::Approx(kLhsDefaults).epsilon(1e-14));
  CHECK(r.rhs == 0.8);

  p.t0 = 0.1;
  r = check_feasibility(p);
  CHECK_FALSE(r.feasible);
  CHECK(r.lhs == doctest::Approx(kLhsShortActivation).epsilon(1e-13));

  SUBCASE("activation at the horizon reduces to s_minus <= s_plus") {
    ModelParams q;
    q.t0 = q.T * (1 - 1e-12);
    CHECK(check_feasibility(q).lhs == doctest::Approx(q.s_minus).epsilon(1e-9));
    CHECK(check_feasibility(q).feasible);
  }
}

TEST_CASE("feasibility is monotone in the bounds") {
  ModelParams p;
  for (double t0 : {0.5, 1.0, 2.0, 3.0, 7.0, 20.0}) {
    p.t0 = t0;
    bool prev = false;
    for (int i = 1; i <= 60; ++i) {
      p.s_plus = 0.41 + 0.05 * i;
      const bool f = check_feasibility(p).feasible;
      REQUIRE((!prev || f));
      prev = f;
    }
    p.s_plus = 0.8;
    prev = true;
    for (int i = 1; i <= 60; ++i) {
      p.s_minus = 0.01 * i;
      const bool f = check_feasibility(p).feasible;
      REQUIRE((prev || !f));
      prev = f;
    }
    p.s_minus = 0.4;
  }
}

TEST_CASE("reference constant control") {
  ModelParams p;
  const TimeMesh mesh(p.T, 2688);
  const ControlVector u = reference_constant_control(p, mesh);
  CHECK(u.values.size() == 2688);
  CHECK(u.values[0] == doctest::Approx(kReferenceControl).epsilon(1e-14));
  CHECK(u.values.maxCoeff() == u.values.minCoeff());

  const TimeSeries s = solve_s(u, p, mesh);
  const int n0 = mesh.node_index(p.t0);
  CHECK(s.values[n0] == doctest::Approx(p.s_minus).epsilon(1e-13));
  CHECK(s.values[mesh.steps()] < u.values[0] / p.M0);
  for (int n = 0; n <= mesh.steps(); ++n) {
    REQUIRE(s.values[n] <= p.s_plus);
    if (n >= n0) REQUIRE(s.values[n] >= p.s_minus * (1 - 1e-13));
  }

  SUBCASE("RK4 integration of the drug equation reaches s_minus at t0") {
    const double c = u.values[0];
    double s4 = 0.0;
    const int steps = 70000;
    const double h = p.t0 / steps;
    auto f = [&](double v) { return c - p.M0 * v; };
    for (int i = 0; i < steps; ++i) {
      const double k1 = f(s4), k2 = f(s4 + 0.5 * h * k1), k3 = f(s4 + 0.5 * h * k2), k4 = f(s4 + h * k3);
      s4 += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    CHECK(std::abs(s4 - 0.4) < 1e-6);
  }

  SUBCASE("infeasible parameters") {
    p.t0 = 0.1;
    CHECK_THROWS_WITH_AS(reference_constant_control(p, mesh), doctest::Contains("no admissible constant control"),
                         Infeasible);
  }
}

TEST_CASE("parameter validation names the field") {
  ModelParams p;
  p.eps = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("eps"), InvalidInput);
  p = {};
  p.s_minus = 0.9;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = {};
  p.t0 = 30.0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = {};
  p.rho = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = {};
  CHECK(p.default_step() == doctest::Approx(1.0 / 41.0));
}

TEST_CASE("time mesh") {
  const TimeMesh mesh(28.0, 2688);
  CHECK(std::abs(mesh.dt() * mesh.steps() - 28.0) < 1e-12);
  CHECK(mesh.node_index(7.0) == 672);
  CHECK(std::abs(mesh.time(mesh.node_index(7.004)) - 7.004) <= mesh.dt() / 2);
  CHECK_THROWS_AS((void)mesh.node_index(28.5), InvalidInput);
  CHECK_THROWS_AS(TimeMesh(28.0, 0), InvalidInput);
}

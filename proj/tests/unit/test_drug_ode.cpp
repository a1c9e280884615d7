#include "fixtures.hpp"

#include "tumorctl/drug_ode.hpp"

#include <doctest.h>

#include <cmath>

using namespace tumorctl;

namespace {

// classical RK4 on a uniform sub-step; u is constant on each mesh interval
Vector rk4_nodes(const ControlVector& u, double M0, const TimeMesh& mesh, int substeps) {
  Vector out = Vector::Zero(mesh.steps() + 1);
  double s = 0.0;
  const double h = mesh.dt() / substeps;
  for (int n = 0; n < mesh.steps(); ++n) {
    const double c = u.values[n];
    auto f = [&](double v) { return c - M0 * v; };
    for (int i = 0; i < substeps; ++i) {
      const double k1 = f(s), k2 = f(s + 0.5 * h * k1), k3 = f(s + 0.5 * h * k2), k4 = f(s + h * k3);
      s += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    out[n + 1] = s;
  }
  return out;
}

}  // namespace

TEST_CASE("zero control gives zero concentration") {
  const ModelParams p;
  const TimeMesh mesh(p.T, 280);
  const TimeSeries s = solve_s(ControlVector::constant(mesh, 0.0), p, mesh);
  CHECK(s.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(convolution_oracle(ControlVector::constant(mesh, 0.0), p, mesh, 13.0) == 0.0);
}

TEST_CASE("constant control follows the saturating exponential") {
  const ModelParams p;
  const TimeMesh mesh(p.T, 2688);
  const double c = 0.7;
  const ControlVector u = ControlVector::constant(mesh, c);
  const TimeSeries s = solve_s(u, p, mesh);
  for (int n = 0; n <= mesh.steps(); ++n) {
    const double exact = c * -std::expm1(-p.M0 * mesh.time(n)) / p.M0;
    REQUIRE(std::abs(s.values[n] - exact) < 1e-13);
    if (n > 0) {
      REQUIRE(s.values[n] > s.values[n - 1]);
    }
    REQUIRE(s.values[n] < c / p.M0);
  }
  CHECK(convolution_oracle(u, p, mesh, 5.3) == doctest::Approx(c * -std::expm1(-p.M0 * 5.3) / p.M0).epsilon(1e-13));
}

TEST_CASE("random control matches a fine RK4 integration") {
  const ModelParams p;
  const TimeMesh mesh(p.T, 280);
  std::mt19937_64 rng(11);
  const ControlVector u{fixtures::random_vector(rng, 280, -1.0, 3.0)};
  const TimeSeries s = solve_s(u, p, mesh);
  const Vector ref = rk4_nodes(u, p.M0, mesh, 100);
  CHECK((s.values - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("oracle equivalence on every node") {
  const ModelParams p;
  const TimeMesh mesh(p.T, 672);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const ControlVector u{fixtures::random_vector(rng, 672, -2.0, 12.0)};
    const TimeSeries s = solve_s(u, p, mesh);
    for (int n = 0; n <= mesh.steps(); ++n) {
      REQUIRE(std::abs(s.values[n] - convolution_oracle(u, p, mesh, mesh.time(n))) < 1e-12);
    }
  }
  const ControlVector u{fixtures::random_vector(rng, 672, -2.0, 12.0)};
  const Vector all = convolution_oracle_nodes(u, p, mesh);
  for (int n = 0; n <= mesh.steps(); n += 37) {
    REQUIRE(std::abs(all[n] - convolution_oracle(u, p, mesh, mesh.time(n))) < 1e-12);
  }
  CHECK_THROWS_AS((void)convolution_oracle(ControlVector::constant(mesh, 1.0), p, mesh, 28.5), InvalidInput);
  CHECK_THROWS_AS((void)convolution_oracle(ControlVector::constant(mesh, 1.0), p, mesh, -0.1), InvalidInput);
}

TEST_CASE("linearity and nonnegativity") {
  const ModelParams p;
  const TimeMesh mesh(p.T, 672);
  std::mt19937_64 rng(5);
  const ControlVector u1{fixtures::random_vector(rng, 672, -1.0, 1.0)};
  const ControlVector u2{fixtures::random_vector(rng, 672, 0.0, 5.0)};
  const double a = 1.7, b = -0.3;
  const TimeSeries s12 = solve_s({a * u1.values + b * u2.values}, p, mesh);
  const TimeSeries s1 = solve_s(u1, p, mesh), s2 = solve_s(u2, p, mesh);
  CHECK((s12.values - (a * s1.values + b * s2.values)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s2.values.minCoeff() >= 0.0);
}

TEST_CASE("length mismatch is reported") {
  const ModelParams p;
  const TimeMesh mesh(p.T, 100);
  CHECK_THROWS_AS(solve_s(ControlVector{Vector::Zero(99)}, p, mesh), InvalidInput);
}

TEST_CASE("a-priori bounds") {
  ModelParams p;
  const TimeMesh mesh(p.T, 2688);

  SUBCASE("zero control: equality 0 <= 0") {
    const ControlVector u = ControlVector::constant(mesh, 0.0);
    const BoundsReport r = verify_bounds(u, solve_s(u, p, mesh), p, mesh);
    CHECK(r.pointwise_slack == 0.0);
    CHECK(r.l2_slack == 0.0);
    CHECK(r.derivative_slack == 0.0);
  }
  SUBCASE("unit control: strictly positive slack") {
    const ControlVector u = ControlVector::constant(mesh, 1.0);
    const BoundsReport r = verify_bounds(u, solve_s(u, p, mesh), p, mesh);
    CHECK(r.u_norm == doctest::Approx(std::sqrt(28.0)));
    CHECK(r.pointwise_slack == 0.0);  // attained at t = 0
    CHECK(r.l2_slack > 0.0);
    CHECK(r.derivative_slack > 0.0);
  }
  SUBCASE("tampered trajectory is caught and named") {
    const ControlVector u = ControlVector::constant(mesh, 1.0);
    TimeSeries s = solve_s(u, p, mesh);
    s.values[1] = 10.0;
    CHECK_THROWS_WITH_AS(verify_bounds(u, s, p, mesh), doctest::Contains("sqrt(t)"), BoundViolation);
  }
  SUBCASE("random controls") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const ControlVector u{fixtures::random_vector(rng, mesh.steps(), -5.0, 15.0)};
      CHECK_NOTHROW(verify_bounds(u, solve_s(u, p, mesh), p, mesh));
    }
  }
}

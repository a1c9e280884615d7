#include "tumorctl/commands.hpp"
#include "tumorctl/config.hpp"
#include "tumorctl/drug_ode.hpp"
#include "tumorctl/optimizer.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace tumorctl;

namespace {

py::array_t<double> as_array(const Field& f) {
  py::array_t<double> out({f.ny, f.nx});
  std::copy(f.values.data(), f.values.data() + f.values.size(), out.mutable_data());
  return out;
}

ControlVector control(const Vector& u, const TimeMesh& mesh) {
  ControlVector c{u};
  check_length(c, mesh);
  return c;
}

py::dict objective_dict(const ObjectiveBreakdown& o) {
  py::dict d;
  d["tracking"] = o.tracking;
  d["control"] = o.control;
  d["J"] = o.J;
  d["penalty1"] = o.penalty1;
  d["penalty2"] = o.penalty2;
  d["J_eps"] = o.J_eps;
  d["f1_integral"] = o.f1_integral;
  d["f2_integral"] = o.f2_integral;
  return d;
}

py::dict record_dict(const IterateRecord& r) {
  py::dict d;
  d["k"] = r.k;
  d["J"] = r.J;
  d["J_eps"] = r.J_eps;
  d["penalty1"] = r.penalty1;
  d["penalty2"] = r.penalty2;
  d["grad_norm"] = r.grad_norm;
  d["max_violation_upper"] = r.max_violation_upper;
  d["max_violation_lower"] = r.max_violation_lower;
  d["control_norm"] = r.control_norm;
  return d;
}

py::dict evaluation_dict(const Problem& pr, const Evaluation& e, const std::vector<double>& snapshot_times) {
  py::dict d;
  d["t"] = pr.mesh.times();
  d["s"] = e.forward.s.values;
  d["objective"] = objective_dict(e.objective);
  const ConstraintViolation v = constraint_violation(e.forward.s, pr.params, pr.mesh);
  d["violation_upper"] = v.upper;
  d["violation_lower"] = v.lower;
  py::dict snaps;
  for (double t : snapshot_times) snaps[py::float_(t)] = as_array(e.forward.y.at(pr.mesh.node_index(t)));
  d["snapshots"] = snaps;
  d["final"] = as_array(e.forward.y.states.back());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal drug dosing for a reaction-diffusion tumor model";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<Infeasible>(m, "Infeasible", PyExc_RuntimeError);
  py::register_exception<SolveFailure>(m, "SolveFailure", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("M0", &ModelParams::M0)
      .def_readwrite("lam", &ModelParams::lambda)
      .def_readwrite("eps", &ModelParams::eps)
      .def_readwrite("s_minus", &ModelParams::s_minus)
      .def_readwrite("s_plus", &ModelParams::s_plus)
      .def_readwrite("s_m", &ModelParams::s_m)
      .def_readwrite("t0", &ModelParams::t0)
      .def_readwrite("T", &ModelParams::T)
      .def_readwrite("rho", &ModelParams::rho)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("N", &ModelParams::N)
      .def_readwrite("tol", &ModelParams::tol)
      .def_readwrite("grad_tol", &ModelParams::grad_tol)
      .def_readwrite("clamp_nonnegative", &ModelParams::clamp_nonnegative)
      .def_readwrite("growth_table", &ModelParams::growth_table)
      .def("validate", &ModelParams::validate)
      .def("default_step", &ModelParams::default_step)
      .def("step", &ModelParams::step)
      .def("growth_rate", [](const ModelParams& p, double s) { return p.growth_law()(s); });

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_static("preset", &preset, py::arg("name"))
      .def_static("parse", [](const std::string& text, const Config& base) { return parse_config(text, base); },
                  py::arg("text"), py::arg("base") = Config{})
      .def_static("load",
                  [](const std::filesystem::path& path, const Config& base) { return load_config(path, base); },
                  py::arg("path"), py::arg("base") = Config{})
      .def("to_json", [](const Config& c) { return to_json(c).dump(); })
      .def("validate", &Config::validate)
      .def_readwrite("model", &Config::model)
      .def_readwrite("edge", &Config::edge)
      .def_readwrite("nx", &Config::nx)
      .def_readwrite("ny", &Config::ny)
      .def_readwrite("nt", &Config::nt)
      .def_readwrite("diffusion", &Config::diffusion)
      .def_readwrite("dose_rate", &Config::dose_rate)
      .def_readwrite("dose_window", &Config::dose_window)
      .def_readwrite("dose_period", &Config::dose_period)
      .def_readwrite("snapshot_times", &Config::snapshot_times)
      .def_property(
          "seed_control", [](const Config& c) { return std::string(to_string(c.seed_control)); },
          [](Config& c, const std::string& name) { c.seed_control = parse_seed_control(name); });

  py::class_<Problem>(m, "Problem")
      .def(py::init(&make_problem), py::arg("config"))
      .def_readonly("params", &Problem::params)
      .def_property_readonly("nx", [](const Problem& p) { return p.grid.nx(); })
      .def_property_readonly("ny", [](const Problem& p) { return p.grid.ny(); })
      .def_property_readonly("nt", [](const Problem& p) { return p.mesh.steps(); })
      .def_property_readonly("dt", [](const Problem& p) { return p.mesh.dt(); })
      .def_property_readonly("times", [](const Problem& p) { return p.mesh.times(); })
      .def_property_readonly("x", [](const Problem& p) {
        std::vector<double> x(p.grid.nx());
        for (int i = 0; i < p.grid.nx(); ++i) x[i] = p.grid.x(i);
        return x;
      })
      .def_property_readonly("initial_state", [](const Problem& p) { return as_array(p.y0); });

  m.def("seed_control", [](const Config& c) { return make_seed_control(c, make_mesh(c)).values; },
        py::arg("config"), "Initial control selected by config.seed_control.");

  m.def(
      "check_feasibility",
      [](const ModelParams& p) {
        const FeasibilityReport r = check_feasibility(p);
        py::dict d;
        d["lhs"] = r.lhs;
        d["rhs"] = r.rhs;
        d["feasible"] = r.feasible;
        return d;
      },
      py::arg("params"));

  m.def(
      "reference_constant_control",
      [](const ModelParams& p, int nt) { return reference_constant_control(p, TimeMesh(p.T, nt)).values; },
      py::arg("params"), py::arg("nt"));

  m.def(
      "solve_s",
      [](const Vector& u, const ModelParams& p) {
        const TimeMesh mesh(p.T, static_cast<int>(u.size()));
        return solve_s(control(u, mesh), p, mesh).values;
      },
      py::arg("u"), py::arg("params"), "Drug concentration on the nt + 1 nodes for one control value per step.");

  m.def(
      "dosing_init",
      [](double T, int nt, double rate, double window, double period) {
        return dosing_init(TimeMesh(T, nt), rate, window, period).values;
      },
      py::arg("T"), py::arg("nt"), py::arg("dose_rate"), py::arg("window"), py::arg("period") = 1.0);

  m.def(
      "simulate",
      [](const Problem& pr, const Vector& u, const std::vector<double>& snapshot_times) {
        Evaluation e;
        {
          py::gil_scoped_release nogil;
          e = evaluate(pr, control(u, pr.mesh));
        }
        return evaluation_dict(pr, e, snapshot_times);
      },
      py::arg("problem"), py::arg("u"), py::arg("snapshot_times") = std::vector<double>{});

  m.def(
      "gradient",
      [](const Problem& pr, const Vector& u) {
        GradientEvaluation g;
        {
          py::gil_scoped_release nogil;
          g = evaluate_with_gradient(pr, control(u, pr.mesh));
        }
        py::dict d;
        d["gradient"] = g.gradient.values;
        d["grad_norm"] = g.grad_norm;
        d["p2"] = g.p2.nodes.values;
        d["p2_interval"] = g.p2.interval;
        d["s"] = g.eval.forward.s.values;
        d["objective"] = objective_dict(g.eval.objective);
        return d;
      },
      py::arg("problem"), py::arg("u"));

  m.def(
      "optimize",
      [](const Problem& pr, const Vector& u0, const std::function<void(py::dict)>& callback,
         const std::vector<double>& snapshot_times) {
        OptimizationResult r;
        {
          py::gil_scoped_release nogil;
          IterateCallback cb;
          if (callback) {
            cb = [&](const IterateRecord& rec) {
              py::gil_scoped_acquire gil;
              callback(record_dict(rec));
            };
          }
          r = run(pr, control(u0, pr.mesh), cb);
        }
        py::list history;
        for (const auto& rec : r.history) history.append(record_dict(rec));
        py::dict d = evaluation_dict(pr, r.best.eval, snapshot_times);
        d["u"] = r.u.values;
        d["best_k"] = r.best_k;
        d["history"] = history;
        d["reason"] = std::string(to_string(r.reason));
        d["message"] = r.message;
        d["step"] = r.step;
        d["tolerance"] = r.tolerance;
        d["gradient"] = r.best.gradient.values;
        d["p2"] = r.best.p2.nodes.values;
        return d;
      },
      py::arg("problem"), py::arg("u0"), py::arg("callback") = nullptr,
      py::arg("snapshot_times") = std::vector<double>{});

  m.def(
      "gradcheck",
      [](const Problem& pr, const Vector& u, int directions, double h, std::uint64_t seed, int threads) {
        GradcheckReport r;
        {
          py::gil_scoped_release nogil;
          r = gradcheck(pr, control(u, pr.mesh), directions, h, seed, threads);
        }
        py::dict d;
        d["gradient"] = r.gradient.values;
        d["finite_difference"] = r.finite_difference;
        d["adjoint"] = r.adjoint;
        d["relative_error"] = r.relative_error;
        d["max_relative_error"] = r.max_relative_error;
        return d;
      },
      py::arg("problem"), py::arg("u"), py::arg("directions") = 5, py::arg("h") = 1e-5,
      py::arg("seed") = 20240601, py::arg("threads") = 1);
}

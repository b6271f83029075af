#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semiflow/bundle.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/families.hpp"
#include "semiflow/fluid.hpp"
#include "semiflow/io.hpp"
#include "semiflow/selection.hpp"
#include "semiflow/skorokhod.hpp"
#include "semiflow/trajectory.hpp"

namespace py = pybind11;
using namespace semiflow;

namespace {

py::dict report_dict(const MetricReport& r) {
  py::list terms;
  for (const auto& t : r.terms) terms.append(py::make_tuple(t.M, t.k, t.dM));
  py::dict d;
  d["value"] = r.value;
  d["N"] = r.truncation_N;
  d["tail_bound"] = r.tail_bound;
  d["terms"] = terms;
  return d;
}

py::dict selection_dict(const SelectionResult& r) {
  py::list trace;
  for (const auto& t : r.trace) {
    py::dict rec;
    rec["i"] = t.i;
    rec["lambda"] = t.lambda;
    rec["k"] = t.k;
    rec["survivors"] = t.survivors;
    rec["min_value"] = t.min_value;
    trace.append(rec);
  }
  py::dict d;
  d["selected"] = r.selected;
  d["trace"] = trace;
  d["coincidence_fallback"] = r.coincidence_fallback;
  return d;
}

py::list violations(const std::vector<Violation>& vs) {
  py::list out;
  for (const auto& v : vs) {
    py::dict d;
    d["property"] = v.property;
    d["key"] = v.key;
    d["T"] = v.T;
    d["distance"] = v.distance ? py::cast(*v.distance) : py::none();
    out.append(d);
  }
  return out;
}

SelectionConfig make_config(double tie_tol, double quad_tol, std::size_t max_iters) {
  SelectionConfig cfg;
  cfg.tie_tol = tie_tol;
  cfg.quad_tol = quad_tol;
  cfg.max_iters = max_iters;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semiflow selection over finite trajectory bundles";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<UnknownInitialPoint>(m, "UnknownInitialPoint", error.ptr());
  py::register_exception<NonSingleton>(m, "NonSingleton", error.ptr());
  py::register_exception<MissingEnergyCoordinate>(m, "MissingEnergyCoordinate", error.ptr());

  py::class_<Trajectory>(m, "Trajectory")
      .def_static("constant", &Trajectory::constant, py::arg("value"))
      .def_static("from_json", [](const std::string& s) { return io::trajectory_from_json(io::parse(s)); })
      .def_static(
          "steps",
          [](std::vector<double> initial, std::vector<std::pair<double, std::vector<double>>> pieces,
             std::vector<double> tail) {
            TrajectoryBuilder b(std::move(initial));
            for (auto& [t, v] : pieces) b.constant_until(t, std::move(v));
            return std::move(b).finish(std::move(tail));
          },
          py::arg("initial"), py::arg("pieces"), py::arg("tail"),
          "Piecewise constant path; each piece (t, v) holds v up to time t.")
      .def_static(
          "ramps",
          [](std::vector<double> initial, std::vector<std::pair<double, std::vector<double>>> knots,
             std::vector<double> tail) {
            TrajectoryBuilder b(initial);
            std::vector<double> prev = std::move(initial);
            for (auto& [t, v] : knots) {
              b.linear_until(t, prev, v);
              prev = std::move(v);
            }
            return std::move(b).finish(std::move(tail));
          },
          py::arg("initial"), py::arg("knots"), py::arg("tail"),
          "Continuous piecewise linear path through the knots (t, v).")
      .def("to_json", [](const Trajectory& phi) { return io::dump(io::to_json(phi)); })
      .def_property_readonly("dim", &Trajectory::dim)
      .def_property_readonly("breakpoints", &Trajectory::breakpoints)
      .def_property_readonly("tail", &Trajectory::tail)
      .def("eval", py::overload_cast<double>(&Trajectory::eval, py::const_), py::arg("t"))
      .def("right_limit", py::overload_cast<double>(&Trajectory::right_limit, py::const_), py::arg("t"))
      .def(py::self == py::self)
      .def("__repr__", [](const Trajectory& phi) { return "Trajectory(" + io::dump(io::to_json(phi)) + ")"; });

  m.def("project", &project, py::arg("phi"), py::arg("k"));
  m.def("disc_set", &disc_set, py::arg("phi"), py::arg("horizon"));
  m.def("shift", &shift, py::arg("phi"), py::arg("T"));
  m.def("continue_at", &continue_at, py::arg("phi1"), py::arg("phi2"), py::arg("T"));
  m.def("normalized", &normalized, py::arg("phi"));

  m.def(
      "d_M", [](const Trajectory& a, const Trajectory& b, double horizon) { return d_M(a, b, horizon); },
      py::arg("phi"), py::arg("psi"), py::arg("horizon"));
  m.def(
      "d_inf", [](const Trajectory& a, const Trajectory& b, int N) { return report_dict(d_inf(a, b, N)); },
      py::arg("phi"), py::arg("psi"), py::arg("N") = 12);
  m.def("truncation_tail_bound", &truncation_tail_bound, py::arg("N"));

  m.def(
      "eval_functional",
      [](const Trajectory& phi, double lambda, std::size_t k) {
        SelectionFunctional f;
        f.lambda = lambda;
        f.k = k;
        return eval_functional(phi, f);
      },
      py::arg("phi"), py::arg("lam") = 1.0, py::arg("k") = 1);
  m.def("dyadic_lambda", &dyadic_lambda, py::arg("j"));
  m.def("cantor_index", &cantor_index, py::arg("i"), py::arg("dim"));

  py::class_<Bundle>(m, "Bundle")
      .def(py::init<std::size_t, double, std::vector<double>, std::optional<std::size_t>,
                    std::optional<double>>(),
           py::arg("dim"), py::arg("quantum") = kDefaultQuantum, py::arg("time_grid") = std::vector<double>{},
           py::arg("energy_index") = py::none(), py::arg("horizon") = py::none())
      .def_static("from_json", [](const std::string& s) { return io::bundle_from_json(io::parse(s)); })
      .def("to_json", [](const Bundle& b) { return io::dump(io::to_json(b)); })
      .def("insert", &Bundle::insert, py::arg("phi"))
      .def("erase", &Bundle::erase, py::arg("phi"))
      .def("at", &Bundle::at, py::arg("x"))
      .def("keys",
           [](const Bundle& b) {
             std::vector<Point> keys;
             for (const auto& e : b.entries()) keys.push_back(e.key);
             return keys;
           })
      .def_property_readonly("dim", &Bundle::dim)
      .def_property_readonly("time_grid", &Bundle::time_grid)
      .def_property_readonly("key_count", &Bundle::key_count)
      .def_property_readonly("trajectory_count", &Bundle::trajectory_count);

  m.def(
      "verify_P4", [](const Bundle& b, double tol) { return violations(verify_P4(b, {tol})); },
      py::arg("bundle"), py::arg("tol") = 0.0);
  m.def(
      "verify_P5", [](const Bundle& b, double tol) { return violations(verify_P5(b, {tol})); },
      py::arg("bundle"), py::arg("tol") = 0.0);
  m.def(
      "generate_closure", [](const Bundle& b) { return generate_closure(b).bundle; }, py::arg("bundle"));

  m.def(
      "select",
      [](const Bundle& b, const Point& x, double tie_tol, double quad_tol, std::size_t max_iters,
         bool energy_first) {
        const SelectionConfig cfg = make_config(tie_tol, quad_tol, max_iters);
        return selection_dict(energy_first ? energy_first_select(b, x, cfg) : select(b, x, cfg));
      },
      py::arg("bundle"), py::arg("x"), py::arg("tie_tol") = 1e-8, py::arg("quad_tol") = 1e-9,
      py::arg("max_iters") = 64, py::arg("energy_first") = false);
  m.def(
      "semigroup_check",
      [](const Bundle& b, const Point& x, double t1, const std::vector<double>& t2s, double tol) {
        const SelectFn fn = [](const Bundle& bb, const Point& y) { return select(bb, y).selected; };
        const SemigroupVerdict v = semigroup_check(fn, b, x, t1, t2s, tol);
        std::vector<std::tuple<double, double, bool>> samples;
        for (const auto& s : v.samples) samples.emplace_back(s.t2, s.gap, s.ok);
        return py::make_tuple(v.holds, samples);
      },
      py::arg("bundle"), py::arg("x"), py::arg("t1"), py::arg("t2_grid"), py::arg("tol") = 1e-9);

  m.def(
      "gen_sqrt_ode_bundle",
      [](double alpha, double c, std::vector<double> waiting_times, double horizon,
         std::size_t samples_per_unit, std::vector<double> time_grid) {
        SqrtOdeFamily f;
        f.alpha = alpha;
        f.c = c;
        f.waiting_times = std::move(waiting_times);
        f.horizon = horizon;
        f.samples_per_unit = samples_per_unit;
        f.time_grid = std::move(time_grid);
        return gen_sqrt_ode_bundle(f);
      },
      py::arg("alpha") = 0.5, py::arg("c") = 1.0,
      py::arg("waiting_times") = SqrtOdeFamily{}.waiting_times, py::arg("horizon") = 8.0,
      py::arg("samples_per_unit") = 16, py::arg("time_grid") = SqrtOdeFamily{}.time_grid);
  m.def("gen_step_family", &gen_step_family, py::arg("heights"), py::arg("jump_times"),
        py::arg("horizon"));

  py::class_<PressureLaw>(m, "PressureLaw")
      .def(py::init([](double a, double gamma) { return PressureLaw{a, gamma}; }), py::arg("a") = 1.0,
           py::arg("gamma") = 1.0)
      .def_readwrite("a", &PressureLaw::a)
      .def_readwrite("gamma", &PressureLaw::gamma);

  py::class_<FluidState>(m, "FluidState")
      .def(py::init([](double length, std::vector<double> rho, std::vector<double> mom, double energy) {
             FluidState s;
             s.length = length;
             s.rho = std::move(rho);
             s.m = std::move(mom);
             s.energy = energy;
             s.validate();
             return s;
           }),
           py::arg("length"), py::arg("rho"), py::arg("m"), py::arg("E"))
      .def_readonly("length", &FluidState::length)
      .def_readonly("rho", &FluidState::rho)
      .def_readonly("m", &FluidState::m)
      .def_readonly("E", &FluidState::energy);

  m.def("pressure", &pressure, py::arg("law"), py::arg("rho"));
  m.def("pressure_potential", &pressure_potential, py::arg("law"), py::arg("rho"));
  m.def("energy_functional", &energy_functional, py::arg("state"), py::arg("law"));
  m.def("d_membership", &d_membership, py::arg("state"), py::arg("law"));
  m.def("admissible_leq", &admissible_leq, py::arg("e1"), py::arg("e2"), py::arg("grid"));
  m.def("embed_state", &embed_state, py::arg("state"), py::arg("n_modes"), py::arg("sobolev_order") = 2.0);
}

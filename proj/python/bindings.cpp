#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bgkpi/bgk_rhs.hpp"
#include "bgkpi/cli_io.hpp"
#include "bgkpi/config.hpp"
#include "bgkpi/error.hpp"
#include "bgkpi/integrators.hpp"
#include "bgkpi/linear_analysis.hpp"
#include "bgkpi/phase_space.hpp"

namespace py = pybind11;
using namespace bgkpi;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array to_array_2d(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  Array out({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> from_array(const Array& a) { return {a.data(), a.data() + a.size()}; }

py::dict moments_dict(const MomentField& m) {
  const auto n = m.size();
  const auto d = static_cast<std::size_t>(m.dim);
  py::dict out;
  out["rho"] = to_array(m.rho);
  out["u"] = to_array_2d(m.u, n, d);
  out["T"] = to_array(m.T);
  out["E"] = to_array(m.E);
  out["q"] = to_array_2d(m.q, n, d);
  return out;
}

py::dict cell_moments_dict(const CellMoments& m, int dim) {
  py::dict out;
  out["rho"] = m.rho;
  out["u"] = std::vector<double>(m.u.begin(), m.u.begin() + dim);
  out["T"] = m.T;
  out["E"] = m.E;
  out["q"] = std::vector<double>(m.q.begin(), m.q.begin() + dim);
  return out;
}

DistributionField field_for(const ScenarioConfig& config, const Array& f) {
  auto space = build_phase_space(config);
  if (static_cast<std::size_t>(f.size()) != space->size())
    throw Error(ErrorKind::DimensionMismatch, "distribution has " + std::to_string(f.size()) +
                                                  " values, the phase space has " +
                                                  std::to_string(space->size()));
  return DistributionField(space, from_array(f));
}

Array field_array(const DistributionField& f) {
  return to_array_2d(f.values(), f.spatial().size(), f.velocity().size());
}

// Owned by the module for the life of the interpreter.
PyObject* instability_type = nullptr;

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-velocity BGK solver with projective integration.";

  auto base = py::register_exception<Error>(m, "BgkpiError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ConfigParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ConfigValidationError", PyExc_ValueError);
  instability_type = py::exception<InstabilityError>(m, "InstabilityError", base.ptr()).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InstabilityError& e) {
      py::object err = py::handle(instability_type)(e.what());
      const auto& c = e.context();
      err.attr("kind") = std::string(to_string(e.kind()));
      err.attr("cell") = c.cell ? py::cast(*c.cell) : py::none();
      err.attr("stage") = c.stage ? py::cast(*c.stage) : py::none();
      err.attr("inner_step") = c.inner_step ? py::cast(*c.inner_step) : py::none();
      err.attr("outer_step") = c.outer_step ? py::cast(*c.outer_step) : py::none();
      err.attr("time") = c.time ? py::cast(*c.time) : py::none();
      PyErr_SetObject(instability_type, err.ptr());
    }
  });

  py::enum_<Reconstruction>(m, "Reconstruction")
      .value("upwind1", Reconstruction::upwind1)
      .value("weno2", Reconstruction::weno2)
      .value("weno3", Reconstruction::weno3);
  py::enum_<Boundary>(m, "Boundary").value("outflow", Boundary::outflow).value("periodic", Boundary::periodic);
  py::enum_<MaxwellianMode>(m, "MaxwellianMode")
      .value("analytic", MaxwellianMode::analytic)
      .value("corrected", MaxwellianMode::corrected);
  py::enum_<Method>(m, "Method")
      .value("fe", Method::fe)
      .value("rk4", Method::rk4)
      .value("pfe", Method::pfe)
      .value("prk", Method::prk);

  py::class_<ButcherTableau>(m, "ButcherTableau")
      .def(py::init([](std::string name, std::vector<double> a, std::vector<double> b, std::vector<double> c) {
             return ButcherTableau{std::move(name), std::move(a), std::move(b), std::move(c)};
           }),
           py::arg("name"), py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readwrite("name", &ButcherTableau::name)
      .def_readwrite("a", &ButcherTableau::a)
      .def_readwrite("b", &ButcherTableau::b)
      .def_readwrite("c", &ButcherTableau::c)
      .def_property_readonly("stages", &ButcherTableau::stages)
      .def("__eq__", [](const ButcherTableau& x, const ButcherTableau& y) { return x == y; })
      .def("__repr__", [](const ButcherTableau& t) { return "<ButcherTableau '" + t.name + "'>"; });
  m.def("tableau", &tableau_by_name, py::arg("name"));
  m.def("known_tableaus", &known_tableaus);
  m.def("validate_tableau", &validate_tableau, py::arg("tableau"));

  py::class_<VelocityGrid>(m, "VelocityGrid")
      .def(py::init<int, int, double>(), py::arg("dim"), py::arg("nodes_per_axis"), py::arg("bound"))
      .def_property_readonly("dim", &VelocityGrid::dim)
      .def_property_readonly("nodes_per_axis", &VelocityGrid::nodes_per_axis)
      .def_property_readonly("size", &VelocityGrid::size)
      .def_property_readonly("bound", &VelocityGrid::bound)
      .def_property_readonly("spacing", &VelocityGrid::spacing)
      .def_property_readonly("weight", &VelocityGrid::weight)
      .def_property_readonly("axis_nodes", [](const VelocityGrid& g) {
        return to_array({g.axis_nodes().begin(), g.axis_nodes().end()});
      })
      .def_property_readonly("nodes", [](const VelocityGrid& g) {
        std::vector<double> v;
        for (std::size_t j = 0; j < g.size(); ++j)
          for (int d = 0; d < g.dim(); ++d) v.push_back(g.component(j, d));
        return to_array_2d(v, g.size(), static_cast<std::size_t>(g.dim()));
      });

  m.def(
      "maxwellian",
      [](double rho, std::vector<double> u, double T, const VelocityGrid& grid, bool corrected) {
        if (static_cast<int>(u.size()) != grid.dim())
          throw Error(ErrorKind::DimensionMismatch, "velocity has " + std::to_string(u.size()) +
                                                        " components, the grid has dimension " +
                                                        std::to_string(grid.dim()));
        std::vector<double> out(grid.size());
        if (corrected)
          corrected_maxwellian(rho, u, T, grid, out);
        else
          maxwellian(rho, u, T, grid, out);
        return to_array(out);
      },
      py::arg("rho"), py::arg("u"), py::arg("T"), py::arg("grid"), py::arg("corrected") = false);
  m.def(
      "profile_moments",
      [](const Array& f, const VelocityGrid& grid) {
        if (static_cast<std::size_t>(f.size()) != grid.size())
          throw Error(ErrorKind::DimensionMismatch, "profile length does not match the velocity grid");
        return cell_moments_dict(profile_moments_full(from_array(f), grid), grid.dim());
      },
      py::arg("f"), py::arg("grid"));

  py::class_<ScenarioConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("schema_version", &ScenarioConfig::schema_version)
      .def_readwrite("scenario", &ScenarioConfig::scenario)
      .def_readwrite("cells", &ScenarioConfig::cells)
      .def_readwrite("domain", &ScenarioConfig::domain)
      .def_readwrite("boundary", &ScenarioConfig::boundary)
      .def_readwrite("velocity_dim", &ScenarioConfig::velocity_dim)
      .def_readwrite("velocity_nodes", &ScenarioConfig::velocity_nodes)
      .def_readwrite("velocity_bound", &ScenarioConfig::velocity_bound)
      .def_readwrite("epsilon", &ScenarioConfig::epsilon)
      .def_readwrite("reconstruction", &ScenarioConfig::reconstruction)
      .def_readwrite("weno_epsilon", &ScenarioConfig::weno_epsilon)
      .def_readwrite("maxwellian", &ScenarioConfig::maxwellian)
      .def_readwrite("method", &ScenarioConfig::method)
      .def_readwrite("tableau", &ScenarioConfig::tableau)
      .def_readwrite("dt", &ScenarioConfig::dt)
      .def_readwrite("inner_steps", &ScenarioConfig::inner_steps)
      .def_readwrite("outer_dt", &ScenarioConfig::outer_dt)
      .def_readwrite("advise", &ScenarioConfig::advise)
      .def_readwrite("cfl_fraction", &ScenarioConfig::cfl_fraction)
      .def_readwrite("t_end", &ScenarioConfig::t_end)
      .def_readwrite("snapshot_times", &ScenarioConfig::snapshot_times)
      .def_readwrite("output_dir", &ScenarioConfig::output_dir)
      .def_readwrite("dump_distribution", &ScenarioConfig::dump_distribution)
      .def_readwrite("progress_every", &ScenarioConfig::progress_every)
      .def_readwrite("wave_amplitude", &ScenarioConfig::wave_amplitude)
      .def("__eq__", [](const ScenarioConfig& x, const ScenarioConfig& y) { return x == y; });

  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<config>");
  m.def("load_config", &load_config, py::arg("path"));
  m.def("validate_config", &validate_config, py::arg("config"));
  m.def("serialize_config", &serialize_config, py::arg("config"));

  m.def(
      "velocity_grid", [](const ScenarioConfig& c) { return build_phase_space(c)->v; }, py::arg("config"));
  m.def(
      "initial_field",
      [](const ScenarioConfig& c) { return field_array(build_initial_field(c, build_phase_space(c))); },
      py::arg("config"));
  m.def(
      "moments", [](const ScenarioConfig& c, const Array& f) { return moments_dict(compute_moments(field_for(c, f))); },
      py::arg("config"), py::arg("f"));
  m.def(
      "rhs",
      [](const ScenarioConfig& c, const Array& f) { return field_array(rhs(field_for(c, f), build_settings(c))); },
      py::arg("config"), py::arg("f"));
  m.def(
      "step",
      [](const ScenarioConfig& c, const Array& f) {
        const auto field = field_for(c, f);
        BgkSystem system(field.space_ptr(), build_settings(c));
        const MethodSpec spec = method_for(c);
        std::vector<double> out;
        switch (spec.method) {
          case Method::fe: out = forward_euler_step(system, field.values(), spec.dt); break;
          case Method::rk4: out = rk4_step(system, field.values(), spec.dt); break;
          case Method::pfe: out = pfe_step(system, field.values(), spec.projective_parameters()); break;
          case Method::prk:
            out = prk_step(system, field.values(), spec.tableau, spec.projective_parameters());
            break;
        }
        return field_array(DistributionField(field.space_ptr(), std::move(out)));
      },
      py::arg("config"), py::arg("f"), "One step of the configured method (one outer step when projective).");

  m.def(
      "run",
      [](const ScenarioConfig& c, bool write_files) {
        std::ostringstream log;
        RunOptions options;
        options.write_files = write_files;
        options.quiet = true;
        options.log = &log;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario(c, options);
        }
        py::list snapshots;
        for (const auto& s : r.snapshots) {
          py::dict d = moments_dict(s.moments);
          d["t"] = s.t;
          std::vector<double> x;
          for (const auto& p : s.x)
            for (int a = 0; a < s.dim_x; ++a) x.push_back(p[static_cast<std::size_t>(a)]);
          d["x"] = to_array_2d(x, s.rows(), static_cast<std::size_t>(s.dim_x));
          snapshots.append(d);
        }
        py::dict out;
        out["t"] = r.state.t;
        out["outer_steps"] = r.state.outer_steps;
        out["fallback_steps"] = r.state.fallback_steps;
        out["rhs_evaluations"] = r.state.rhs_evaluations;
        out["method"] = std::string(to_string(r.method.method));
        out["dt"] = r.method.dt;
        out["inner_steps"] = r.method.inner_steps;
        out["outer_dt"] = r.method.outer_dt;
        out["snapshots"] = snapshots;
        out["f"] = r.final_field ? py::object(field_array(*r.final_field)) : py::none();
        out["files"] = [&] {
          std::vector<std::string> v;
          for (const auto& p : r.files) v.push_back(p.string());
          return v;
        }();
        out["log"] = log.str();
        return out;
      },
      py::arg("config"), py::arg("write_files") = false);

  m.def("collision_spectrum",
        [](double epsilon, const VelocityGrid& grid) { return collision_spectrum(epsilon, build_basis(grid)); },
        py::arg("epsilon"), py::arg("grid"));
  m.def(
      "transport_collision_spectrum",
      [](double epsilon, double dx, int cells, const VelocityGrid& grid, std::vector<int> modes,
         Reconstruction symbol) {
        py::dict out;
        for (const auto& s :
             transport_collision_spectrum(epsilon, {dx, cells}, build_basis(grid), modes, symbol))
          out[py::int_(s.mode)] = py::array(py::cast(s.eigenvalues));
        return out;
      },
      py::arg("epsilon"), py::arg("dx"), py::arg("cells"), py::arg("grid"), py::arg("modes") = std::vector<int>{},
      py::arg("symbol") = Reconstruction::upwind1);
  m.def("projective_amplification",
        [](std::complex<double> lambda, const ButcherTableau& t, double inner_dt, int inner_steps, double outer_dt) {
          return projective_amplification(lambda, t, {inner_dt, inner_steps, outer_dt});
        },
        py::arg("lam"), py::arg("tableau"), py::arg("inner_dt"), py::arg("inner_steps"), py::arg("outer_dt"));

  py::class_<Advice>(m, "Advice")
      .def_property_readonly("inner_dt", [](const Advice& a) { return a.parameters.inner_dt; })
      .def_property_readonly("inner_steps", [](const Advice& a) { return a.parameters.inner_steps; })
      .def_property_readonly("outer_dt", [](const Advice& a) { return a.parameters.outer_dt; })
      .def_readonly("max_amplification", &Advice::max_amplification)
      .def_readonly("worst_mode", &Advice::worst_mode)
      .def_readonly("worst_eigenvalue", &Advice::worst_eigenvalue)
      .def_readonly("recommend_direct", &Advice::recommend_direct)
      .def_readonly("stable", &Advice::stable)
      .def_property_readonly("margin", &Advice::margin);
  m.def(
      "advise",
      [](double epsilon, double dx, int cells, const VelocityGrid& grid, int inner_steps, const ButcherTableau& t,
         double cfl_fraction, Reconstruction symbol, std::vector<int> modes) {
        AdviceOptions o;
        o.cfl_fraction = cfl_fraction;
        o.inner_steps = inner_steps;
        o.tableau = t;
        o.symbol = symbol;
        o.modes = std::move(modes);
        return advise_parameters(epsilon, {dx, cells}, build_basis(grid), o);
      },
      py::arg("epsilon"), py::arg("dx"), py::arg("cells"), py::arg("grid"), py::arg("inner_steps") = 2,
      py::arg("tableau") = ButcherTableau::classical_rk4(), py::arg("cfl_fraction") = 0.4,
      py::arg("symbol") = Reconstruction::upwind1, py::arg("modes") = std::vector<int>{});
  m.def("advise_config", &advise_for, py::arg("config"), py::arg("symbol") = Reconstruction::upwind1);

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "bgkpi");
        std::ostringstream out, err;
        const int code = cli_run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}

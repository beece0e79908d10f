#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <numbers>

#include "adrlab/analytic2d.hpp"
#include "adrlab/chemistry.hpp"
#include "adrlab/config.hpp"
#include "adrlab/diagnostics.hpp"
#include "adrlab/errors.hpp"
#include "adrlab/execute.hpp"
#include "adrlab/solver2d.hpp"
#include "adrlab/solver3d.hpp"

namespace py = pybind11;
using namespace adrlab;

namespace {

/// (ny, nx) copy of species 0 of a 2-D field, row j holding y = j dy.
py::array_t<double> to_numpy(const Field& f) {
  const auto& lat = f.lattice();
  py::array_t<double> out({lat.n[1], lat.n[0]});
  auto v = f.species_values(0);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Field from_numpy(const Grid2D& grid, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != grid.ny() ||
      static_cast<std::size_t>(a.shape(1)) != grid.nx())
    throw InputError("expected an array of shape (ny, nx)");
  Field f(grid, 1);
  std::copy(a.data(), a.data() + a.size(), f.values().begin());
  return f;
}

py::dict to_dict(const Stability2D& s) {
  py::dict d;
  d["rx"] = s.rx;
  d["ry"] = s.ry;
  d["px"] = s.px;
  d["py"] = s.py;
  d["ok"] = s.ok;
  d["violated"] = s.violated;
  return d;
}

py::dict to_dict(const Stability3D& s) {
  py::dict d;
  d["r"] = s.r;
  d["p"] = s.p;
  d["advective"] = s.advective;
  d["combined"] = s.combined;
  d["cfl"] = s.cfl;
  d["ok"] = s.ok;
  d["violated"] = s.violated;
  return d;
}

double sin_product(double x, double y) {
  return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explicit advection-diffusion-reaction solvers";
  m.attr("__version__") = kToolVersion;

  auto base = py::register_exception<Error>(m, "AdrError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", numeric.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());

  m.def("photolysis_k1", &photolysis_k1, py::arg("t"),
        "NO2 photolysis rate at t seconds after midnight");

  m.def(
      "stability2d",
      [](double u, double k, std::size_t nx, std::size_t ny, double dt, double lx, double ly) {
        return to_dict(stability2d(TransportParams::uniform(u, k), make_grid2d(nx, ny, lx, ly), dt));
      },
      py::arg("u"), py::arg("k"), py::arg("nx"), py::arg("ny"), py::arg("dt"),
      py::arg("lx") = 1.0, py::arg("ly") = 1.0);

  m.def(
      "stability3d",
      [](double u, double k, std::size_t n, double length, double dt, double alpha) {
        return to_dict(stability3d(TransportParams::uniform(u, k),
                                   make_grid3d(n, n, n, length, length, length), dt, alpha));
      },
      py::arg("u"), py::arg("k"), py::arg("n"), py::arg("length"), py::arg("dt"),
      py::arg("alpha") = kDefaultCflAlpha);

  py::class_<SeriesSolution>(m, "SeriesSolution")
      .def_property_readonly("u", &SeriesSolution::u)
      .def_property_readonly("k", &SeriesSolution::k)
      .def_property_readonly("m_terms", &SeriesSolution::m_terms)
      .def_property_readonly("n_terms", &SeriesSolution::n_terms)
      .def("coefficient", &SeriesSolution::coefficient, py::arg("m"), py::arg("n"))
      .def("coefficients",
           [](const SeriesSolution& s) {
             py::array_t<double> a({s.m_terms(), s.n_terms()});
             std::copy(s.coefficients().begin(), s.coefficients().end(), a.mutable_data());
             return a;
           })
      .def("__call__", [](const SeriesSolution& s, double t, double x, double y) {
        return eval_series(s, t, x, y);
      }, py::arg("t"), py::arg("x"), py::arg("y"))
      .def("sample", [](const SeriesSolution& s, std::size_t nx, std::size_t ny, double t) {
        return to_numpy(sample_series(s, make_grid2d(nx, ny, 1.0, 1.0), t));
      }, py::arg("nx"), py::arg("ny"), py::arg("t"));

  m.def(
      "build_series",
      [](double u, double k, std::size_t m_terms, std::size_t n_terms, std::size_t quad,
         std::optional<std::function<double(double, double)>> f, unsigned threads) {
        if (f) {
          // Calls back into Python, so stay on one thread.
          return build_series(*f, u, k, m_terms, n_terms, quad, 1);
        }
        py::gil_scoped_release release;
        return build_series(sin_product, u, k, m_terms, n_terms, quad, threads);
      },
      py::arg("u"), py::arg("k"), py::arg("m_terms") = 40, py::arg("n_terms") = 40,
      py::arg("quad_points") = 0, py::arg("f") = py::none(), py::arg("threads") = 1,
      "Series solution for initial state f (default sin(pi x) sin(pi y))");

  m.def(
      "simulate2d",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> initial, double u,
         double k, double dt, double t_end, std::vector<double> times, double lx, double ly,
         bool override_stability, unsigned threads) {
        if (initial.ndim() != 2) throw InputError("expected an array of shape (ny, nx)");
        const Grid2D grid = make_grid2d(initial.shape(1), initial.shape(0), lx, ly);
        const Field f0 = from_numpy(grid, initial);
        SnapshotSeries series;
        {
          py::gil_scoped_release release;
          series = run2d(f0, TransportParams::uniform(u, k), grid, dt, t_end, times,
                         StepOptions{override_stability, threads});
        }
        py::list out;
        for (const auto& s : series)
          out.append(py::make_tuple(s.step, s.time, to_numpy(s.field)));
        return out;
      },
      py::arg("initial"), py::arg("u"), py::arg("k"), py::arg("dt"), py::arg("t_end"),
      py::arg("snapshot_times"), py::arg("lx") = 1.0, py::arg("ly") = 1.0,
      py::arg("override_stability") = false, py::arg("threads") = 1,
      "Explicit centred run; returns [(step, time, field)] per snapshot");

  m.def(
      "max_error",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> field,
         const SeriesSolution& sol, double t) {
        const Grid2D grid = make_grid2d(field.shape(1), field.shape(0), 1.0, 1.0);
        const ErrorReport r = max_error_vs_analytic(from_numpy(grid, field), sol, t);
        return py::make_tuple(r.max_abs_error, r.l2_error);
      },
      py::arg("field"), py::arg("solution"), py::arg("t"));

  m.def(
      "ozone_rates",
      [](double t, std::vector<double> c, double k2) {
        if (c.size() != 3) throw InputError("expected (NO, NO2, O3)");
        return reaction_rates(ozone_network(k2), t, c, 0);
      },
      py::arg("t"), py::arg("c"), py::arg("k2") = 1e-16,
      "d(NO, NO2, O3)/dt of the ozone network without sources");

  m.def(
      "parse_config",
      [](const std::filesystem::path& path) { return parse_config(path).to_json().dump(); },
      py::arg("path"), "Validated configuration as a JSON string");

  m.def(
      "run",
      [](const std::filesystem::path& config, std::optional<std::filesystem::path> out_dir,
         unsigned threads) {
        const RunConfig cfg = parse_config(config);
        ExecuteOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        py::gil_scoped_release release;
        return execute(cfg, opt);
      },
      py::arg("config"), py::arg("out_dir") = py::none(), py::arg("threads") = 1,
      "Runs a configuration file; returns the exit status");
}

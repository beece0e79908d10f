#include "adrlab/execute.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "adrlab/analytic2d.hpp"
#include "adrlab/diagnostics.hpp"
#include "adrlab/errors.hpp"
#include "adrlab/io.hpp"
#include "adrlab/solver2d.hpp"
#include "adrlab/solver3d.hpp"

namespace adrlab {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const StabilityError*>(&e)) return 3;
  if (dynamic_cast<const NumericError*>(&e)) return 2;
  return 1;
}

namespace {

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const InputError*>(&e)) return "input";
  if (dynamic_cast<const UnsupportedError*>(&e)) return "unsupported";
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergence";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const StabilityError*>(&e)) return "stability";
  return "error";
}

json error_json(const std::exception& e) {
  json j{{"kind", error_kind(e)}, {"message", e.what()}, {"exit_code", exit_code_for(e)}};
  if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) j["step"] = d->step();
  if (const auto* s = dynamic_cast<const StabilityError*>(&e)) j["report"] = s->report();
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) j["key"] = c->key();
  return j;
}

/// JSON has no inf/nan; those are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json to_json(const Stability2D& s) {
  json j{{"rx", number(s.rx)}, {"ry", number(s.ry)}, {"px", number(s.px)},
         {"py", number(s.py)}, {"ok", s.ok}, {"report", s.describe()}};
  if (s.violated) j["violated"] = *s.violated;
  return j;
}

json to_json(const Stability3D& s) {
  json r = json::array(), p = json::array(), a = json::array();
  for (int i = 0; i < 3; ++i) {
    r.push_back(number(s.r[i]));
    p.push_back(number(s.p[i]));
    a.push_back(number(s.advective[i]));
  }
  json j{{"r", r},          {"p", p},           {"advective", a},
         {"combined", number(s.combined)}, {"cfl", number(s.cfl)}, {"alpha", s.alpha},
         {"ok", s.ok},      {"report", s.describe()}};
  if (s.violated) j["violated"] = *s.violated;
  return j;
}

class Manifest {
 public:
  Manifest(fs::path dir, json config) : path_(std::move(dir) / "manifest.json") {
    doc_["tool"] = "adr-lab";
    doc_["version"] = kToolVersion;
    doc_["status"] = "running";
    doc_["config"] = std::move(config);
    doc_["stability"] = json::array();
    doc_["snapshots"] = json::array();
    doc_["outputs"] = json::array();
    doc_["warnings"] = json::array();
  }

  json& operator[](const char* key) { return doc_[key]; }
  void add_output(const std::string& name) { doc_["outputs"].push_back(name); }
  void warn(const std::string& w) { doc_["warnings"].push_back(w); }
  void write() const { io::write_file_atomic(path_, doc_.dump(2) + "\n"); }

 private:
  fs::path path_;
  json doc_;
};

std::string step_name(const char* prefix, std::size_t step, const char* ext) {
  return std::string(prefix) + std::to_string(step) + ext;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, const ExecuteOptions& opt, fs::path dir, Manifest& manifest)
      : cfg_(cfg), opt_(opt), dir_(std::move(dir)), manifest_(manifest) {}

  void run() {
    switch (cfg_.mode) {
      case Mode::analytic2d: analytic(); break;
      case Mode::simulate2d: simulate2d(false); break;
      case Mode::compare: simulate2d(true); break;
      case Mode::converge: converge(); break;
      case Mode::simulate3d:
      case Mode::trajectories: simulate3d(); break;
    }
  }

 private:
  void say(const std::string& line) const {
    if (opt_.out) *opt_.out << line << "\n";
  }

  void emit(const std::string& name, const std::string& contents) {
    io::write_file_atomic(dir_ / name, contents);
    manifest_.add_output(name);
  }

  Grid2D grid2d() const {
    return make_grid2d(cfg_.grid.n[0], cfg_.grid.n[1], cfg_.grid.length[0], cfg_.grid.length[1]);
  }

  std::function<double(double, double)> initial_function() const {
    if (cfg_.initial.kind == InitialBlock::Kind::constant) {
      const double v = cfg_.initial.value;
      return [v](double, double) { return v; };
    }
    return [](double x, double y) {
      return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
    };
  }

  Field initial2d(const Grid2D& grid) const {
    const Field sampled = sample_initial_2d(grid, initial_function());
    Field field(grid, 1, cfg_.grid.dirichlet);
    std::copy(sampled.values().begin(), sampled.values().end(), field.values().begin());
    apply_dirichlet(field);
    return field;
  }

  SeriesSolution series() const {
    const SeriesBlock s = cfg_.series.value_or(SeriesBlock{});
    return build_series(initial_function(), cfg_.transport.u[0], cfg_.transport.k[0], s.m, s.n,
                        s.quad_points, opt_.threads);
  }

  bool override_stability() const {
    return opt_.override_stability || cfg_.stability.override_stability;
  }

  void record_snapshot(const Snapshot& s, const std::string& file) {
    manifest_["snapshots"].push_back({{"requested_time", s.requested_time},
                                      {"step", s.step},
                                      {"time", s.time},
                                      {"file", file}});
  }

  void analytic() {
    const Grid2D grid = grid2d();
    const SeriesSolution sol = series();
    emit("coefficients.csv", io::coefficients_csv(sol));
    for (const double t : cfg_.time.snapshot_times) {
      const std::size_t step = steps_to_reach(t, cfg_.time.dt);
      const double time = static_cast<double>(step) * cfg_.time.dt;
      const std::string name = step_name("analytic_t", step, ".csv");
      manifest_["snapshots"].push_back(
          {{"requested_time", t}, {"step", step}, {"time", time}, {"file", name}});
      emit(name, io::field2d_csv(sample_series(sol, grid, time, opt_.threads)));
    }
  }

  void simulate2d(bool compare) {
    const Grid2D grid = grid2d();
    const Stability2D st = stability2d(cfg_.transport, grid, cfg_.time.dt);
    manifest_["stability"].push_back(to_json(st));
    say("stability: " + st.describe());
    std::optional<SeriesSolution> sol;
    if (compare) sol = series();
    const Field init = initial2d(grid);
    std::vector<ErrorReport> reports;
    manifest_.write();

    const StepOptions so{override_stability(), opt_.threads};
    const auto start = std::chrono::steady_clock::now();
    const std::size_t steps = run2d(
        init, cfg_.transport, grid, cfg_.time.dt, cfg_.time.t_end, cfg_.time.snapshot_times,
        [&](const Snapshot& s) {
          const std::string name = step_name("snap_t", s.step, ".csv");
          emit(name, io::field2d_csv(s.field));
          record_snapshot(s, name);
          if (sol) reports.push_back(max_error_vs_analytic(s.field, *sol, s.time, opt_.threads));
        },
        so);
    throughput(steps, grid.lattice().interior_cells(), start);

    if (compare) {
      emit("error_report.csv", io::error_report_csv(reports));
      for (const auto& r : reports)
        say("t=" + io::format_double(r.t) + " max_abs_error=" + io::format_double(r.max_abs_error));
    }
  }

  void converge() {
    const double dx_ref = cfg_.grid.length[0] / static_cast<double>(cfg_.grid.n[0] - 1);
    std::vector<RefinementLevel> levels;
    for (const std::size_t n : cfg_.converge.levels) {
      Grid2D g = make_grid2d(n, n, 1.0, 1.0);
      const double scale = g.dx() / dx_ref;
      const double dt = cfg_.time.dt * scale * scale;
      const Stability2D st = stability2d(cfg_.transport, g, dt);
      json sj = to_json(st);
      sj["nx"] = n;
      sj["dt"] = dt;
      manifest_["stability"].push_back(sj);
      if (!st.ok && !override_stability())
        throw StabilityError("converge level nx=" + std::to_string(n) + " is unstable",
                             st.describe());
      levels.push_back({g, dt});
    }
    const SeriesSolution sol = series();
    manifest_.write();
    const ConvergenceResult res =
        convergence_order(levels, sol, initial_function(), cfg_.converge.t, opt_.threads);
    std::ostringstream csv;
    csv << "nx,dx,dt,t,max_abs_error\n";
    for (std::size_t i = 0; i < levels.size(); ++i)
      csv << levels[i].grid.nx() << ',' << io::format_double(res.spacing[i]) << ','
          << io::format_double(levels[i].dt) << ',' << io::format_double(res.times[i]) << ','
          << io::format_double(res.errors[i]) << '\n';
    emit("convergence.csv", csv.str());
    emit("order.txt", io::format_double(res.order) + "\n");
    manifest_["convergence_order"] = number(res.order);
    say("convergence order: " + io::format_double(res.order));
  }

  ReactionNetwork network(std::size_t& species, const Lattice& lat) {
    if (!cfg_.chemistry) {
      species = 1;
      return ReactionNetwork({"c"}, {});
    }
    const ChemistryBlock& c = *cfg_.chemistry;
    species = c.species.size();
    std::vector<Reaction> reactions;
    for (const auto& r : c.reactions) reactions.push_back({r.loss, r.gain, r.rate});
    std::vector<PointSource> sources;
    for (const auto& s : c.sources)
      sources.push_back({s.species, lat.index(s.cell[0], s.cell[1], s.cell[2]), s.rate});
    const ReactionNetwork input(c.species, reactions, sources);
    const double v = c.cell_volume;
    json factors = json::array();
    for (const auto& r : reactions) {
      unsigned order = 0;
      for (unsigned l : r.loss) order += l;
      factors.push_back(std::pow(v, 1.0 - static_cast<double>(order)));
    }
    manifest_["unit_conversion"] = {
        {"cell_volume", v},
        {"concentration_factor", v},
        {"source_factor", v},
        {"reaction_rate_factors", factors},
        {"note", "state is stored as molecules per cell; inputs are per unit volume"}};
    return to_cell_units(input, v);
  }

  Field initial3d(const Grid3D& grid, std::size_t species) const {
    const double v = cfg_.chemistry ? cfg_.chemistry->cell_volume : 1.0;
    const auto& ini = cfg_.initial;
    if (ini.kind == InitialBlock::Kind::point) {
      std::vector<double> scaled;
      for (double x : ini.values) scaled.push_back(x * v);
      Field f = point_initial_3d(grid, scaled, ini.cell);
      Field out(grid, species, cfg_.grid.dirichlet * v);
      std::copy(f.values().begin(), f.values().end(), out.values().begin());
      apply_dirichlet(out);
      return out;
    }
    Field out(grid, species, cfg_.grid.dirichlet * v);
    for (std::size_t s = 0; s < species; ++s)
      for (auto& x : out.species_values(s)) x = ini.value * v;
    apply_dirichlet(out);
    return out;
  }

  void simulate3d() {
    const Grid3D grid = make_grid3d(cfg_.grid.n[0], cfg_.grid.n[1], cfg_.grid.n[2],
                                    cfg_.grid.length[0], cfg_.grid.length[1], cfg_.grid.length[2]);
    std::size_t species = 1;
    const ReactionNetwork net = network(species, grid.lattice());
    const Field init = initial3d(grid, species);
    const Stability3D st = stability3d(cfg_.transport, grid, cfg_.time.dt, cfg_.stability.alpha);
    manifest_["stability"].push_back(to_json(st));
    say("stability: " + st.describe());

    std::optional<TrajectoryRecorder> recorder;
    if (cfg_.trajectories) {
      const auto& tb = *cfg_.trajectories;
      std::vector<std::array<std::size_t, 3>> cells =
          tb.all_cells ? box_cells(grid, {1, 1, 1},
                                   {grid.nx() - 2, grid.ny() - 2, grid.nz() - 2})
                       : box_cells(grid, tb.lo, tb.hi);
      recorder.emplace(grid, std::move(cells), tb.stride, species);
    }

    const auto& names = net.species_names();
    /// Column labels carry the internal unit.
    std::vector<std::string> columns;
    for (const auto& n : names) columns.push_back(n + "_per_cell");
    std::ostringstream maxima;
    maxima << "step,t";
    for (const auto& n : names) maxima << ',' << n << "_max_per_cell";
    maxima << '\n';
    manifest_.write();

    Run3DOptions ro;
    ro.step = {override_stability(), opt_.threads, cfg_.stability.alpha};
    ro.clock_offset = cfg_.time.clock_offset;
    ro.slice = cfg_.slice;
    const bool binary = cfg_.write_binary || !cfg_.slice;
    const Run3DSummary summary = run3d(
        init, cfg_.transport, grid, net, cfg_.time.dt, cfg_.time.t_end, cfg_.time.snapshot_times,
        [&](const Snapshot& s) {
          json rec{{"requested_time", s.requested_time}, {"step", s.step}, {"time", s.time}};
          if (s.slice) {
            const std::string name = step_name("snap_t", s.step, ".csv");
            emit(name, io::field2d_csv(*s.slice, columns));
            rec["file"] = name;
          }
          if (binary) {
            const std::string name = step_name("field_t", s.step, ".bin");
            emit(name, io::field_binary(s.field));
            rec["binary"] = name;
          }
          maxima << s.step << ',' << io::format_double(s.time);
          json mx = json::object();
          for (std::size_t k = 0; k < species; ++k) {
            const double m = s.field.max_value(k);
            maxima << ',' << io::format_double(m);
            mx[names[k]] = number(m);
          }
          maxima << '\n';
          rec["max"] = mx;
          manifest_["snapshots"].push_back(rec);
        },
        recorder ? recorder->observer() : StepObserver{}, ro);

    emit("maxima.csv", maxima.str());
    manifest_["chemistry_step_estimate"] = number(summary.chemistry_estimate);
    for (const auto& w : summary.warnings) manifest_.warn(w);
    manifest_["steps"] = summary.steps;
    manifest_["seconds"] = summary.seconds;
    manifest_["cell_updates_per_second"] = number(summary.cell_updates_per_second);
    say("steps: " + std::to_string(summary.steps) +
        ", cell-species updates/s: " + io::format_double(summary.cell_updates_per_second));

    if (recorder) {
      const auto& tb = *cfg_.trajectories;
      emit("trajectories.csv", io::trajectory_csv(recorder->log(), columns));
      const double inf = std::numeric_limits<double>::infinity();
      const double early = max_pairwise_distance(recorder->log(), 0.0, tb.early_before);
      const double late = max_pairwise_distance(recorder->log(), tb.late_from, inf);
      manifest_["trajectory_summary"] = {{"rows", recorder->log().rows()},
                                         {"early_before", tb.early_before},
                                         {"late_from", tb.late_from},
                                         {"early_diameter", number(early)},
                                         {"late_diameter", number(late)},
                                         {"clustered", late < early}};
      say("trajectory diameter: early " + io::format_double(early) + ", late " +
          io::format_double(late));
    }
  }

  void throughput(std::size_t steps, std::size_t interior,
                  std::chrono::steady_clock::time_point start) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest_["steps"] = steps;
    manifest_["seconds"] = secs;
    manifest_["cell_updates_per_second"] =
        secs > 0.0 ? number(static_cast<double>(steps * interior) / secs) : json(nullptr);
  }

  const RunConfig& cfg_;
  const ExecuteOptions& opt_;
  fs::path dir_;
  Manifest& manifest_;
};

}  // namespace

void write_failure_manifest(const fs::path& out_dir, const std::exception& e,
                            const std::optional<json>& config) {
  fs::create_directories(out_dir);
  Manifest m(out_dir, config.value_or(json(nullptr)));
  m["status"] = "failed";
  m["error"] = error_json(e);
  m.write();
}

int execute(const RunConfig& config, const ExecuteOptions& options) {
  const fs::path dir = options.out_dir.value_or(config.out_dir);
  json echo = config.to_json();
  echo["output"]["dir"] = dir.string();
  std::optional<Manifest> manifest;
  try {
    fs::create_directories(dir);
    manifest.emplace(dir, echo);
    manifest->write();
    Runner(config, options, dir, *manifest).run();
    (*manifest)["status"] = "ok";
    manifest->write();
    return 0;
  } catch (const std::exception& e) {
    if (options.err) *options.err << "error: " << e.what() << "\n";
    try {
      if (manifest) {
        (*manifest)["status"] = "failed";
        (*manifest)["error"] = error_json(e);
        manifest->write();
      } else {
        write_failure_manifest(dir, e, echo);
      }
    } catch (const std::exception& inner) {
      if (options.err) *options.err << "error: cannot write manifest: " << inner.what() << "\n";
    }
    return exit_code_for(e);
  }
}

}  // namespace adrlab

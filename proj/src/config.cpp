#include "adrlab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "adrlab/errors.hpp"

namespace adrlab {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::analytic2d: return "analytic2d";
    case Mode::simulate2d: return "simulate2d";
    case Mode::simulate3d: return "simulate3d";
    case Mode::compare: return "compare";
    case Mode::converge: return "converge";
    case Mode::trajectories: return "trajectories";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& name) {
  for (Mode m : {Mode::analytic2d, Mode::simulate2d, Mode::simulate3d, Mode::compare,
                 Mode::converge, Mode::trajectories})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const YAML::Node& node, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

template <class T>
T as(const YAML::Node& node, const std::string& path, const char* type) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, std::string("expected ") + type);
  }
}

YAML::Node require(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n) throw ConfigError::missing(join(path, key));
  return n;
}

double get_double(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const auto v = as<double>(require(parent, path, key), join(path, key), "a number");
  if (!std::isfinite(v)) throw ConfigError(join(path, key), "must be finite");
  return v;
}

double get_double_or(const YAML::Node& parent, const std::string& path, const std::string& key,
                     double fallback) {
  return parent[key] ? get_double(parent, path, key) : fallback;
}

std::size_t get_count(const YAML::Node& node, const std::string& path) {
  const auto v = as<long long>(node, path, "a nonnegative integer");
  if (v < 0) throw ConfigError(path, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::vector<double> get_doubles(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(as<double>(node[i], path + "[" + std::to_string(i) + "]", "a number"));
  return out;
}

std::array<std::size_t, 3> get_cell(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() != 3)
    throw ConfigError(path, "expected a node index [i, j, k]");
  return {get_count(node[0], path + "[0]"), get_count(node[1], path + "[1]"),
          get_count(node[2], path + "[2]")};
}

std::vector<unsigned> get_stoichiometry(const YAML::Node& node, const std::string& path,
                                        std::size_t species) {
  if (!node.IsSequence() || node.size() != species)
    throw ConfigError(path, "expected one nonnegative integer per species");
  std::vector<unsigned> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(static_cast<unsigned>(get_count(node[i], path + "[" + std::to_string(i) + "]")));
  return out;
}

/// Scalar applies to every axis; a list gives one entry per axis.
std::array<double, 3> get_axes(const YAML::Node& node, const std::string& path, int rank) {
  if (node.IsScalar()) {
    const double v = as<double>(node, path, "a number");
    return {v, v, rank == 3 ? v : 0.0};
  }
  const auto list = get_doubles(node, path);
  if (list.size() != static_cast<std::size_t>(rank))
    throw ConfigError(path, "expected " + std::to_string(rank) + " entries");
  return {list[0], list[1], rank == 3 ? list[2] : 0.0};
}

bool is_3d(Mode m) { return m == Mode::simulate3d || m == Mode::trajectories; }

void parse_grid(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node g = require(root, "", "grid");
  check_keys(g, "grid", {"nx", "ny", "nz", "lx", "ly", "lz", "dirichlet"});
  cfg.grid.rank = is_3d(cfg.mode) ? 3 : 2;
  const char* counts[] = {"nx", "ny", "nz"};
  const char* lengths[] = {"lx", "ly", "lz"};
  for (int a = 0; a < cfg.grid.rank; ++a) {
    cfg.grid.n[a] = get_count(require(g, "grid", counts[a]), join("grid", counts[a]));
    cfg.grid.length[a] = get_double(g, "grid", lengths[a]);
    if (cfg.grid.n[a] < 3) throw ConfigError(join("grid", counts[a]), "must be at least 3");
    if (!(cfg.grid.length[a] > 0.0)) throw ConfigError(join("grid", lengths[a]), "must be positive");
  }
  if (cfg.grid.rank == 2 && (g["nz"] || g["lz"]))
    throw ConfigError("grid.nz", "2-D modes take no z axis");
  cfg.grid.dirichlet = get_double_or(g, "grid", "dirichlet", 0.0);
}

void parse_transport(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node t = require(root, "", "transport");
  check_keys(t, "transport", {"u", "k"});
  cfg.transport.u = get_axes(require(t, "transport", "u"), "transport.u", cfg.grid.rank);
  cfg.transport.k = get_axes(require(t, "transport", "k"), "transport.k", cfg.grid.rank);
  for (int a = 0; a < cfg.grid.rank; ++a) {
    if (!std::isfinite(cfg.transport.u[a]) || cfg.transport.u[a] < 0.0)
      throw ConfigError("transport.u", "velocities must be finite and nonnegative");
    if (!std::isfinite(cfg.transport.k[a]) || cfg.transport.k[a] < 0.0)
      throw ConfigError("transport.k", "diffusivities must be finite and nonnegative");
  }
}

void parse_time(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node t = require(root, "", "time");
  check_keys(t, "time", {"dt", "t_end", "snapshot_times", "clock_offset"});
  cfg.time.dt = get_double(t, "time", "dt");
  if (!(cfg.time.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  cfg.time.t_end = get_double(t, "time", "t_end");
  if (!(cfg.time.t_end >= 0.0)) throw ConfigError("time.t_end", "must be nonnegative");
  if (t["snapshot_times"]) {
    cfg.time.snapshot_times = get_doubles(t["snapshot_times"], "time.snapshot_times");
  } else {
    cfg.time.snapshot_times = {0.0, cfg.time.t_end};
  }
  for (std::size_t i = 0; i < cfg.time.snapshot_times.size(); ++i) {
    const double v = cfg.time.snapshot_times[i];
    const std::string key = "time.snapshot_times[" + std::to_string(i) + "]";
    if (!(v >= 0.0) || v > cfg.time.t_end) throw ConfigError(key, "must lie in [0, t_end]");
    if (i > 0 && v < cfg.time.snapshot_times[i - 1]) throw ConfigError(key, "must be sorted");
  }
  cfg.time.clock_offset = get_double_or(t, "time", "clock_offset", 0.0);
  if (cfg.time.clock_offset < 0.0) throw ConfigError("time.clock_offset", "must be nonnegative");
}

std::size_t species_index(const YAML::Node& node, const std::string& path,
                          const std::vector<std::string>& names) {
  if (node.IsScalar()) {
    const auto name = node.as<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    try {
      const auto idx = node.as<std::size_t>();
      if (idx < names.size()) return idx;
    } catch (const YAML::Exception&) {
    }
  }
  throw ConfigError(path, "unknown species");
}

void check_interior(const GridBlock& g, const std::array<std::size_t, 3>& c,
                    const std::string& path) {
  for (int a = 0; a < 3; ++a)
    if (c[a] == 0 || c[a] + 1 >= g.n[a]) throw ConfigError(path, "must be an interior node");
}

void parse_chemistry(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node c = root["chemistry"];
  if (!c) return;
  check_keys(c, "chemistry", {"species", "reactions", "sources", "cell_volume"});
  ChemistryBlock chem;
  const YAML::Node sp = require(c, "chemistry", "species");
  if (!sp.IsSequence() || sp.size() == 0)
    throw ConfigError("chemistry.species", "expected a non-empty list of names");
  for (std::size_t i = 0; i < sp.size(); ++i)
    chem.species.push_back(
        as<std::string>(sp[i], "chemistry.species[" + std::to_string(i) + "]", "a name"));
  chem.cell_volume = get_double_or(c, "chemistry", "cell_volume", 1.0);
  if (!(chem.cell_volume > 0.0)) throw ConfigError("chemistry.cell_volume", "must be positive");
  if (const YAML::Node rs = c["reactions"]) {
    if (!rs.IsSequence()) throw ConfigError("chemistry.reactions", "expected a list");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const std::string path = "chemistry.reactions[" + std::to_string(i) + "]";
      check_keys(rs[i], path, {"loss", "gain", "rate"});
      ReactionSpec r;
      r.loss = get_stoichiometry(require(rs[i], path, "loss"), path + ".loss", chem.species.size());
      r.gain = get_stoichiometry(require(rs[i], path, "gain"), path + ".gain", chem.species.size());
      const YAML::Node rate = require(rs[i], path, "rate");
      check_keys(rate, path + ".rate", {"schedule", "value"});
      const auto sched =
          as<std::string>(require(rate, path + ".rate", "schedule"), path + ".rate.schedule", "a name");
      if (sched == "constant") {
        const double v = get_double(rate, path + ".rate", "value");
        if (v < 0.0) throw ConfigError(path + ".rate.value", "must be nonnegative");
        r.rate = RateSchedule::constant(v);
      } else if (sched == "photolysis_k1") {
        r.rate = RateSchedule::photolysis();
      } else {
        throw ConfigError(path + ".rate.schedule", "expected constant or photolysis_k1");
      }
      chem.reactions.push_back(r);
    }
  }
  if (const YAML::Node ss = c["sources"]) {
    if (!ss.IsSequence()) throw ConfigError("chemistry.sources", "expected a list");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string path = "chemistry.sources[" + std::to_string(i) + "]";
      check_keys(ss[i], path, {"species", "cell", "rate"});
      SourceSpec s;
      s.species = species_index(require(ss[i], path, "species"), path + ".species", chem.species);
      s.cell = get_cell(require(ss[i], path, "cell"), path + ".cell");
      check_interior(cfg.grid, s.cell, path + ".cell");
      s.rate = get_double(ss[i], path, "rate");
      chem.sources.push_back(s);
    }
  }
  cfg.chemistry = std::move(chem);
}

void parse_initial(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node n = root["initial"];
  if (!n) {
    if (cfg.grid.rank == 3) throw ConfigError::missing("initial");
    return;  // 2-D default: sin(pi x) sin(pi y)
  }
  check_keys(n, "initial", {"kind", "value", "cell", "values"});
  const auto kind = as<std::string>(require(n, "initial", "kind"), "initial.kind", "a name");
  if (kind == "sin_product") {
    if (cfg.grid.rank != 2) throw ConfigError("initial.kind", "sin_product is a 2-D initial state");
    cfg.initial.kind = InitialBlock::Kind::sin_product;
  } else if (kind == "constant") {
    cfg.initial.kind = InitialBlock::Kind::constant;
    cfg.initial.value = get_double(n, "initial", "value");
  } else if (kind == "point") {
    if (cfg.grid.rank != 3) throw ConfigError("initial.kind", "point initial states are 3-D only");
    cfg.initial.kind = InitialBlock::Kind::point;
    cfg.initial.cell = get_cell(require(n, "initial", "cell"), "initial.cell");
    check_interior(cfg.grid, cfg.initial.cell, "initial.cell");
    cfg.initial.values = get_doubles(require(n, "initial", "values"), "initial.values");
  } else {
    throw ConfigError("initial.kind", "expected sin_product, constant or point");
  }
}

void parse_rest(const YAML::Node& root, RunConfig& cfg) {
  if (const YAML::Node s = root["series"]) {
    check_keys(s, "series", {"m", "n", "quad_points"});
    SeriesBlock b;
    if (s["m"]) b.m = get_count(s["m"], "series.m");
    if (s["n"]) b.n = get_count(s["n"], "series.n");
    if (s["quad_points"]) b.quad_points = get_count(s["quad_points"], "series.quad_points");
    if (b.m == 0 || b.n == 0) throw ConfigError("series", "m and n must be positive");
    if (b.m > 100 || b.n > 100) throw ConfigError("series", "m and n are limited to 100");
    if (b.quad_points != 0 && b.quad_points < 16)
      throw ConfigError("series.quad_points", "must be at least 16");
    cfg.series = b;
  }
  if (const YAML::Node s = root["stability"]) {
    check_keys(s, "stability", {"alpha", "override"});
    cfg.stability.alpha = get_double_or(s, "stability", "alpha", kDefaultCflAlpha);
    if (!(cfg.stability.alpha > 0.0 && cfg.stability.alpha < 1.0))
      throw ConfigError("stability.alpha", "must lie in (0, 1)");
    if (s["override"])
      cfg.stability.override_stability = as<bool>(s["override"], "stability.override", "a boolean");
  }
  if (const YAML::Node s = root["slice"]) {
    check_keys(s, "slice", {"axis", "index"});
    const auto axis = as<std::string>(require(s, "slice", "axis"), "slice.axis", "x, y or z");
    SlicePlane pl;
    if (axis == "x") pl.axis = 0;
    else if (axis == "y") pl.axis = 1;
    else if (axis == "z") pl.axis = 2;
    else throw ConfigError("slice.axis", "expected x, y or z");
    pl.index = get_count(require(s, "slice", "index"), "slice.index");
    if (cfg.grid.rank != 3 || pl.index >= cfg.grid.n[pl.axis])
      throw ConfigError("slice.index", "outside the 3-D grid");
    cfg.slice = pl;
  }
  if (const YAML::Node s = root["trajectories"]) {
    check_keys(s, "trajectories", {"cells", "lo", "hi", "stride", "early_before", "late_from"});
    TrajectoryBlock b;
    if (s["cells"]) {
      const auto sel = as<std::string>(s["cells"], "trajectories.cells", "box or all");
      if (sel == "all") b.all_cells = true;
      else if (sel != "box") throw ConfigError("trajectories.cells", "expected box or all");
    }
    if (s["lo"]) b.lo = get_cell(s["lo"], "trajectories.lo");
    if (s["hi"]) b.hi = get_cell(s["hi"], "trajectories.hi");
    if (s["stride"]) b.stride = get_count(s["stride"], "trajectories.stride");
    if (b.stride == 0) throw ConfigError("trajectories.stride", "must be at least 1");
    b.early_before = get_double_or(s, "trajectories", "early_before", b.early_before);
    b.late_from = get_double_or(s, "trajectories", "late_from", b.late_from);
    cfg.trajectories = b;
  }
  if (const YAML::Node s = root["converge"]) {
    check_keys(s, "converge", {"levels", "t"});
    if (s["levels"]) {
      if (!s["levels"].IsSequence()) throw ConfigError("converge.levels", "expected a list");
      cfg.converge.levels.clear();
      for (std::size_t i = 0; i < s["levels"].size(); ++i) {
        const auto n = get_count(s["levels"][i], "converge.levels[" + std::to_string(i) + "]");
        if (n < 3) throw ConfigError("converge.levels", "every level needs at least 3 nodes");
        cfg.converge.levels.push_back(n);
      }
    }
    cfg.converge.t = get_double_or(s, "converge", "t", cfg.converge.t);
  }
  if (const YAML::Node s = root["output"]) {
    check_keys(s, "output", {"dir", "binary"});
    if (s["dir"]) cfg.out_dir = as<std::string>(s["dir"], "output.dir", "a path");
    if (s["binary"]) cfg.write_binary = as<bool>(s["binary"], "output.binary", "a boolean");
  }
}

void cross_validate(RunConfig& cfg) {
  const bool three = cfg.grid.rank == 3;
  if (cfg.chemistry && !three) throw ConfigError("chemistry", "chemistry is only coupled in 3-D");
  if (three && cfg.initial.kind == InitialBlock::Kind::point) {
    const std::size_t species = cfg.chemistry ? cfg.chemistry->species.size() : 1;
    if (cfg.initial.values.size() != species)
      throw ConfigError("initial.values", "expected one value per species");
  }
  if (cfg.mode == Mode::converge && cfg.converge.levels.size() < 3)
    throw ConfigError("converge.levels", "at least three levels are needed");
  if ((cfg.mode == Mode::analytic2d || cfg.mode == Mode::compare || cfg.mode == Mode::converge)) {
    if (std::abs(cfg.grid.length[0] - 1.0) > 1e-12 || std::abs(cfg.grid.length[1] - 1.0) > 1e-12)
      throw ConfigError("grid.lx", "the analytic solution is defined on the unit square only");
    if (cfg.transport.u[0] != cfg.transport.u[1] || cfg.transport.k[0] != cfg.transport.k[1])
      throw ConfigError("transport", "the analytic solution needs equal u and k on both axes");
    if (!(cfg.transport.k[0] > 0.0)) throw ConfigError("transport.k", "must be positive");
    if (!cfg.series) cfg.series = SeriesBlock{};
  }
  if (cfg.mode == Mode::trajectories && !cfg.trajectories) cfg.trajectories = TrajectoryBlock{};
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& origin,
                            std::optional<Mode> mode_override) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.what());
  }
  if ((!root || root.IsNull()) && !mode_override) throw ConfigError::missing("mode");
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("", "configuration must be a mapping");
  check_keys(root, "", {"mode", "grid", "transport", "time", "initial", "series", "chemistry",
                        "stability", "slice", "trajectories", "converge", "output"});
  RunConfig cfg;
  cfg.source = origin;
  if (mode_override) {
    cfg.mode = *mode_override;
  } else {
    const auto mode_name = as<std::string>(require(root, "", "mode"), "mode", "a mode name");
    const auto mode = parse_mode(mode_name);
    if (!mode) throw ConfigError("mode", "unknown mode '" + mode_name + "'");
    cfg.mode = *mode;
  }
  parse_grid(root, cfg);
  parse_transport(root, cfg);
  parse_time(root, cfg);
  parse_chemistry(root, cfg);
  parse_initial(root, cfg);
  parse_rest(root, cfg);
  cross_validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, std::optional<Mode> mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path, mode);
}

nlohmann::json RunConfig::to_json() const {
  using nlohmann::json;
  json j;
  j["mode"] = to_string(mode);
  j["grid"] = {{"rank", grid.rank}, {"n", grid.n}, {"length", grid.length},
               {"dirichlet", grid.dirichlet}};
  j["transport"] = {{"u", transport.u}, {"k", transport.k}};
  j["time"] = {{"dt", time.dt},
               {"t_end", time.t_end},
               {"snapshot_times", time.snapshot_times},
               {"clock_offset", time.clock_offset}};
  const char* kinds[] = {"sin_product", "constant", "point"};
  j["initial"] = {{"kind", kinds[static_cast<int>(initial.kind)]},
                  {"value", initial.value},
                  {"cell", initial.cell},
                  {"values", initial.values}};
  if (series)
    j["series"] = {{"m", series->m}, {"n", series->n}, {"quad_points", series->quad_points}};
  if (chemistry) {
    json reactions = json::array();
    for (const auto& r : chemistry->reactions) {
      json rate = r.rate.kind == RateSchedule::Kind::photolysis
                      ? json{{"schedule", "photolysis_k1"}}
                      : json{{"schedule", "constant"}, {"value", r.rate.value}};
      reactions.push_back({{"loss", r.loss}, {"gain", r.gain}, {"rate", rate}});
    }
    json sources = json::array();
    for (const auto& s : chemistry->sources)
      sources.push_back({{"species", chemistry->species[s.species]}, {"cell", s.cell},
                         {"rate", s.rate}});
    j["chemistry"] = {{"species", chemistry->species},
                      {"cell_volume", chemistry->cell_volume},
                      {"reactions", reactions},
                      {"sources", sources}};
  }
  j["stability"] = {{"alpha", stability.alpha}, {"override", stability.override_stability}};
  if (slice) j["slice"] = {{"axis", std::string(1, "xyz"[slice->axis])}, {"index", slice->index}};
  if (trajectories)
    j["trajectories"] = {{"cells", trajectories->all_cells ? "all" : "box"},
                         {"lo", trajectories->lo},
                         {"hi", trajectories->hi},
                         {"stride", trajectories->stride},
                         {"early_before", trajectories->early_before},
                         {"late_from", trajectories->late_from}};
  j["converge"] = {{"levels", converge.levels}, {"t", converge.t}};
  j["output"] = {{"dir", out_dir.string()}, {"binary", write_binary}};
  return j;
}

}  // namespace adrlab

#include "doctest.h"

#include <filesystem>
#include <map>
#include <sstream>

#include "adrlab/config.hpp"
#include "adrlab/errors.hpp"
#include "adrlab/execute.hpp"
#include "adrlab/io.hpp"

using namespace adrlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kSrc = ADRLAB_SOURCE_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("adrlab-exec-" + name);
  fs::remove_all(p);
  return p;
}

json manifest(const fs::path& dir) { return json::parse(io::read_file(dir / "manifest.json")); }

/// Hash of every output file except the manifest, which carries timings.
std::map<std::string, std::uint64_t> hashes(const fs::path& dir) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "manifest.json")
      out[e.path().filename().string()] = io::fnv1a(io::read_file(e.path()));
  return out;
}

int run(const RunConfig& cfg, const fs::path& dir, unsigned threads = 1,
        std::string* err = nullptr) {
  std::ostringstream out, errs;
  ExecuteOptions opt;
  opt.out_dir = dir;
  opt.threads = threads;
  opt.out = &out;
  opt.err = &errs;
  const int rc = execute(cfg, opt);
  if (err) *err = errs.str();
  return rc;
}

const std::string kSmall3d =
    "mode: simulate3d\n"
    "grid: {nx: 12, ny: 12, nz: 12, lx: 110, ly: 110, lz: 110}\n"
    "transport: {u: 1.0, k: 2.0e-5}\n"
    "time: {dt: 1.0, t_end: 40, snapshot_times: [0, 10, 40]}\n"
    "initial: {kind: point, cell: [1, 1, 1], values: [1.3e8, 5.0e11, 8.0e11]}\n"
    "chemistry:\n"
    "  species: [NO, NO2, O3]\n"
    "  cell_volume: 1.0e7\n"
    "  reactions:\n"
    "    - {loss: [0, 1, 0], gain: [1, 0, 1], rate: {schedule: photolysis_k1}}\n"
    "    - {loss: [1, 0, 1], gain: [0, 1, 0], rate: {schedule: constant, value: 1.0e-16}}\n"
    "  sources: [{species: NO, cell: [1, 1, 1], rate: 1.0e6}]\n"
    "slice: {axis: z, index: 1}\n"
    "trajectories: {lo: [1, 1, 1], hi: [3, 3, 3], stride: 5, early_before: 10, late_from: 30}\n"
    "output: {binary: true}\n";

}  // namespace

TEST_CASE("compare mode writes error reports at the requested times") {
  const fs::path dir = fresh_dir("compare");
  const RunConfig cfg = parse_config(kSrc + "/configs/reference-2d.cfg");
  REQUIRE(run(cfg, dir) == 0);
  const json m = manifest(dir);
  CHECK(m["status"] == "ok");
  CHECK(m["version"] == kToolVersion);
  CHECK(m["stability"][0]["ok"] == true);
  CHECK(m["stability"][0]["rx"].get<double>() == doctest::Approx(0.10125));
  std::vector<std::size_t> steps;
  for (const auto& s : m["snapshots"]) steps.push_back(s["step"]);
  CHECK(steps == std::vector<std::size_t>{0, 500, 900, 1200});
  CHECK(m.contains("cell_updates_per_second"));
  const std::string report = io::read_file(dir / "error_report.csv");
  CHECK(report.rfind("t,max_abs_error,l2_error\n0,", 0) == 0);
  CHECK(std::count(report.begin(), report.end(), '\n') == 5);
  CHECK(fs::exists(dir / "snap_t1200.csv"));

  const fs::path again = fresh_dir("compare-threads");
  REQUIRE(run(cfg, again, 3) == 0);
  CHECK(hashes(dir) == hashes(again));
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("analytic2d mode") {
  const fs::path dir = fresh_dir("analytic");
  RunConfig cfg = parse_config(kSrc + "/configs/reference-2d.cfg", Mode::analytic2d);
  cfg.series->m = 10;
  cfg.series->n = 10;
  REQUIRE(run(cfg, dir) == 0);
  const std::string coeffs = io::read_file(dir / "coefficients.csv");
  CHECK(coeffs.rfind("m,n,A_mn\n1,1,", 0) == 0);
  CHECK(std::count(coeffs.begin(), coeffs.end(), '\n') == 101);
  CHECK(fs::exists(dir / "analytic_t0.csv"));
  CHECK(fs::exists(dir / "analytic_t900.csv"));
  fs::remove_all(dir);
}

TEST_CASE("converge mode prints and writes the order") {
  const fs::path dir = fresh_dir("converge");
  const RunConfig cfg = parse_config(kSrc + "/configs/reference-2d.cfg", Mode::converge);
  std::ostringstream out;
  ExecuteOptions opt;
  opt.out_dir = dir;
  opt.out = &out;
  REQUIRE(execute(cfg, opt) == 0);
  CHECK(out.str().find("convergence order: 2.01") != std::string::npos);
  const double order = std::stod(io::read_file(dir / "order.txt"));
  CHECK(order == doctest::Approx(2.016).epsilon(1e-3));
  CHECK(manifest(dir)["convergence_order"].get<double>() == order);
  CHECK(manifest(dir)["stability"].size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("simulate3d mode on a small cube") {
  const fs::path dir = fresh_dir("sim3d");
  const RunConfig cfg = parse_config_text(kSmall3d);
  REQUIRE(run(cfg, dir) == 0);
  const json m = manifest(dir);
  CHECK(m["unit_conversion"]["concentration_factor"] == 1e7);
  CHECK(m["unit_conversion"]["reaction_rate_factors"][1].get<double>() == doctest::Approx(1e-7));
  CHECK(m["config"]["chemistry"]["sources"][0]["cell"] == json::array({1, 1, 1}));
  CHECK(m["snapshots"].size() == 3);
  CHECK(m["snapshots"][2]["step"] == 40);
  CHECK(m["trajectory_summary"]["rows"] == 9 * 27);
  for (const char* f : {"snap_t0.csv", "snap_t10.csv", "snap_t40.csv", "field_t40.bin",
                        "maxima.csv", "trajectories.csv"})
    CHECK(fs::exists(dir / f));
  const Field last = io::parse_field_binary(io::read_file(dir / "field_t40.bin"));
  CHECK(last.species() == 3);
  const std::string maxima = io::read_file(dir / "maxima.csv");
  CHECK(maxima.rfind("step,t,NO_max_per_cell,NO2_max_per_cell,O3_max_per_cell\n0,0," + io::format_double(1.3e15) + ",5e+18,8e+18\n", 0) == 0);
  const std::string slice = io::read_file(dir / "snap_t0.csv");
  CHECK(slice.rfind("i,j,x,y,NO_per_cell,NO2_per_cell,O3_per_cell\n", 0) == 0);

  const fs::path again = fresh_dir("sim3d-threads");
  REQUIRE(run(cfg, again, 4) == 0);
  CHECK(hashes(dir) == hashes(again));
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("trajectories mode needs no explicit block") {
  const fs::path dir = fresh_dir("traj");
  std::string text = kSmall3d;
  text.replace(text.find("trajectories: {"), text.find('\n', text.find("trajectories: {")) -
                                                  text.find("trajectories: {") + 1,
               "");
  const RunConfig cfg = parse_config_text(text, {}, Mode::trajectories);
  REQUIRE(cfg.trajectories.has_value());
  REQUIRE(run(cfg, dir) == 0);
  CHECK(io::read_file(dir / "trajectories.csv").rfind("t,i,j,k,NO_per_cell,NO2_per_cell,O3_per_cell\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("exit codes and failure manifests") {
  const std::string unstable =
      "mode: simulate2d\n"
      "grid: {nx: 11, ny: 11, lx: 1, ly: 1}\n"
      "transport: {u: 0, k: 1}\n"
      "time: {dt: 1, t_end: 1000, snapshot_times: [0]}\n";

  const fs::path dir = fresh_dir("fail");
  std::string err;
  CHECK(run(parse_config_text(unstable), dir, 1, &err) == 3);
  CHECK(err.find("1-2Rx-2Ry > 0") != std::string::npos);
  json m = manifest(dir);
  CHECK(m["status"] == "failed");
  CHECK(m["error"]["kind"] == "stability");
  CHECK(m["error"]["exit_code"] == 3);
  CHECK(m["stability"][0]["violated"] == "1-2Rx-2Ry > 0");

  RunConfig forced = parse_config_text(unstable + "stability: {override: true}\n");
  CHECK(run(forced, dir) == 2);
  m = manifest(dir);
  CHECK(m["error"]["kind"] == "divergence");
  CHECK(m["error"]["step"].get<std::size_t>() > 0);
  CHECK(m["snapshots"].size() == 1);

  ConfigError bad("time.dt", "must be positive");
  CHECK(exit_code_for(bad) == 1);
  write_failure_manifest(dir, bad);
  m = manifest(dir);
  CHECK(m["status"] == "failed");
  CHECK(m["error"]["key"] == "time.dt");
  CHECK(m["config"].is_null());
  fs::remove_all(dir);
}

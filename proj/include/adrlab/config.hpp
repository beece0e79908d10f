#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "adrlab/chemistry.hpp"
#include "adrlab/grid.hpp"
#include "adrlab/solver3d.hpp"

namespace adrlab {

enum class Mode { analytic2d, simulate2d, simulate3d, compare, converge, trajectories };

std::string to_string(Mode mode);
std::optional<Mode> parse_mode(const std::string& name);

struct GridBlock {
  int rank = 2;
  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<double, 3> length{0.0, 0.0, 0.0};
  double dirichlet = 0.0;
};

struct TimeBlock {
  double dt = 0.0;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  double clock_offset = 0.0;  // seconds after midnight at t = 0 (chemistry clock)
};

struct SeriesBlock {
  std::size_t m = 40;
  std::size_t n = 40;
  std::size_t quad_points = 0;  // 0: 8 nodes per half-wavelength of the top mode
};

struct InitialBlock {
  enum class Kind { sin_product, constant, point };
  Kind kind = Kind::sin_product;
  double value = 0.0;                   // constant
  std::array<std::size_t, 3> cell{};    // point
  std::vector<double> values;           // point, one per species, in input units
};

struct ReactionSpec {
  std::vector<unsigned> loss;
  std::vector<unsigned> gain;
  RateSchedule rate;
};

struct SourceSpec {
  std::size_t species = 0;
  std::array<std::size_t, 3> cell{};
  double rate = 0.0;  // input units
};

struct ChemistryBlock {
  std::vector<std::string> species;
  std::vector<ReactionSpec> reactions;
  std::vector<SourceSpec> sources;
  /// Volume of one cell in the input concentration's volume unit; inputs are
  /// rescaled to per-cell amounts with this factor. 1 means no conversion.
  double cell_volume = 1.0;
};

struct StabilityBlock {
  double alpha = kDefaultCflAlpha;
  bool override_stability = false;
};

struct TrajectoryBlock {
  bool all_cells = false;
  std::array<std::size_t, 3> lo{1, 1, 1};
  std::array<std::size_t, 3> hi{10, 10, 10};
  std::size_t stride = 10;
  double early_before = 100.0;  // clustering windows for the summary
  double late_from = 400.0;
};

struct ConvergeBlock {
  std::vector<std::size_t> levels{24, 46, 91};
  double t = 0.12;
};

struct RunConfig {
  Mode mode = Mode::simulate2d;
  GridBlock grid;
  TransportParams transport;
  TimeBlock time;
  InitialBlock initial;
  std::optional<SeriesBlock> series;
  std::optional<ChemistryBlock> chemistry;
  StabilityBlock stability;
  std::optional<SlicePlane> slice;
  std::optional<TrajectoryBlock> trajectories;
  ConvergeBlock converge;
  bool write_binary = false;
  std::filesystem::path out_dir = "out";
  std::filesystem::path source;

  /// Resolved configuration as JSON (for the manifest).
  nlohmann::json to_json() const;
};

/// Parses and validates a YAML run definition. Errors are ConfigError with
/// the key path, e.g. "time.dt". A given `mode` replaces the file's mode key.
RunConfig parse_config(const std::filesystem::path& path, std::optional<Mode> mode = std::nullopt);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& origin = {},
                            std::optional<Mode> mode = std::nullopt);

}  // namespace adrlab

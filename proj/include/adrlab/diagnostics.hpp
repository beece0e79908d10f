#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "adrlab/analytic2d.hpp"
#include "adrlab/chemistry.hpp"
#include "adrlab/grid.hpp"
#include "adrlab/snapshot.hpp"
#include "adrlab/solver3d.hpp"

namespace adrlab {

/// Discrete L2 norm over all species: sqrt(sum_s sum_cells c^2 * cell volume).
double l2_norm(const Field& field);

struct ErrorReport {
  double t = 0.0;
  double max_abs_error = 0.0;
  double l2_error = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
};

/// Pointwise max and L2 difference of two fields on the same lattice.
ErrorReport field_error(const Field& a, const Field& b, double t);

/// Difference between a single-species unit-square field and the series at t.
ErrorReport max_error_vs_analytic(const Field& numeric, const SeriesSolution& sol, double t,
                                  unsigned threads = 1);

/// Least-squares slope of log(error) against log(spacing).
double fit_order(std::span<const double> spacing, std::span<const double> errors);

struct RefinementLevel {
  Grid2D grid;
  double dt;
};

struct ConvergenceResult {
  double order = 0.0;
  std::vector<double> spacing;
  std::vector<double> times;  // actual snapshot times
  std::vector<double> errors;
};

/// Runs the 2-D solver from f on each level up to (the first step at or
/// after) t and fits the spatial order against the series. Needs at least
/// three levels with dt / dx^2 held fixed; an unstable level aborts with
/// StabilityError.
ConvergenceResult convergence_order(const std::vector<RefinementLevel>& levels,
                                    const SeriesSolution& sol,
                                    const std::function<double(double, double)>& f, double t,
                                    unsigned threads = 1);

struct NormSample {
  double t = 0.0;
  double norm = 0.0;
};

struct BoundednessResult {
  bool holds = true;
  std::vector<double> margin;  // e^{dbar t}(|u0|+1) - |u(t)| per sample
};

/// Checks |u(t)| <= e^{dbar t} (|u0| + 1) at every sample.
BoundednessResult boundedness_check(std::span<const NormSample> samples,
                                    const DbarEstimate& dbar, double u0_norm);

/// Same, deriving dbar from the network. Throws UnsupportedError when the
/// network is not monomolecular, where the bound is not established.
BoundednessResult boundedness_check(std::span<const NormSample> samples,
                                    const ReactionNetwork& network, double u0_norm);

/// Long-run absorbing-ball check: every sample with t >= burn_in satisfies
/// |u(t)| <= (1 + dbar) e^{1 + dbar}.
bool dissipativity_check(std::span<const NormSample> samples, const DbarEstimate& dbar,
                         double burn_in);

struct PositivityViolation {
  std::size_t snapshot = 0;
  std::size_t species = 0;
  std::size_t cell = 0;
  double value = 0.0;
};

struct PositivityResult {
  bool ok = true;
  std::optional<PositivityViolation> first;
};

/// Every value must be >= -1e-12 * (largest magnitude in its snapshot).
PositivityResult positivity_check(const SnapshotSeries& series);

/// Per-cell species trajectories sampled every `stride` steps.
class TrajectoryLog {
 public:
  TrajectoryLog(std::vector<std::array<std::size_t, 3>> cells, std::size_t stride,
                std::size_t species);

  const std::vector<std::array<std::size_t, 3>>& cells() const noexcept { return cells_; }
  std::size_t stride() const noexcept { return stride_; }
  std::size_t species() const noexcept { return species_; }
  std::size_t rows() const noexcept { return times_.size(); }

  double time(std::size_t row) const { return times_[row]; }
  const std::array<std::size_t, 3>& cell(std::size_t row) const { return cells_[cell_of_[row]]; }
  std::span<const double> values(std::size_t row) const {
    return std::span<const double>(values_).subspan(row * species_, species_);
  }

  /// Appends one row per tracked cell. Throws NumericError on non-finite data.
  void sample(double t, const Field& field);

 private:
  std::vector<std::array<std::size_t, 3>> cells_;
  std::size_t stride_;
  std::size_t species_;
  std::vector<double> times_;
  std::vector<std::size_t> cell_of_;
  std::vector<double> values_;
};

/// Builds a trajectory log and the run3d hook that fills it.
class TrajectoryRecorder {
 public:
  /// Cells must be interior nodes of `grid`; stride >= 1.
  TrajectoryRecorder(const Grid3D& grid, std::vector<std::array<std::size_t, 3>> cells,
                     std::size_t stride, std::size_t species);

  StepObserver observer();
  const TrajectoryLog& log() const noexcept { return log_; }

 private:
  TrajectoryLog log_;
};

TrajectoryRecorder record_trajectories(const Grid3D& grid,
                                       std::vector<std::array<std::size_t, 3>> cells,
                                       std::size_t stride, std::size_t species);

/// Every interior node with lo <= (i,j,k) <= hi componentwise.
std::vector<std::array<std::size_t, 3>> box_cells(const Grid3D& grid,
                                                  std::array<std::size_t, 3> lo,
                                                  std::array<std::size_t, 3> hi);

/// Largest Euclidean distance between the species vectors of any two rows
/// with t_lo <= t < t_hi (0 when fewer than two rows qualify).
double max_pairwise_distance(const TrajectoryLog& log, double t_lo, double t_hi);

}  // namespace adrlab

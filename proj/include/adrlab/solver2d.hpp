#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adrlab/grid.hpp"
#include "adrlab/snapshot.hpp"

namespace adrlab {

/// Diffusion numbers R = k dt / dx^2 and cell Peclet numbers P = u dx / 2k
/// of the explicit centred scheme. ok iff every grouped stencil coefficient
/// is positive: 1 - 2Rx - 2Ry > 0, Px < 1, Py < 1.
struct Stability2D {
  double rx = 0.0;
  double ry = 0.0;
  double px = 0.0;
  double py = 0.0;
  bool ok = false;
  std::optional<std::string> violated;  // first failed constraint

  std::string describe() const;
};

Stability2D stability2d(const TransportParams& params, const Grid2D& grid, double dt);

struct StepOptions {
  bool override_stability = false;
  unsigned threads = 1;
};

/// One explicit centred step:
///   c' = (1-2Rx-2Ry) c + (Rx-PxRx) c[i+1] + (Rx+PxRx) c[i-1]
///                      + (Ry-PyRy) c[j+1] + (Ry+PyRy) c[j-1]
/// on interior nodes, reading only the previous field; boundary reset to
/// the Dirichlet value. Throws StabilityError unless the report is ok or
/// the override is set, UnsupportedError for negative velocity.
Field step2d(const Field& field, const TransportParams& params, const Grid2D& grid, double dt,
             const StepOptions& options = {});

/// Steps from t = 0 to t_end, emitting a snapshot at the first step at or
/// after each requested time. Returns the number of steps taken. Throws
/// DivergenceError (with the step index) when the field turns non-finite.
std::size_t run2d(const Field& initial, const TransportParams& params, const Grid2D& grid,
                  double dt, double t_end, const std::vector<double>& snapshot_times,
                  const SnapshotSink& sink, const StepOptions& options = {});

SnapshotSeries run2d(const Field& initial, const TransportParams& params, const Grid2D& grid,
                     double dt, double t_end, const std::vector<double>& snapshot_times,
                     const StepOptions& options = {});

}  // namespace adrlab

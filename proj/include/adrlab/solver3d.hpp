#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adrlab/chemistry.hpp"
#include "adrlab/grid.hpp"
#include "adrlab/snapshot.hpp"

namespace adrlab {

inline constexpr double kDefaultCflAlpha = 0.9;

/// Stability numbers of the explicit first-order upwind scheme.
/// R = k dt / d^2, P = u d / k, advective = P R = u dt / d,
/// combined = 2(Rx+Ry+Rz) + PxRx + PyRy + PzRz, cfl = max advective.
/// ok iff combined < 1 and cfl <= alpha.
struct Stability3D {
  std::array<double, 3> r{0.0, 0.0, 0.0};
  std::array<double, 3> p{0.0, 0.0, 0.0};
  std::array<double, 3> advective{0.0, 0.0, 0.0};
  double combined = 0.0;
  double cfl = 0.0;
  double alpha = kDefaultCflAlpha;
  bool ok = false;
  std::optional<std::string> violated;

  std::string describe() const;
};

/// Throws ConfigError unless 0 < alpha < 1.
Stability3D stability3d(const TransportParams& params, const Grid3D& grid, double dt,
                        double alpha = kDefaultCflAlpha);

struct Step3DOptions {
  bool override_stability = false;
  unsigned threads = 1;
  double alpha = kDefaultCflAlpha;
};

/// One explicit step for every species s and interior node:
///   c' = c + dt * ( -ax (c - c[i-1]) - ay (c - c[j-1]) - az (c - c[k-1])
///                   + bx (c[i+1] - 2c + c[i-1]) + by (...) + bz (...) + R_s(t, c) )
/// with a = u / d and b = k / d^2 formed once per step, and R evaluated on
/// the previous state. Boundary nodes keep the Dirichlet value.
/// Throws UnsupportedError for negative velocity, StabilityError when the
/// report fails without override, DivergenceError on a non-finite update.
Field step3d(const Field& field, const TransportParams& params, const Grid3D& grid,
             const ReactionNetwork& network, double t, double dt,
             const Step3DOptions& options = {});

/// Axis-aligned 2-D cut through a 3-D field.
struct SlicePlane {
  int axis = 2;  // 0: x, 1: y, 2: z
  std::size_t index = 1;
};

/// Returns a rank-2 field over the two remaining axes (in increasing axis order).
Field extract_slice(const Field& field, const SlicePlane& plane);

/// Called after every step (and once for step 0) with the current state.
using StepObserver = std::function<void(std::size_t step, double t, const Field& field)>;

struct Run3DOptions {
  Step3DOptions step;
  double clock_offset = 0.0;  // chemistry time at step 0 (seconds after midnight)
  std::optional<SlicePlane> slice;
};

struct Run3DSummary {
  std::size_t steps = 0;
  Stability3D stability;
  double chemistry_estimate = 0.0;  // dt * Jacobian bound at the initial state
  std::vector<std::string> warnings;
  double seconds = 0.0;
  double cell_updates_per_second = 0.0;
};

/// Steps from t = 0 to t_end with first-step-at-or-after snapshots.
Run3DSummary run3d(const Field& initial, const TransportParams& params, const Grid3D& grid,
                   const ReactionNetwork& network, double dt, double t_end,
                   const std::vector<double>& snapshot_times, const SnapshotSink& sink,
                   const StepObserver& observer = {}, const Run3DOptions& options = {});

}  // namespace adrlab

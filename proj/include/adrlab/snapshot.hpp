#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "adrlab/grid.hpp"

namespace adrlab {

struct Snapshot {
  double requested_time = 0.0;
  std::size_t step = 0;  // first step whose time is at or after requested_time
  double time = 0.0;     // step * dt
  Field field;
  std::optional<Field> slice;  // 2-D cut of a 3-D field, when requested
};

using SnapshotSeries = std::vector<Snapshot>;

/// Receives snapshots as a run produces them.
using SnapshotSink = std::function<void(const Snapshot&)>;

/// Steps needed to reach `t` with step `dt` under first-step-at-or-after
/// semantics. A relative slack of 1e-9 absorbs representation error in t/dt.
std::size_t steps_to_reach(double t, double dt);

/// Checks snapshot times are sorted and lie in [0, t_end].
void validate_snapshot_times(const std::vector<double>& times, double t_end);

}  // namespace adrlab

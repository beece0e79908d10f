#include "adrlab/snapshot.hpp"

#include <cmath>

#include "adrlab/errors.hpp"

namespace adrlab {

std::size_t steps_to_reach(double t, double dt) {
  if (t <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
}

void validate_snapshot_times(const std::vector<double>& times, double t_end) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::string key = "time.snapshot_times[" + std::to_string(i) + "]";
    if (!(times[i] >= 0.0) || times[i] > t_end)
      throw ConfigError(key, "must lie in [0, t_end]");
    if (i > 0 && times[i] < times[i - 1]) throw ConfigError(key, "snapshot times must be sorted");
  }
}

}  // namespace adrlab

#include "adrlab/solver2d.hpp"

#include <cmath>
#include <sstream>

#include "adrlab/errors.hpp"
#include "adrlab/parallel.hpp"

namespace adrlab {

namespace {

double cell_peclet(double u, double spacing, double k) {
  if (u == 0.0) return 0.0;
  return u * spacing / (2.0 * k);
}

void check_inputs(const Field& field, const TransportParams& params, const Grid2D& grid,
                  double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time step must be positive");
  if (field.lattice() != grid.lattice())
    throw ConfigError("grid", "field does not live on the given grid");
  for (int a = 0; a < 2; ++a) {
    if (params.u[a] < 0.0)
      throw UnsupportedError("the centred 2-D scheme supports nonnegative velocities only");
    if (params.k[a] < 0.0) throw ConfigError("transport.k", "diffusivity must be nonnegative");
  }
}

/// Sweep `src` into `dst` (same lattice); boundary nodes of dst untouched.
void sweep(const Field& src, Field& dst, const Stability2D& st, unsigned threads) {
  const Lattice& l = src.lattice();
  const std::size_t nx = l.n[0];
  const std::size_t ny = l.n[1];
  const double c0 = 1.0 - 2.0 * st.rx - 2.0 * st.ry;
  const double cxp = st.rx - st.px * st.rx;
  const double cxm = st.rx + st.px * st.rx;
  const double cyp = st.ry - st.py * st.ry;
  const double cym = st.ry + st.py * st.ry;
  for (std::size_t s = 0; s < src.species(); ++s) {
    const double* in = src.species_values(s).data();
    double* out = dst.species_values(s).data();
    parallel_for(1, ny - 1, threads, [&](std::size_t j) {
      const double* row = in + j * nx;
      const double* up = row + nx;
      const double* down = row - nx;
      double* o = out + j * nx;
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        o[i] = c0 * row[i] + cxp * row[i + 1] + cxm * row[i - 1] + cyp * up[i] + cym * down[i];
      }
    });
  }
}

void require_stable(const Stability2D& st, const StepOptions& options) {
  if (!st.ok && !options.override_stability)
    throw StabilityError("step rejected: stability constraint violated: " + *st.violated,
                         st.describe());
}

}  // namespace

std::string Stability2D::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "Rx=" << rx << " Ry=" << ry << " Px=" << px << " Py=" << py
     << " ok=" << (ok ? "true" : "false");
  if (violated) os << " violated=\"" << *violated << "\"";
  return os.str();
}

Stability2D stability2d(const TransportParams& params, const Grid2D& grid, double dt) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  Stability2D st;
  st.rx = params.k[0] * dt / (grid.dx() * grid.dx());
  st.ry = params.k[1] * dt / (grid.dy() * grid.dy());
  st.px = cell_peclet(params.u[0], grid.dx(), params.k[0]);
  st.py = cell_peclet(params.u[1], grid.dy(), params.k[1]);
  if (!(1.0 - 2.0 * st.rx - 2.0 * st.ry > 0.0))
    st.violated = "1-2Rx-2Ry > 0";
  else if (!(st.px < 1.0))
    st.violated = "Px < 1";
  else if (!(st.py < 1.0))
    st.violated = "Py < 1";
  st.ok = !st.violated.has_value();
  return st;
}

Field step2d(const Field& field, const TransportParams& params, const Grid2D& grid, double dt,
             const StepOptions& options) {
  check_inputs(field, params, grid, dt);
  const Stability2D st = stability2d(params, grid, dt);
  require_stable(st, options);
  Field next = field;
  apply_dirichlet(next);
  sweep(field, next, st, options.threads);
  return next;
}

std::size_t run2d(const Field& initial, const TransportParams& params, const Grid2D& grid,
                  double dt, double t_end, const std::vector<double>& snapshot_times,
                  const SnapshotSink& sink, const StepOptions& options) {
  check_inputs(initial, params, grid, dt);
  if (!(t_end >= 0.0)) throw ConfigError("time.t_end", "must be nonnegative");
  validate_snapshot_times(snapshot_times, t_end);
  const Stability2D st = stability2d(params, grid, dt);
  require_stable(st, options);

  Field current = initial;
  apply_dirichlet(current);
  Field next = current;
  const std::size_t total = steps_to_reach(t_end, dt);
  std::size_t pending = 0;
  auto emit = [&](std::size_t step) {
    while (pending < snapshot_times.size() &&
           steps_to_reach(snapshot_times[pending], dt) <= step) {
      if (sink)
        sink(Snapshot{snapshot_times[pending], step, static_cast<double>(step) * dt, current, std::nullopt});
      ++pending;
    }
  };
  emit(0);
  for (std::size_t step = 1; step <= total; ++step) {
    sweep(current, next, st, options.threads);
    std::swap(current, next);
    for (double v : current.values()) {
      if (!std::isfinite(v))
        throw DivergenceError("field became non-finite at step " + std::to_string(step), step);
    }
    emit(step);
  }
  return total;
}

SnapshotSeries run2d(const Field& initial, const TransportParams& params, const Grid2D& grid,
                     double dt, double t_end, const std::vector<double>& snapshot_times,
                     const StepOptions& options) {
  SnapshotSeries out;
  run2d(initial, params, grid, dt, t_end, snapshot_times,
        [&](const Snapshot& s) { out.push_back(s); }, options);
  return out;
}

}  // namespace adrlab

#include "adrlab/solver3d.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "adrlab/errors.hpp"
#include "adrlab/parallel.hpp"

namespace adrlab {

namespace {

void check_inputs(const Field& field, const TransportParams& params, const Grid3D& grid,
                  const ReactionNetwork& network, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time step must be positive");
  if (field.lattice() != grid.lattice())
    throw ConfigError("grid", "field does not live on the given grid");
  for (int a = 0; a < 3; ++a) {
    if (params.u[a] < 0.0 || !std::isfinite(params.u[a]))
      throw UnsupportedError(
          "the upwind scheme is derived for nonnegative velocities; got u[" + std::to_string(a) +
          "] < 0");
    if (params.k[a] < 0.0 || !std::isfinite(params.k[a]))
      throw ConfigError("transport.k", "diffusivity must be nonnegative");
  }
  if (network.reaction_count() > 0 || network.has_sources()) {
    if (network.species_count() != field.species())
      throw ConfigError("chemistry.species", "network and field species counts differ");
  }
  const Lattice& l = grid.lattice();
  for (const auto& src : network.sources()) {
    if (src.cell >= l.cells()) throw ConfigError("chemistry.sources", "source cell outside grid");
    const auto c = l.coords(src.cell);
    if (l.is_boundary(c[0], c[1], c[2]))
      throw ConfigError("chemistry.sources", "source cell must be an interior node");
  }
}

void require_stable(const Stability3D& st, const Step3DOptions& options) {
  if (!st.ok && !options.override_stability)
    throw StabilityError("step rejected: stability constraint violated: " + *st.violated,
                         st.describe());
}

/// One sweep src -> dst. Boundary nodes of dst are not written.
void sweep(const Field& src, Field& dst, const TransportParams& params, const Lattice& l,
           const ReactionNetwork& network, double t, double dt, unsigned threads,
           std::size_t step) {
  const std::size_t nx = l.n[0];
  const std::size_t ny = l.n[1];
  const std::size_t nz = l.n[2];
  const std::size_t sx = 1;
  const std::size_t sy = nx;
  const std::size_t sz = nx * ny;
  const std::size_t cells = l.cells();
  const std::size_t species = src.species();

  const double ax = params.u[0] / l.spacing[0];
  const double ay = params.u[1] / l.spacing[1];
  const double az = params.u[2] / l.spacing[2];
  const double bx = params.k[0] / (l.spacing[0] * l.spacing[0]);
  const double by = params.k[1] / (l.spacing[1] * l.spacing[1]);
  const double bz = params.k[2] / (l.spacing[2] * l.spacing[2]);

  const bool chemistry = network.reaction_count() > 0 || network.has_sources();
  const std::vector<double> h = chemistry ? network.rate_values(t) : std::vector<double>{};
  const double* in = src.values().data();
  double* out = dst.values().data();

  parallel_for(1, nz - 1, threads, [&](std::size_t k) {
    std::vector<double> c(species), rates(species);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        const std::size_t idx = i * sx + j * sy + k * sz;
        if (chemistry) {
          for (std::size_t s = 0; s < species; ++s) {
            c[s] = in[s * cells + idx];
            rates[s] = 0.0;
          }
          network.accumulate_rates(h, c, idx, rates);
        }
        for (std::size_t s = 0; s < species; ++s) {
          const double* p = in + s * cells + idx;
          const double v = p[0];
          const double xm = p[-static_cast<std::ptrdiff_t>(sx)];
          const double xp = p[sx];
          const double ym = p[-static_cast<std::ptrdiff_t>(sy)];
          const double yp = p[sy];
          const double zm = p[-static_cast<std::ptrdiff_t>(sz)];
          const double zp = p[sz];
          const double r = chemistry ? rates[s] : 0.0;
          const double next =
              v + dt * (-ax * (v - xm) - ay * (v - ym) - az * (v - zm) +
                        bx * (xp - 2.0 * v + xm) + by * (yp - 2.0 * v + ym) +
                        bz * (zp - 2.0 * v + zm) + r);
          if (!std::isfinite(next)) {
            std::ostringstream os;
            os << "non-finite update at step " << step << ", node (" << i << ", " << j << ", "
               << k << "), species " << s;
            throw DivergenceError(os.str(), step);
          }
          out[s * cells + idx] = next;
        }
      }
    }
  });
}

}  // namespace

std::string Stability3D::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "Rx=" << r[0] << " Ry=" << r[1] << " Rz=" << r[2] << " Px=" << p[0] << " Py=" << p[1]
     << " Pz=" << p[2] << " combined=" << combined << " cfl=" << cfl << " alpha=" << alpha
     << " ok=" << (ok ? "true" : "false");
  if (violated) os << " violated=\"" << *violated << "\"";
  return os.str();
}

Stability3D stability3d(const TransportParams& params, const Grid3D& grid, double dt,
                        double alpha) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("stability.alpha", "must lie in (0, 1)");
  Stability3D st;
  st.alpha = alpha;
  const Lattice& l = grid.lattice();
  double diffusive = 0.0;
  double advective = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = l.spacing[a];
    st.r[a] = params.k[a] * dt / (d * d);
    if (params.u[a] == 0.0)
      st.p[a] = 0.0;
    else
      st.p[a] = params.k[a] > 0.0 ? params.u[a] * d / params.k[a]
                                  : std::numeric_limits<double>::infinity();
    st.advective[a] = params.u[a] * dt / d;
    diffusive += 2.0 * st.r[a];
    advective += st.advective[a];
    st.cfl = std::max(st.cfl, st.advective[a]);
  }
  st.combined = diffusive + advective;
  if (!(st.combined < 1.0))
    st.violated = "2Rx+2Ry+2Rz+PxRx+PyRy+PzRz < 1";
  else if (!(st.cfl <= alpha))
    st.violated = "max(u dt / d) <= alpha";
  st.ok = !st.violated.has_value();
  return st;
}

Field step3d(const Field& field, const TransportParams& params, const Grid3D& grid,
             const ReactionNetwork& network, double t, double dt, const Step3DOptions& options) {
  check_inputs(field, params, grid, network, dt);
  const Stability3D st = stability3d(params, grid, dt, options.alpha);
  require_stable(st, options);
  Field next = field;
  apply_dirichlet(next);
  sweep(field, next, params, grid.lattice(), network, t, dt, options.threads, 0);
  return next;
}

Field extract_slice(const Field& field, const SlicePlane& plane) {
  const Lattice& l = field.lattice();
  if (l.rank != 3) throw ConfigError("slice", "slices are taken from 3-D fields");
  if (plane.axis < 0 || plane.axis > 2) throw ConfigError("slice.axis", "must be x, y or z");
  if (plane.index >= l.n[plane.axis]) throw ConfigError("slice.index", "outside the grid");
  int a0 = plane.axis == 0 ? 1 : 0;
  int a1 = plane.axis == 2 ? 1 : 2;
  Lattice out;
  out.rank = 2;
  out.n = {l.n[a0], l.n[a1], 1};
  out.spacing = {l.spacing[a0], l.spacing[a1], 0.0};
  out.length = {l.length[a0], l.length[a1], 0.0};
  Field slice(out, field.species(), field.boundary_value());
  for (std::size_t s = 0; s < field.species(); ++s)
    for (std::size_t b = 0; b < out.n[1]; ++b)
      for (std::size_t a = 0; a < out.n[0]; ++a) {
        std::array<std::size_t, 3> ijk{};
        ijk[plane.axis] = plane.index;
        ijk[a0] = a;
        ijk[a1] = b;
        slice.at(s, a, b) = field.at(s, ijk[0], ijk[1], ijk[2]);
      }
  return slice;
}

Run3DSummary run3d(const Field& initial, const TransportParams& params, const Grid3D& grid,
                   const ReactionNetwork& network, double dt, double t_end,
                   const std::vector<double>& snapshot_times, const SnapshotSink& sink,
                   const StepObserver& observer, const Run3DOptions& options) {
  check_inputs(initial, params, grid, network, dt);
  if (!(t_end >= 0.0)) throw ConfigError("time.t_end", "must be nonnegative");
  if (!(options.clock_offset >= 0.0)) throw ConfigError("time.clock_offset", "must be nonnegative");
  validate_snapshot_times(snapshot_times, t_end);
  if (options.slice) {
    const auto& pl = *options.slice;
    if (pl.axis < 0 || pl.axis > 2 || pl.index >= grid.lattice().n[pl.axis])
      throw ConfigError("slice", "slice plane outside the grid");
  }

  Run3DSummary summary;
  summary.stability = stability3d(params, grid, dt, options.step.alpha);
  require_stable(summary.stability, options.step);

  Field current = initial;
  apply_dirichlet(current);

  if (network.reaction_count() > 0) {
    std::vector<double> c_max(initial.species(), 0.0);
    for (std::size_t s = 0; s < initial.species(); ++s)
      for (double v : current.species_values(s)) c_max[s] = std::max(c_max[s], std::abs(v));
    summary.chemistry_estimate = chemistry_step_estimate(network, c_max, dt);
    if (summary.chemistry_estimate > 0.5) {
      std::ostringstream os;
      os << "explicit chemistry may be unstable: dt * |dR/dc| estimate = "
         << summary.chemistry_estimate << " > 0.5";
      summary.warnings.push_back(os.str());
    }
  }

  Field next = current;
  const std::size_t total = steps_to_reach(t_end, dt);
  std::size_t pending = 0;
  auto emit = [&](std::size_t step) {
    while (pending < snapshot_times.size() &&
           steps_to_reach(snapshot_times[pending], dt) <= step) {
      if (sink) {
        Snapshot snap{snapshot_times[pending], step, static_cast<double>(step) * dt, current,
                      std::nullopt};
        if (options.slice) snap.slice = extract_slice(current, *options.slice);
        sink(snap);
      }
      ++pending;
    }
    if (observer) observer(step, static_cast<double>(step) * dt, current);
  };

  const auto start = std::chrono::steady_clock::now();
  emit(0);
  for (std::size_t step = 1; step <= total; ++step) {
    const double clock = options.clock_offset + static_cast<double>(step - 1) * dt;
    sweep(current, next, params, grid.lattice(), network, clock, dt, options.step.threads, step);
    std::swap(current, next);
    emit(step);
  }
  summary.steps = total;
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double updates = static_cast<double>(grid.lattice().interior_cells()) *
                         static_cast<double>(initial.species()) * static_cast<double>(total);
  summary.cell_updates_per_second = summary.seconds > 0.0 ? updates / summary.seconds : 0.0;
  return summary;
}

}  // namespace adrlab

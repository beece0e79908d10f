#include "adrlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "adrlab/errors.hpp"
#include "adrlab/solver2d.hpp"

namespace adrlab {

double l2_norm(const Field& field) {
  double sum = 0.0;
  for (double v : field.values()) sum += v * v;
  return std::sqrt(sum * field.lattice().cell_volume());
}

ErrorReport field_error(const Field& a, const Field& b, double t) {
  if (a.lattice() != b.lattice() || a.species() != b.species())
    throw ConfigError("grid", "compared fields live on different grids");
  ErrorReport rep;
  rep.t = t;
  const Lattice& l = a.lattice();
  rep.nx = l.n[0];
  rep.ny = l.n[1];
  rep.dx = l.spacing[0];
  rep.dy = l.spacing[1];
  double sq = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = std::abs(va[i] - vb[i]);
    rep.max_abs_error = std::max(rep.max_abs_error, d);
    sq += d * d;
  }
  rep.l2_error = std::sqrt(sq * l.cell_volume());
  return rep;
}

ErrorReport max_error_vs_analytic(const Field& numeric, const SeriesSolution& sol, double t,
                                  unsigned threads) {
  const Lattice& l = numeric.lattice();
  if (l.rank != 2 || numeric.species() != 1)
    throw ConfigError("grid", "analytic comparison needs a single-species 2-D field");
  const Grid2D grid = make_grid2d(l.n[0], l.n[1], l.length[0], l.length[1]);
  if (grid.lattice() != l) throw ConfigError("grid", "field lattice is not a uniform grid");
  return field_error(numeric, sample_series(sol, grid, t, threads), t);
}

double fit_order(std::span<const double> spacing, std::span<const double> errors) {
  if (spacing.size() != errors.size() || spacing.size() < 2)
    throw InputError("fit_order needs matching spacing and error lists of length >= 2");
  const std::size_t n = spacing.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spacing[i] > 0.0) || !(errors[i] > 0.0))
      throw NumericError("fit_order needs positive spacings and errors");
    lx[i] = std::log(spacing[i]);
    ly[i] = std::log(errors[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw InputError("fit_order needs distinct spacings");
  return sxy / sxx;
}

ConvergenceResult convergence_order(const std::vector<RefinementLevel>& levels,
                                    const SeriesSolution& sol,
                                    const std::function<double(double, double)>& f, double t,
                                    unsigned threads) {
  if (levels.size() < 3) throw ConfigError("converge.levels", "at least three levels are needed");
  const double ratio0 = levels[0].dt / (levels[0].grid.dx() * levels[0].grid.dx());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const double ratio = levels[i].dt / (levels[i].grid.dx() * levels[i].grid.dx());
    if (std::abs(ratio - ratio0) > 1e-9 * ratio0)
      throw ConfigError("converge.levels", "dt / dx^2 must be the same on every level");
  }
  const TransportParams params{{sol.u(), sol.u(), 0.0}, {sol.k(), sol.k(), 0.0}};
  ConvergenceResult out;
  for (const auto& level : levels) {
    const Stability2D st = stability2d(params, level.grid, level.dt);
    if (!st.ok)
      throw StabilityError("refinement level nx=" + std::to_string(level.grid.nx()) +
                               " is unstable: " + *st.violated,
                           st.describe());
    const Field initial = sample_initial_2d(level.grid, f);
    const auto snaps = run2d(initial, params, level.grid, level.dt, t, {t}, {false, threads});
    const Snapshot& last = snaps.back();
    const ErrorReport rep = max_error_vs_analytic(last.field, sol, last.time, threads);
    out.spacing.push_back(level.grid.dx());
    out.times.push_back(last.time);
    out.errors.push_back(rep.max_abs_error);
  }
  out.order = fit_order(out.spacing, out.errors);
  return out;
}

BoundednessResult boundedness_check(std::span<const NormSample> samples,
                                    const DbarEstimate& dbar, double u0_norm) {
  BoundednessResult res;
  res.margin.reserve(samples.size());
  for (const auto& s : samples) {
    const double bound = std::exp(dbar.dbar * s.t) * (u0_norm + 1.0);
    const double margin = bound - s.norm;
    res.margin.push_back(margin);
    if (!(margin >= 0.0)) res.holds = false;
  }
  return res;
}

BoundednessResult boundedness_check(std::span<const NormSample> samples,
                                    const ReactionNetwork& network, double u0_norm) {
  if (!classify_H(network).holds)
    throw UnsupportedError(
        "boundedness check applies to monomolecular networks only (a reaction consumes more "
        "than one molecule)");
  return boundedness_check(samples, compute_dbar(network), u0_norm);
}

bool dissipativity_check(std::span<const NormSample> samples, const DbarEstimate& dbar,
                         double burn_in) {
  const double radius = (1.0 + dbar.dbar) * std::exp(1.0 + dbar.dbar);
  return std::all_of(samples.begin(), samples.end(), [&](const NormSample& s) {
    return s.t < burn_in || s.norm <= radius;
  });
}

PositivityResult positivity_check(const SnapshotSeries& series) {
  for (std::size_t n = 0; n < series.size(); ++n) {
    const Field& f = series[n].field;
    double scale = 0.0;
    for (double v : f.values()) scale = std::max(scale, std::abs(v));
    const double tol = -1e-12 * scale;
    for (std::size_t s = 0; s < f.species(); ++s) {
      auto v = f.species_values(s);
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (!(v[c] >= tol)) return {false, PositivityViolation{n, s, c, v[c]}};
      }
    }
  }
  return {};
}

TrajectoryLog::TrajectoryLog(std::vector<std::array<std::size_t, 3>> cells, std::size_t stride,
                             std::size_t species)
    : cells_(std::move(cells)), stride_(stride), species_(species) {
  if (stride_ == 0) throw ConfigError("trajectories.stride", "must be at least 1");
  if (species_ == 0) throw ConfigError("species", "at least one species is required");
}

void TrajectoryLog::sample(double t, const Field& field) {
  if (field.species() != species_)
    throw ConfigError("trajectories", "field species count does not match the log");
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& ijk = cells_[c];
    times_.push_back(t);
    cell_of_.push_back(c);
    for (std::size_t s = 0; s < species_; ++s) {
      const double v = field.at(s, ijk[0], ijk[1], ijk[2]);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite trajectory value at t=" << t << ", node (" << ijk[0] << ", " << ijk[1]
           << ", " << ijk[2] << ")";
        throw NumericError(os.str());
      }
      values_.push_back(v);
    }
  }
}

TrajectoryRecorder::TrajectoryRecorder(const Grid3D& grid,
                                       std::vector<std::array<std::size_t, 3>> cells,
                                       std::size_t stride, std::size_t species)
    : log_(std::move(cells), stride, species) {
  const Lattice& l = grid.lattice();
  for (const auto& c : log_.cells()) {
    if (c[0] >= l.n[0] || c[1] >= l.n[1] || c[2] >= l.n[2] || l.is_boundary(c[0], c[1], c[2]))
      throw ConfigError("trajectories.cells", "tracked cells must be interior nodes");
  }
}

StepObserver TrajectoryRecorder::observer() {
  return [this](std::size_t step, double t, const Field& field) {
    if (step % log_.stride() == 0) log_.sample(t, field);
  };
}

TrajectoryRecorder record_trajectories(const Grid3D& grid,
                                       std::vector<std::array<std::size_t, 3>> cells,
                                       std::size_t stride, std::size_t species) {
  return TrajectoryRecorder(grid, std::move(cells), stride, species);
}

std::vector<std::array<std::size_t, 3>> box_cells(const Grid3D& grid,
                                                  std::array<std::size_t, 3> lo,
                                                  std::array<std::size_t, 3> hi) {
  const Lattice& l = grid.lattice();
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t k = std::max<std::size_t>(lo[2], 1); k <= hi[2] && k + 1 < l.n[2]; ++k)
    for (std::size_t j = std::max<std::size_t>(lo[1], 1); j <= hi[1] && j + 1 < l.n[1]; ++j)
      for (std::size_t i = std::max<std::size_t>(lo[0], 1); i <= hi[0] && i + 1 < l.n[0]; ++i)
        out.push_back({i, j, k});
  return out;
}

double max_pairwise_distance(const TrajectoryLog& log, double t_lo, double t_hi) {
  const std::size_t s = log.species();
  std::vector<std::vector<double>> points;
  for (std::size_t r = 0; r < log.rows(); ++r) {
    const double t = log.time(r);
    if (t >= t_lo && t < t_hi) {
      auto v = log.values(r);
      points.emplace_back(v.begin(), v.end());
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<double> flat;
  flat.reserve(points.size() * s);
  for (const auto& p : points) flat.insert(flat.end(), p.begin(), p.end());
  const std::size_t n = points.size();
  double best = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double* pa = &flat[a * s];
    for (std::size_t b = a + 1; b < n; ++b) {
      const double* pb = &flat[b * s];
      double d2 = 0.0;
      for (std::size_t c = 0; c < s; ++c) {
        const double d = pa[c] - pb[c];
        d2 += d * d;
      }
      best = std::max(best, d2);
    }
  }
  return std::sqrt(best);
}

}  // namespace adrlab

#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "adrlab/diagnostics.hpp"
#include "adrlab/errors.hpp"
#include "adrlab/solver2d.hpp"

using namespace adrlab;

namespace {

double sin_product(double x, double y) {
  return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
}

}  // namespace

TEST_CASE("l2_norm") {
  const Grid2D g = make_grid2d(46, 46, 1.0, 1.0);
  CHECK(l2_norm(Field(g, 1)) == 0.0);
  const Field ones = sample_initial_2d(g, [](double, double) { return 1.0; });
  CHECK(l2_norm(ones) == doctest::Approx(std::sqrt(44.0 * 44.0 * g.dx() * g.dy())).epsilon(1e-15));
  Field two(g, 2);
  std::copy(ones.values().begin(), ones.values().end(), two.species_values(0).begin());
  std::copy(ones.values().begin(), ones.values().end(), two.species_values(1).begin());
  CHECK(l2_norm(two) == doctest::Approx(std::sqrt(2.0) * l2_norm(ones)).epsilon(1e-15));
}

TEST_CASE("field_error symmetry and analytic comparison") {
  const Grid2D g = make_grid2d(46, 46, 1.0, 1.0);
  const SeriesSolution sol = build_series(sin_product, 5.0, 0.5);
  const Field exact = sample_series(sol, g, 0.05);
  CHECK(max_error_vs_analytic(exact, sol, 0.05).max_abs_error == 0.0);

  const Field f0 = sample_initial_2d(g, sin_product);
  const ErrorReport r0 = max_error_vs_analytic(f0, sol, 0.0);
  CHECK(r0.max_abs_error == doctest::Approx(1.4455250680930898e-3).epsilon(1e-9));
  CHECK(r0.nx == 46);
  CHECK(r0.dx == g.dx());

  const ErrorReport ab = field_error(f0, exact, 0.0);
  const ErrorReport ba = field_error(exact, f0, 0.0);
  CHECK(ab.max_abs_error == ba.max_abs_error);
  CHECK(ab.l2_error == ba.l2_error);
  CHECK(ab.l2_error >= 0.0);

  const SnapshotSeries run =
      run2d(f0, TransportParams::uniform(5.0, 0.5), g, 1e-4, 0.12, {0.12});
  const ErrorReport r12 = max_error_vs_analytic(run[0].field, sol, run[0].time);
  CHECK(r12.max_abs_error == doctest::Approx(7.283006717142271e-4).epsilon(1e-9));

  CHECK_THROWS_AS(field_error(f0, Field(make_grid2d(45, 46, 1, 1), 1), 0.0), ConfigError);
  CHECK_THROWS_AS(max_error_vs_analytic(Field(make_grid2d(46, 46, 2, 1), 1), sol, 0.0),
                  ConfigError);
}

TEST_CASE("fit_order") {
  const std::vector<double> h{0.4, 0.2, 0.1};
  CHECK(fit_order(h, std::vector<double>{1.0, 0.25, 0.0625}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit_order(h, std::vector<double>{0.3, 0.3, 0.3}) == doctest::Approx(0.0).scale(1.0));
  CHECK(fit_order(h, std::vector<double>{7.0, 1.75, 0.4375}) ==
        doctest::Approx(fit_order(h, std::vector<double>{1.0, 0.25, 0.0625})).epsilon(1e-14));
  CHECK_THROWS_AS(fit_order(h, std::vector<double>{1.0, 0.0, 1.0}), NumericError);
  CHECK_THROWS_AS(fit_order(h, std::vector<double>{1.0}), InputError);
}

TEST_CASE("convergence_order on the refinement ladder") {
  const SeriesSolution sol = build_series(sin_product, 5.0, 0.5);
  std::vector<RefinementLevel> levels;
  for (std::size_t n : {24, 46, 91}) {
    const Grid2D g = make_grid2d(n, n, 1.0, 1.0);
    const double s = g.dx() * 45.0;
    levels.push_back({g, 1e-4 * s * s});
  }
  const ConvergenceResult r = convergence_order(levels, sol, sin_product, 0.12, 2);
  CHECK(r.order == doctest::Approx(2.016).epsilon(1e-3));
  CHECK(r.order >= 1.7);
  CHECK(r.order <= 2.3);
  CHECK(r.errors[1] == doctest::Approx(7.283006717142271e-4).epsilon(1e-9));
  CHECK(r.times[0] == doctest::Approx(0.120198).epsilon(1e-5));

  std::vector<RefinementLevel> bad = levels;
  bad[2].dt *= 2.0;
  CHECK_THROWS_AS(convergence_order(bad, sol, sin_product, 0.12), ConfigError);
  std::vector<RefinementLevel> two(levels.begin(), levels.begin() + 2);
  CHECK_THROWS_AS(convergence_order(two, sol, sin_product, 0.12), ConfigError);
  std::vector<RefinementLevel> unstable;
  for (std::size_t n : {11, 21, 41}) {
    const Grid2D g = make_grid2d(n, n, 1.0, 1.0);
    unstable.push_back({g, 0.6 * g.dx() * g.dx()});
  }
  CHECK_THROWS_AS(convergence_order(unstable, sol, sin_product, 0.01), StabilityError);
}

TEST_CASE("boundedness_check") {
  const std::vector<NormSample> flat{{0.0, 3.0}, {1.0, 3.0}, {5.0, 3.0}};
  const auto r = boundedness_check(flat, DbarEstimate{0.0, 0}, 3.0);
  CHECK(r.holds);
  for (double m : r.margin) CHECK(m == 1.0);

  const std::vector<NormSample> decay{{0.0, 2.0}, {1.0, 1.5}, {2.0, 1.0}};
  const auto d = boundedness_check(decay, DbarEstimate{0.0, 1}, 2.0);
  CHECK(d.holds);
  CHECK(d.margin[2] > d.margin[1]);
  CHECK(d.margin[1] > d.margin[0]);

  const std::vector<NormSample> grow{{0.0, 1.0}, {1.0, 10.0}};
  CHECK_FALSE(boundedness_check(grow, DbarEstimate{0.5, 1}, 1.0).holds);

  CHECK_THROWS_AS(boundedness_check(flat, ozone_network(1e-16), 3.0), UnsupportedError);
  const ReactionNetwork ab({"A", "B"}, {{{1, 0}, {0, 1}, RateSchedule::constant(0.5)},
                                         {{0, 1}, {1, 0}, RateSchedule::constant(0.25)}});
  CHECK(boundedness_check(flat, ab, 3.0).holds);
}

TEST_CASE("dissipativity_check") {
  const DbarEstimate d{0.0, 1};
  const double radius = std::exp(1.0);
  const std::vector<NormSample> s{{0.0, 100.0}, {10.0, radius}, {20.0, 0.1}};
  CHECK(dissipativity_check(s, d, 5.0));
  CHECK_FALSE(dissipativity_check(s, d, 0.0));
}

TEST_CASE("positivity_check") {
  const Grid2D g = make_grid2d(11, 11, 1.0, 1.0);
  SnapshotSeries zero{{0.0, 0, 0.0, Field(g, 1), std::nullopt}};
  CHECK(positivity_check(zero).ok);

  const Field f0 = sample_initial_2d(g, sin_product);
  const auto stable = run2d(f0, TransportParams::uniform(1.0, 0.5), g, 1e-3, 0.1, {0.0, 0.05, 0.1});
  CHECK(positivity_check(stable).ok);

  Field spike(g, 1);
  spike.at(0, 5, 5) = 1.0;
  const auto wild = run2d(spike, TransportParams::uniform(0.0, 1.0), g, 0.01, 0.05, {0.0, 0.05},
                          {true, 1});
  const auto res = positivity_check(wild);
  CHECK_FALSE(res.ok);
  REQUIRE(res.first.has_value());
  CHECK(res.first->snapshot == 1);
  CHECK(res.first->value < 0.0);

  SnapshotSeries tiny{{0.0, 0, 0.0, f0, std::nullopt}};
  tiny[0].field.at(0, 3, 3) = -1e-14;
  CHECK(positivity_check(tiny).ok);
}

TEST_CASE("trajectory recording") {
  const Grid3D g = make_grid3d(6, 6, 6, 5.0, 5.0, 5.0);
  const std::vector<double> v{1.0, 2.0, 3.0};
  const Field f0 = point_initial_3d(g, v, {2, 2, 2});

  SUBCASE("zero dynamics give constant rows") {
    TrajectoryRecorder rec = record_trajectories(g, {{2, 2, 2}}, 3, 3);
    const ReactionNetwork none({"a", "b", "c"}, {});
    run3d(f0, TransportParams::uniform(0.0, 0.0), g, none, 0.5, 5.0, {}, {}, rec.observer());
    const TrajectoryLog& log = rec.log();
    CHECK(log.rows() == 4);  // steps 0, 3, 6, 9
    for (std::size_t r = 0; r < log.rows(); ++r) {
      CHECK(log.values(r)[2] == 3.0);
      CHECK(log.time(r) == 1.5 * static_cast<double>(r));
      CHECK(log.cell(r) == std::array<std::size_t, 3>{2, 2, 2});
    }
    CHECK(max_pairwise_distance(log, 0.0, 100.0) == 0.0);
  }

  SUBCASE("rows are time-ordered and distances computed exactly") {
    TrajectoryRecorder rec = record_trajectories(g, box_cells(g, {1, 1, 1}, {2, 2, 2}), 1, 3);
    run3d(f0, TransportParams::uniform(0.1, 0.01), g, ReactionNetwork({"a", "b", "c"}, {}), 1.0,
          4.0, {}, {}, rec.observer());
    const TrajectoryLog& log = rec.log();
    CHECK(log.rows() == 5 * 8);
    for (std::size_t r = 1; r < log.rows(); ++r) CHECK(log.time(r) >= log.time(r - 1));
    // Early window holds the initial spike; distance from it to zero is |(1,2,3)|.
    CHECK(max_pairwise_distance(log, 0.0, 0.5) == doctest::Approx(std::sqrt(14.0)));
    // Brute force against the library.
    double best = 0.0;
    for (std::size_t a = 0; a < log.rows(); ++a)
      for (std::size_t b = 0; b < log.rows(); ++b) {
        double d2 = 0.0;
        for (int s = 0; s < 3; ++s) {
          const double d = log.values(a)[s] - log.values(b)[s];
          d2 += d * d;
        }
        best = std::max(best, d2);
      }
    CHECK(max_pairwise_distance(log, 0.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(std::sqrt(best)).epsilon(1e-15));
  }

  CHECK(box_cells(g, {0, 0, 0}, {100, 100, 100}).size() == 64);
  CHECK_THROWS_AS(record_trajectories(g, {{0, 1, 1}}, 1, 3), ConfigError);
  CHECK_THROWS_AS(record_trajectories(g, {{1, 1, 1}}, 0, 3), ConfigError);
}

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "adrlab/chemistry.hpp"
#include "adrlab/errors.hpp"

using namespace adrlab;

TEST_CASE("photolysis_k1 reference points") {
  CHECK(photolysis_k1(12 * 3600.0) == doctest::Approx(1.0966e-2).epsilon(1e-4));
  CHECK(std::abs(photolysis_k1(12 * 3600.0) - 1.0966e-2) <= 1e-5);
  CHECK(photolysis_k1(12 * 3600.0) == 1e-5 * std::exp(7.0));
  CHECK(photolysis_k1(2 * 3600.0) == 1e-40);
  CHECK(photolysis_k1(4 * 3600.0) == 1e-5);
  CHECK(photolysis_k1(4 * 3600.0 - 1e-9) == 1e-40);
  CHECK(photolysis_k1(20 * 3600.0) == 1e-40);
  CHECK(photolysis_k1(20 * 3600.0 - 1.0) > 1e-5);
  CHECK(photolysis_k1(0.0) == 1e-40);
  CHECK(photolysis_k1(36 * 3600.0) == photolysis_k1(12 * 3600.0));
  CHECK_THROWS_AS(photolysis_k1(-1.0), InputError);
  CHECK_THROWS_AS(photolysis_k1(NAN), InputError);
}

TEST_CASE("photolysis_k1 bounds and exact 24 h period") {
  std::mt19937_64 rng(2024);
  // Multiples of 2^-20 s below 72 h: t and t + 86400 are both exact doubles.
  std::uniform_int_distribution<std::uint64_t> ticks(0, (72ull * 3600ull) << 20);
  const double lo = 1e-40;
  const double hi = 1e-5 * std::exp(7.0);
  for (int i = 0; i < 1000000; ++i) {
    const double t = std::ldexp(static_cast<double>(ticks(rng)), -20);
    const double k = photolysis_k1(t);
    if (!(k >= lo && k <= hi)) FAIL("k1 out of bounds at t=" << t);
    if (photolysis_k1(t + 86400.0) != k) FAIL("not periodic at t=" << t);
  }
}

TEST_CASE("reaction_rates on the ozone network") {
  const ReactionNetwork net = ozone_network(1e-16);
  const std::vector<double> zero{0, 0, 0};
  const auto r0 = reaction_rates(net, 12 * 3600.0, zero, 0);
  CHECK(r0 == std::vector<double>{0.0, 0.0, 0.0});

  SUBCASE("k1 forced to zero") {
    const ReactionNetwork off(
        {"NO", "NO2", "O3"},
        {{{0, 1, 0}, {1, 0, 1}, RateSchedule::constant(0.0)},
         {{1, 0, 1}, {0, 1, 0}, RateSchedule::constant(1e-16)}});
    const std::vector<double> c{3e8, 2e11, 7e11};
    const double g = 1e-16 * 3e8 * 7e11;
    const auto r = reaction_rates(off, 0.0, c, 0);
    CHECK(r[0] == -g);
    CHECK(r[1] == g);
    CHECK(r[2] == -g);
  }

  SUBCASE("noon at the source cell") {
    const ReactionNetwork src = ozone_network(1e-16, 1e6, std::size_t{42});
    const std::vector<double> c{1.3e8, 5.0e11, 8.0e11};
    const auto r = reaction_rates(src, 12 * 3600.0, c, 42);
    // Hand evaluation: k1 c2 = 5.48316579e9, k2 c1 c3 = 1.04e4, sigma = 1e6.
    const double k1 = 1e-5 * std::exp(7.0);
    const double expected_no = k1 * 5.0e11 - 1e-16 * 1.3e8 * 8.0e11 + 1e6;
    CHECK(r[0] == doctest::Approx(expected_no).epsilon(1e-14));
    CHECK(r[0] == doctest::Approx(5484155392.142293).epsilon(1e-9));
    CHECK(r[1] == doctest::Approx(-(k1 * 5.0e11) + 1.04e4).epsilon(1e-14));
    const auto away = reaction_rates(src, 12 * 3600.0, c, 41);
    CHECK(away[0] == doctest::Approx(expected_no - 1e6).epsilon(1e-14));
  }

  CHECK_THROWS_AS(reaction_rates(net, 0.0, std::vector<double>{1, 2}, 0), InputError);
  CHECK_THROWS_AS(reaction_rates(net, 0.0, std::vector<double>{1, NAN, 2}, 0), InputError);
}

TEST_CASE("overflow names the reaction") {
  const ReactionNetwork net = ozone_network(1e-16);
  const std::vector<double> c{1e300, 0, 1e300};
  try {
    reaction_rates(net, 0.0, c, 5);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("reaction 1") != std::string::npos);
  }
}

TEST_CASE("rate values reach their declared bounds") {
  const ReactionNetwork net = ozone_network(1e-16);
  const auto h = net.rate_values(12 * 3600.0);
  CHECK(h[0] == photolysis_k1_max());
  CHECK(h[1] == 1e-16);
}

TEST_CASE("stoichiometric conservation and cone invariance") {
  const ReactionNetwork net = ozone_network(1e-16);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> logc(0.0, 14.0);
  std::uniform_real_distribution<double> t(0.0, 72 * 3600.0);
  std::bernoulli_distribution zero(0.25);
  for (int i = 0; i < 100000; ++i) {
    std::vector<double> c(3);
    for (auto& v : c) v = zero(rng) ? 0.0 : std::pow(10.0, logc(rng));
    const auto r = reaction_rates(net, t(rng), c, 0);
    if (r[0] + r[1] != 0.0 || r[1] + r[2] != 0.0) FAIL("not conserved");
    for (int j = 0; j < 3; ++j)
      if (c[j] == 0.0 && r[j] < 0.0) FAIL("leaves the positive cone");
  }
}

TEST_CASE("classify_H") {
  const ReactionNetwork constant_source({"A"}, {{{0}, {1}, RateSchedule::constant(1.0)}});
  auto h = classify_H(constant_source);
  CHECK(h.holds);
  CHECK(h.beta == 0);

  h = classify_H(ozone_network(1e-16));
  CHECK_FALSE(h.holds);
  CHECK_FALSE(h.beta.has_value());

  const ReactionNetwork ab({"A", "B"}, {{{1, 0}, {0, 1}, RateSchedule::constant(0.5)}});
  h = classify_H(ab);
  CHECK(h.holds);
  CHECK(h.beta == 1);

  const ReactionNetwork mixed({"A"}, {{{1}, {0}, RateSchedule::constant(1.0)},
                                      {{0}, {1}, RateSchedule::constant(1.0)}});
  h = classify_H(mixed);
  CHECK(h.holds);
  CHECK(h.beta == 1);
}

TEST_CASE("compute_dbar") {
  const ReactionNetwork single({"A", "B"}, {{{1, 0}, {0, 3}, RateSchedule::constant(7.0)}});
  CHECK(compute_dbar(single).dbar == 0.0);

  const ReactionNetwork two({"A"}, {{{0}, {1}, RateSchedule::constant(1.0)},
                                    {{0}, {1}, RateSchedule::constant(1.0)}});
  CHECK(compute_dbar(two).dbar == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(compute_dbar(two).beta == 0);

  const ReactionNetwork gl({"A"}, {{{0}, {2}, RateSchedule::constant(1.0)},
                                   {{1}, {0}, RateSchedule::constant(1.0)}});
  CHECK(compute_dbar(gl).dbar == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));

  CHECK_THROWS_AS(compute_dbar(ozone_network(1e-16)), UnsupportedError);
}

TEST_CASE("network validation") {
  CHECK_THROWS_AS(ReactionNetwork({}, {}), ConfigError);
  CHECK_THROWS_AS(ReactionNetwork({"A"}, {{{0, 1}, {1}, RateSchedule::constant(1.0)}}),
                  ConfigError);
  CHECK_THROWS_AS(ReactionNetwork({"A"}, {{{0}, {1}, RateSchedule::constant(-1.0)}}),
                  ConfigError);
  CHECK_THROWS_AS(ReactionNetwork({"A"}, {}, {{3, 0, 1.0}}), ConfigError);
}

TEST_CASE("to_cell_units") {
  const double v = 1e7;
  const ReactionNetwork cell = to_cell_units(ozone_network(1e-16, 1e6, std::size_t{7}), v);
  CHECK(cell.reactions()[0].rate(12 * 3600.0) == photolysis_k1(12 * 3600.0));
  CHECK(cell.reactions()[1].rate(0.0) == doctest::Approx(1e-23).epsilon(1e-15));
  CHECK(cell.sources()[0].rate == 1e13);

  // Per-volume and per-cell rates describe the same kinetics: R_cell(V c) = V R(c).
  const ReactionNetwork vol = ozone_network(1e-16, 1e6, std::size_t{7});
  const std::vector<double> c{1.3e8, 5e11, 8e11};
  const std::vector<double> cv{1.3e15, 5e18, 8e18};
  for (double t : {0.0, 6 * 3600.0, 12 * 3600.0}) {
    const auto a = reaction_rates(vol, t, c, 7);
    const auto b = reaction_rates(cell, t, cv, 7);
    for (int j = 0; j < 3; ++j) CHECK(b[j] == doctest::Approx(v * a[j]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(to_cell_units(vol, 0.0), ConfigError);
}

TEST_CASE("chemistry_step_estimate") {
  const ReactionNetwork ab({"A", "B"}, {{{1, 0}, {0, 1}, RateSchedule::constant(0.25)}});
  const std::vector<double> cmax{1.0, 1.0};
  CHECK(chemistry_step_estimate(ab, cmax, 2.0) == 0.5);
  const ReactionNetwork oz = ozone_network(2.0);
  const std::vector<double> c{3.0, 0.0, 5.0};
  // d(k2 c1 c3) row sum bound: k2 (c3 + c1) = 16 on every species; k1 term adds d1.
  CHECK(chemistry_step_estimate(oz, c, 1.0) == doctest::Approx(16.0 + photolysis_k1_max()));
}

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "adrlab/errors.hpp"
#include "adrlab/grid.hpp"

using namespace adrlab;

TEST_CASE("make_grid2d spacing") {
  const Grid2D g = make_grid2d(46, 46, 1.0, 1.0);
  CHECK(g.dx() == 1.0 / 45.0);
  CHECK(g.dy() == 1.0 / 45.0);
  CHECK(g.dx() == doctest::Approx(0.02222).epsilon(1e-3));

  const Grid2D small = make_grid2d(3, 3, 1.0, 1.0);
  CHECK(small.dx() == 0.5);
  CHECK(small.dy() == 0.5);

  const Grid2D big = make_grid2d(101, 101, 1000.0, 1000.0);
  CHECK(big.dx() == 10.0);
  CHECK(big.dy() == 10.0);

  const Grid3D g3 = make_grid3d(101, 101, 101, 1000.0, 1000.0, 1000.0);
  CHECK(g3.dz() == 10.0);
  CHECK(g3.lattice().cells() == 101u * 101u * 101u);
}

TEST_CASE("make_grid rejects bad counts and lengths naming the field") {
  auto key_of = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("none");
  };
  CHECK(key_of([] { make_grid2d(2, 5, 1, 1); }) == "nx");
  CHECK(key_of([] { make_grid2d(5, 1, 1, 1); }) == "ny");
  CHECK(key_of([] { make_grid2d(5, 5, 0, 1); }) == "Lx");
  CHECK(key_of([] { make_grid2d(5, 5, 1, -1); }) == "Ly");
  CHECK(key_of([] { make_grid2d(5, 5, 1, NAN); }) == "Ly");
  CHECK(key_of([] { make_grid3d(5, 5, 2, 1, 1, 1); }) == "nz");
  CHECK(key_of([] { make_grid3d(5, 5, 5, 1, 1, 0); }) == "Lz");
}

TEST_CASE("spacing identity within one ulp") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> n(3, 500);
  std::uniform_real_distribution<double> len(1e-3, 1e4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t nx = n(rng);
    const double lx = len(rng);
    const Grid2D g = make_grid2d(nx, 3, lx, 1.0);
    const double back = static_cast<double>(nx - 1) * g.dx();
    CHECK(std::abs(back - lx) <= std::nextafter(lx, INFINITY) - lx);
  }
}

TEST_CASE("flat index is a bijection") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> n(3, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid3D g = make_grid3d(n(rng), n(rng), n(rng), 1, 2, 3);
    const Lattice& l = g.lattice();
    std::vector<int> seen(l.cells(), 0);
    for (std::size_t k = 0; k < l.n[2]; ++k)
      for (std::size_t j = 0; j < l.n[1]; ++j)
        for (std::size_t i = 0; i < l.n[0]; ++i) {
          const std::size_t f = l.index(i, j, k);
          REQUIRE(f < l.cells());
          ++seen[f];
          const auto c = l.coords(f);
          CHECK((c[0] == i && c[1] == j && c[2] == k));
        }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("field layout is species-major") {
  const Grid2D g = make_grid2d(4, 3, 1, 1);
  Field f(g, 2);
  CHECK(f.values().size() == 24);
  f.at(1, 2, 1) = 5.0;
  CHECK(f.values()[12 + 2 + 4 * 1] == 5.0);
  CHECK(f.species_values(1)[6] == 5.0);
  CHECK_THROWS_AS(Field(g, 0), ConfigError);
}

TEST_CASE("zero_dirichlet") {
  const Grid2D g = make_grid2d(3, 3, 1, 1);
  Field ones(g, 1);
  for (auto& v : ones.values()) v = 1.0;
  const Field z = zero_dirichlet(ones);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i) CHECK(z.at(0, i, j) == ((i == 1 && j == 1) ? 1.0 : 0.0));

  const Field zero(g, 1);
  CHECK(zero_dirichlet(zero) == zero);

  SUBCASE("idempotent on random fields") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    const Grid3D g3 = make_grid3d(5, 6, 7, 1, 1, 1);
    Field f(g3, 3);
    for (auto& v : f.values()) v = d(rng);
    const Field once = zero_dirichlet(f);
    CHECK(zero_dirichlet(once) == once);
    for (std::size_t i = 1; i < 4; ++i) CHECK(once.at(2, i, 2, 3) == f.at(2, i, 2, 3));
    CHECK(once.at(1, 0, 2, 3) == 0.0);
    CHECK(once.at(1, 2, 2, 6) == 0.0);
  }

  SUBCASE("sampled sine product unchanged up to rounding") {
    const Grid2D g46 = make_grid2d(46, 46, 1, 1);
    Field raw(g46, 1);
    for (std::size_t j = 0; j < 46; ++j)
      for (std::size_t i = 0; i < 46; ++i)
        raw.at(0, i, j) = std::sin(std::numbers::pi * i * g46.dx()) *
                          std::sin(std::numbers::pi * j * g46.dy());
    const Field z46 = zero_dirichlet(raw);
    for (std::size_t c = 0; c < raw.cells(); ++c)
      CHECK(std::abs(z46.values()[c] - raw.values()[c]) < 1e-15);
  }
}

TEST_CASE("apply_dirichlet uses the field's boundary value") {
  const Grid2D g = make_grid2d(4, 4, 1, 1);
  Field f(g, 1, 2.5);
  CHECK(f.at(0, 0, 0) == 2.5);
  CHECK(f.at(0, 1, 1) == 0.0);
  f.at(0, 3, 2) = 9.0;
  apply_dirichlet(f);
  CHECK(f.at(0, 3, 2) == 2.5);
}

TEST_CASE("sample_initial_2d") {
  const Grid2D g = make_grid2d(46, 46, 1, 1);
  const Field f = sample_initial_2d(g, [](double x, double y) {
    return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
  });
  const double s = std::sin(22.0 * std::numbers::pi / 45.0);
  CHECK(f.at(0, 22, 22) == doctest::Approx(s * s).epsilon(1e-15));
  CHECK(f.at(0, 22, 22) == doctest::Approx(0.9988).epsilon(1e-4));
  CHECK(f.at(0, 23, 23) == f.at(0, 22, 22));

  const Field zero = sample_initial_2d(g, [](double, double) { return 0.0; });
  for (double v : zero.values()) CHECK(v == 0.0);

  const Field one = sample_initial_2d(g, [](double, double) { return 1.0; });
  CHECK(one.at(0, 0, 10) == 0.0);
  CHECK(one.at(0, 45, 10) == 0.0);
  CHECK(one.at(0, 1, 1) == 1.0);
  CHECK(one.at(0, 44, 44) == 1.0);

  try {
    sample_initial_2d(g, [](double x, double) { return x > 0.5 ? NAN : 1.0; });
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("(23, 0)") != std::string::npos);
  }
}

TEST_CASE("point_initial_3d") {
  const Grid3D g = make_grid3d(5, 5, 5, 1, 1, 1);
  const std::vector<double> v{1, 2, 3};
  const Field f = point_initial_3d(g, v, {1, 1, 1});
  CHECK(f.species() == 3);
  CHECK(f.at(2, 1, 1, 1) == 3.0);
  double sum = 0;
  for (double x : f.values()) sum += x;
  CHECK(sum == 6.0);
  CHECK_THROWS_AS(point_initial_3d(g, v, {0, 1, 1}), ConfigError);
  CHECK(f.max_value(1) == 2.0);
}

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace adrlab {

/// Shape of a vertex-centred uniform lattice. Node i of an axis sits at
/// x = i * spacing; nodes 0 and n-1 lie on the physical boundary.
/// 2-D lattices carry n[2] == 1.
struct Lattice {
  int rank = 2;
  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<double, 3> spacing{0.0, 0.0, 0.0};
  std::array<double, 3> length{0.0, 0.0, 0.0};

  std::size_t cells() const noexcept { return n[0] * n[1] * n[2]; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k = 0) const noexcept {
    return i + n[0] * (j + n[1] * k);
  }

  std::array<std::size_t, 3> coords(std::size_t flat) const noexcept {
    return {flat % n[0], (flat / n[0]) % n[1], flat / (n[0] * n[1])};
  }

  bool is_boundary(std::size_t i, std::size_t j, std::size_t k = 0) const noexcept {
    if (i == 0 || j == 0 || i + 1 == n[0] || j + 1 == n[1]) return true;
    return rank == 3 && (k == 0 || k + 1 == n[2]);
  }

  /// Volume (area in 2-D) attributed to one node.
  double cell_volume() const noexcept {
    double v = spacing[0] * spacing[1];
    return rank == 3 ? v * spacing[2] : v;
  }

  std::size_t interior_cells() const noexcept {
    std::size_t c = (n[0] - 2) * (n[1] - 2);
    return rank == 3 ? c * (n[2] - 2) : c;
  }

  bool operator==(const Lattice&) const = default;
};

class Grid2D {
 public:
  std::size_t nx() const noexcept { return lattice_.n[0]; }
  std::size_t ny() const noexcept { return lattice_.n[1]; }
  double lx() const noexcept { return lattice_.length[0]; }
  double ly() const noexcept { return lattice_.length[1]; }
  double dx() const noexcept { return lattice_.spacing[0]; }
  double dy() const noexcept { return lattice_.spacing[1]; }
  const Lattice& lattice() const noexcept { return lattice_; }

 private:
  friend Grid2D make_grid2d(std::size_t, std::size_t, double, double);
  explicit Grid2D(Lattice l) : lattice_(l) {}
  Lattice lattice_;
};

class Grid3D {
 public:
  std::size_t nx() const noexcept { return lattice_.n[0]; }
  std::size_t ny() const noexcept { return lattice_.n[1]; }
  std::size_t nz() const noexcept { return lattice_.n[2]; }
  double lx() const noexcept { return lattice_.length[0]; }
  double ly() const noexcept { return lattice_.length[1]; }
  double lz() const noexcept { return lattice_.length[2]; }
  double dx() const noexcept { return lattice_.spacing[0]; }
  double dy() const noexcept { return lattice_.spacing[1]; }
  double dz() const noexcept { return lattice_.spacing[2]; }
  const Lattice& lattice() const noexcept { return lattice_; }

 private:
  friend Grid3D make_grid3d(std::size_t, std::size_t, std::size_t, double, double, double);
  explicit Grid3D(Lattice l) : lattice_(l) {}
  Lattice lattice_;
};

/// Throws ConfigError naming the field when a count is below 3 or a
/// length is not a positive finite number.
Grid2D make_grid2d(std::size_t nx, std::size_t ny, double lx, double ly);
Grid3D make_grid3d(std::size_t nx, std::size_t ny, std::size_t nz, double lx, double ly,
                   double lz);

/// Per-axis advection velocity and diffusivity. 2-D problems use the first
/// two entries.
struct TransportParams {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  std::array<double, 3> k{0.0, 0.0, 0.0};

  static TransportParams uniform(double velocity, double diffusivity) {
    return {{velocity, velocity, velocity}, {diffusivity, diffusivity, diffusivity}};
  }
};

/// Multi-species concentrations over a lattice, species-major: all cells of
/// species 0, then all cells of species 1, ...
class Field {
 public:
  Field(const Lattice& lattice, std::size_t species, double boundary_value = 0.0);
  Field(const Grid2D& grid, std::size_t species, double boundary_value = 0.0)
      : Field(grid.lattice(), species, boundary_value) {}
  Field(const Grid3D& grid, std::size_t species, double boundary_value = 0.0)
      : Field(grid.lattice(), species, boundary_value) {}

  const Lattice& lattice() const noexcept { return lattice_; }
  std::size_t species() const noexcept { return species_; }
  std::size_t cells() const noexcept { return lattice_.cells(); }
  double boundary_value() const noexcept { return boundary_value_; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<double> species_values(std::size_t s) noexcept {
    return std::span<double>(values_).subspan(s * cells(), cells());
  }
  std::span<const double> species_values(std::size_t s) const noexcept {
    return std::span<const double>(values_).subspan(s * cells(), cells());
  }

  double& at(std::size_t s, std::size_t i, std::size_t j, std::size_t k = 0) noexcept {
    return values_[s * cells() + lattice_.index(i, j, k)];
  }
  double at(std::size_t s, std::size_t i, std::size_t j, std::size_t k = 0) const noexcept {
    return values_[s * cells() + lattice_.index(i, j, k)];
  }

  /// Largest value of one species (over all cells, boundary included).
  double max_value(std::size_t s) const;

  bool operator==(const Field&) const = default;

 private:
  Lattice lattice_;
  std::size_t species_;
  double boundary_value_;
  std::vector<double> values_;
};

/// Sets every boundary node of every species to 0; interior untouched.
Field zero_dirichlet(Field field);

/// Sets every boundary node to the field's configured Dirichlet value.
void apply_dirichlet(Field& field);

/// values[i,j] = f(i*dx, j*dy), then zero boundary. Throws InputError with
/// the node coordinates when f returns a non-finite value.
Field sample_initial_2d(const Grid2D& grid, const std::function<double(double, double)>& f);

/// Single-species 3-D counterpart of sample_initial_2d.
Field sample_initial_3d(const Grid3D& grid,
                        const std::function<double(double, double, double)>& f);

/// Zero field with `values` (one per species) placed at node `cell`.
/// The node must be interior.
Field point_initial_3d(const Grid3D& grid, std::span<const double> values,
                       std::array<std::size_t, 3> cell);

}  // namespace adrlab

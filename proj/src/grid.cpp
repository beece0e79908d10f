#include "adrlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "adrlab/errors.hpp"

namespace adrlab {
namespace {

void check_axis(std::size_t n, double length, const char* count_name, const char* length_name) {
  if (n < 3)
    throw ConfigError(count_name, "must be at least 3 (got " + std::to_string(n) + ")");
  if (!(length > 0.0) || !std::isfinite(length)) {
    std::ostringstream os;
    os << "must be a positive finite length (got " << length << ")";
    throw ConfigError(length_name, os.str());
  }
}

}  // namespace

Grid2D make_grid2d(std::size_t nx, std::size_t ny, double lx, double ly) {
  check_axis(nx, lx, "nx", "Lx");
  check_axis(ny, ly, "ny", "Ly");
  Lattice l;
  l.rank = 2;
  l.n = {nx, ny, 1};
  l.length = {lx, ly, 0.0};
  l.spacing = {lx / static_cast<double>(nx - 1), ly / static_cast<double>(ny - 1), 0.0};
  return Grid2D(l);
}

Grid3D make_grid3d(std::size_t nx, std::size_t ny, std::size_t nz, double lx, double ly,
                   double lz) {
  check_axis(nx, lx, "nx", "Lx");
  check_axis(ny, ly, "ny", "Ly");
  check_axis(nz, lz, "nz", "Lz");
  Lattice l;
  l.rank = 3;
  l.n = {nx, ny, nz};
  l.length = {lx, ly, lz};
  l.spacing = {lx / static_cast<double>(nx - 1), ly / static_cast<double>(ny - 1),
               lz / static_cast<double>(nz - 1)};
  return Grid3D(l);
}

Field::Field(const Lattice& lattice, std::size_t species, double boundary_value)
    : lattice_(lattice), species_(species), boundary_value_(boundary_value) {
  if (species == 0) throw ConfigError("species", "at least one species is required");
  values_.assign(species * lattice.cells(), 0.0);
  apply_dirichlet(*this);
}

double Field::max_value(std::size_t s) const {
  auto v = species_values(s);
  return *std::max_element(v.begin(), v.end());
}

namespace {

void set_boundary(Field& field, double value) {
  const Lattice& l = field.lattice();
  for (std::size_t s = 0; s < field.species(); ++s) {
    for (std::size_t k = 0; k < l.n[2]; ++k)
      for (std::size_t j = 0; j < l.n[1]; ++j)
        for (std::size_t i = 0; i < l.n[0]; ++i)
          if (l.is_boundary(i, j, k)) field.at(s, i, j, k) = value;
  }
}

}  // namespace

Field zero_dirichlet(Field field) {
  set_boundary(field, 0.0);
  return field;
}

void apply_dirichlet(Field& field) { set_boundary(field, field.boundary_value()); }

Field sample_initial_2d(const Grid2D& grid, const std::function<double(double, double)>& f) {
  Field field(grid, 1);
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double x = static_cast<double>(i) * grid.dx();
      const double y = static_cast<double>(j) * grid.dy();
      const double v = f(x, y);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "initial condition is not finite at node (" << i << ", " << j << "), x=" << x
           << ", y=" << y;
        throw InputError(os.str());
      }
      field.at(0, i, j) = v;
    }
  }
  return zero_dirichlet(std::move(field));
}

Field sample_initial_3d(const Grid3D& grid,
                        const std::function<double(double, double, double)>& f) {
  Field field(grid, 1);
  for (std::size_t k = 0; k < grid.nz(); ++k)
    for (std::size_t j = 0; j < grid.ny(); ++j)
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double x = static_cast<double>(i) * grid.dx();
        const double y = static_cast<double>(j) * grid.dy();
        const double z = static_cast<double>(k) * grid.dz();
        const double v = f(x, y, z);
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "initial condition is not finite at node (" << i << ", " << j << ", " << k
             << ")";
          throw InputError(os.str());
        }
        field.at(0, i, j, k) = v;
      }
  return zero_dirichlet(std::move(field));
}

Field point_initial_3d(const Grid3D& grid, std::span<const double> values,
                       std::array<std::size_t, 3> cell) {
  const Lattice& l = grid.lattice();
  if (cell[0] >= l.n[0] || cell[1] >= l.n[1] || cell[2] >= l.n[2] ||
      l.is_boundary(cell[0], cell[1], cell[2]))
    throw ConfigError("initial.cell", "initial point must be an interior node");
  Field field(grid, values.size());
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (!std::isfinite(values[s]))
      throw InputError("initial value for species " + std::to_string(s) + " is not finite");
    field.at(s, cell[0], cell[1], cell[2]) = values[s];
  }
  return field;
}

}  // namespace adrlab

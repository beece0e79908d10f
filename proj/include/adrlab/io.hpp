#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adrlab/analytic2d.hpp"
#include "adrlab/diagnostics.hpp"
#include "adrlab/grid.hpp"

namespace adrlab::io {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Writes `path.tmp` then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// "i,j,x,y,<species...>" with one row per node, i fastest. Species names
/// default to c1..cs.
std::string field2d_csv(const Field& field, const std::vector<std::string>& names = {});

/// "m,n,A_mn"
std::string coefficients_csv(const SeriesSolution& sol);

/// "t,max_abs_error,l2_error"
std::string error_report_csv(const std::vector<ErrorReport>& reports);

/// "t,i,j,k,c1,...,cs"
std::string trajectory_csv(const TrajectoryLog& log, const std::vector<std::string>& names = {});

/// Little-endian binary dump:
///   char[4] "ADRF", uint32 version (=1), uint32 rank,
///   uint64 nx, ny, nz, uint64 species, float64 dx, dy, dz, float64 lx, ly, lz,
///   then species * nx * ny * nz float64 values, species-major, x fastest.
std::string field_binary(const Field& field);
Field parse_field_binary(std::string_view bytes);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace adrlab::io

#include "adrlab/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "adrlab/errors.hpp"

namespace adrlab::io {

static_assert(std::endian::native == std::endian::little,
              "binary field dumps assume a little-endian host");

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field2d_csv(const Field& field, const std::vector<std::string>& names) {
  const Lattice& l = field.lattice();
  std::string out = "i,j,x,y";
  for (std::size_t s = 0; s < field.species(); ++s)
    out += "," + (s < names.size() ? names[s] : "c" + std::to_string(s + 1));
  out += '\n';
  for (std::size_t j = 0; j < l.n[1]; ++j) {
    for (std::size_t i = 0; i < l.n[0]; ++i) {
      out += std::to_string(i);
      out += ',';
      out += std::to_string(j);
      out += ',';
      out += format_double(static_cast<double>(i) * l.spacing[0]);
      out += ',';
      out += format_double(static_cast<double>(j) * l.spacing[1]);
      for (std::size_t s = 0; s < field.species(); ++s) {
        out += ',';
        out += format_double(field.at(s, i, j));
      }
      out += '\n';
    }
  }
  return out;
}

std::string coefficients_csv(const SeriesSolution& sol) {
  std::string out = "m,n,A_mn\n";
  for (std::size_t m = 1; m <= sol.m_terms(); ++m)
    for (std::size_t n = 1; n <= sol.n_terms(); ++n)
      out += std::to_string(m) + "," + std::to_string(n) + "," +
             format_double(sol.coefficient(m, n)) + "\n";
  return out;
}

std::string error_report_csv(const std::vector<ErrorReport>& reports) {
  std::string out = "t,max_abs_error,l2_error\n";
  for (const auto& r : reports)
    out += format_double(r.t) + "," + format_double(r.max_abs_error) + "," +
           format_double(r.l2_error) + "\n";
  return out;
}

std::string trajectory_csv(const TrajectoryLog& log, const std::vector<std::string>& names) {
  std::string out = "t,i,j,k";
  for (std::size_t s = 0; s < log.species(); ++s)
    out += "," + (s < names.size() ? names[s] : "c" + std::to_string(s + 1));
  out += '\n';
  for (std::size_t r = 0; r < log.rows(); ++r) {
    const auto& c = log.cell(r);
    out += format_double(log.time(r));
    for (std::size_t a = 0; a < 3; ++a) {
      out += ',';
      out += std::to_string(c[a]);
    }
    for (double v : log.values(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw InputError("truncated field dump");
  T v;
  std::memcpy(&v, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string field_binary(const Field& field) {
  const Lattice& l = field.lattice();
  std::string out = "ADRF";
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(l.rank));
  for (auto n : l.n) put<std::uint64_t>(out, n);
  put<std::uint64_t>(out, field.species());
  for (auto d : l.spacing) put<double>(out, d);
  for (auto d : l.length) put<double>(out, d);
  for (double v : field.values()) put<double>(out, v);
  return out;
}

Field parse_field_binary(std::string_view bytes) {
  if (bytes.substr(0, 4) != "ADRF") throw InputError("not a field dump (bad magic)");
  std::size_t pos = 4;
  if (get<std::uint32_t>(bytes, pos) != 1) throw InputError("unsupported field dump version");
  Lattice l;
  l.rank = static_cast<int>(get<std::uint32_t>(bytes, pos));
  for (auto& n : l.n) n = get<std::uint64_t>(bytes, pos);
  const auto species = get<std::uint64_t>(bytes, pos);
  for (auto& d : l.spacing) d = get<double>(bytes, pos);
  for (auto& d : l.length) d = get<double>(bytes, pos);
  Field field(l, species);
  for (double& v : field.values()) v = get<double>(bytes, pos);
  if (pos != bytes.size()) throw InputError("trailing bytes in field dump");
  return field;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace adrlab::io

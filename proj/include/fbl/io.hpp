#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbl/boussinesq.hpp"
#include "fbl/error.hpp"

namespace fbl {

/// Raised when an artifact cannot be written or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes content to path through a temporary file and a rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw IoError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Round-trip decimal form of a double.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// In-memory CSV table with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    require(row.size() == header_.size(), "csv row width does not match header");
    rows_.push_back(std::move(row));
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string s;
    auto line = [&s](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) s += ',';
        s += r[i];
      }
      s += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// FBL1 snapshots, little-endian:
//   "FBL1", u32 n, f64 length, u16 field count,
//   per field: u16 name length and the name bytes,
//   then per field: n*n f64 physical samples, row-major.

namespace detail {

template <class T>
void put(std::string& s, const T& v) {
  s.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(const std::string& s, std::size_t& at) {
  if (at + sizeof(T) > s.size()) throw IoError("truncated snapshot");
  T v;
  std::memcpy(&v, s.data() + at, sizeof(T));
  at += sizeof(T);
  return v;
}

}  // namespace detail

struct NamedField {
  std::string name;
  SpectralField field;
};

inline std::string encode_fields(const std::vector<NamedField>& fields) {
  require(!fields.empty(), "snapshot needs at least one field");
  const Grid& g = fields.front().field.grid();
  std::string b = "FBL1";
  detail::put<std::uint32_t>(b, static_cast<std::uint32_t>(g.n()));
  detail::put(b, g.length());
  detail::put<std::uint16_t>(b, static_cast<std::uint16_t>(fields.size()));
  for (const auto& f : fields) {
    require_same_grid(g, f.field.grid());
    detail::put<std::uint16_t>(b, static_cast<std::uint16_t>(f.name.size()));
    b += f.name;
  }
  for (const auto& f : fields)
    for (double v : f.field.physical()) detail::put(b, v);
  return b;
}

inline std::vector<NamedField> decode_fields(const std::string& b) {
  if (b.size() < 4 || b.compare(0, 4, "FBL1") != 0) throw IoError("not an FBL1 snapshot");
  std::size_t at = 4;
  const auto n = detail::take<std::uint32_t>(b, at);
  const double L = detail::take<double>(b, at);
  const auto count = detail::take<std::uint16_t>(b, at);
  if (n < 2 || (n & (n - 1)) != 0 || !(L > 0.0)) throw IoError("snapshot header has an invalid grid");
  const Grid g = make_grid(n, L);
  std::vector<NamedField> out(count);
  for (auto& f : out) {
    const auto len = detail::take<std::uint16_t>(b, at);
    if (at + len > b.size()) throw IoError("truncated snapshot");
    f.name = b.substr(at, len);
    at += len;
  }
  for (auto& f : out) {
    std::vector<double> p(g.size());
    for (auto& v : p) v = detail::take<double>(b, at);
    f.field = SpectralField::from_physical(g, std::move(p));
  }
  if (at != b.size()) throw IoError("trailing bytes in snapshot");
  return out;
}

/// Snapshot set: one FBL1 file per output holding theta and the primary
/// unknown, and dir/manifest.csv with the time, step and model parameters.
class SnapshotWriter {
 public:
  explicit SnapshotWriter(std::filesystem::path dir)
      : dir_(std::move(dir)),
        manifest_({"index", "step", "time", "dt", "formulation", "alpha", "nu", "kappa", "eps", "file"}) {}

  void add(const SimState& s, std::size_t step, double dt) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.fbl", manifest_.rows());
    atomic_write(dir_ / name, encode_fields({{"theta", s.theta}, {"primary", s.primary}}));
    manifest_.add({std::to_string(manifest_.rows()), std::to_string(step), fmt(s.time), fmt(dt), to_string(s.form),
                   fmt(s.params.alpha), fmt(s.params.nu), fmt(s.params.kappa), fmt(s.params.eps), name});
  }

  void finish() const { atomic_write(dir_ / "manifest.csv", manifest_.str()); }

 private:
  std::filesystem::path dir_;
  CsvTable manifest_;
};

struct SnapshotSet {
  std::vector<SimState> states;
  double dt = 0.0;
};

inline SnapshotSet read_snapshots(const std::filesystem::path& dir) {
  std::istringstream ms(read_file(dir / "manifest.csv"));
  std::string line;
  std::getline(ms, line);
  if (line != "index,step,time,dt,formulation,alpha,nu,kappa,eps,file")
    throw IoError("unexpected manifest header in " + dir.string());
  SnapshotSet set;
  while (std::getline(ms, line)) {
    if (line.empty()) continue;
    std::vector<std::string> c;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) c.push_back(cell);
    if (c.size() != 10) throw IoError("malformed manifest row: " + line);
    SimState s;
    s.time = std::stod(c[2]);
    set.dt = std::stod(c[3]);
    s.form = parse_formulation(c[4]);
    s.params.alpha = std::stod(c[5]);
    s.params.nu = std::stod(c[6]);
    s.params.kappa = std::stod(c[7]);
    s.params.eps = std::stod(c[8]);
    for (auto& f : decode_fields(read_file(dir / c[9]))) {
      if (f.name == "theta") s.theta = std::move(f.field);
      else if (f.name == "primary") s.primary = std::move(f.field);
    }
    if (s.theta.empty() || s.primary.empty()) throw IoError("snapshot " + c[9] + " lacks theta or primary");
    set.states.push_back(std::move(s));
  }
  if (set.states.empty()) throw IoError("snapshot set " + dir.string() + " is empty");
  return set;
}

}  // namespace fbl

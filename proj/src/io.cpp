#include "ccsim/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccsim {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("io: " + path + ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) fail(path, "trailing characters in number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(path, "not a number: '" + s + "'");
  } catch (const std::out_of_range&) {
    fail(path, "number out of range: '" + s + "'");
  }
}

struct FieldHeader {
  char magic[4];
  uint8_t geom;
  uint8_t dim;
  uint16_t pad;
  uint32_t n0;
  uint32_t n1;
  double time;
  uint64_t reserved;
};
static_assert(sizeof(FieldHeader) == 32, "field header must be 32 bytes");

}  // namespace

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_field_csv(const std::string& path, const ScalarField& f, double time) {
  if (!f.grid) throw std::invalid_argument("write_field_csv: field not bound to a grid");
  const Grid& g = *f.grid;
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  os << "geometry,resolution,time\n";
  os << geometry_name(g.geom) << ',' << g.resolution_string() << ',' << fmt_g17(time)
     << '\n';
  for (int j = 0; j < g.n1; ++j) {
    for (int i = 0; i < g.n0; ++i) {
      os << fmt_g17(f[g.idx(i, j)]);
      os << (i + 1 < g.n0 ? ',' : '\n');
    }
  }
  if (!os) fail(path, "write error");
}

ScalarField read_field_csv(const std::string& path, const Grid& g, double* time) {
  std::ifstream is(path);
  if (!is) fail(path, "cannot open");
  std::string line;
  if (!std::getline(is, line)) fail(path, "missing header line");
  if (split_csv_line(line) != std::vector<std::string>{"geometry", "resolution", "time"})
    fail(path, "unexpected header: '" + line + "'");
  if (!std::getline(is, line)) fail(path, "missing metadata line");
  const auto meta = split_csv_line(line);
  if (meta.size() != 3) fail(path, "metadata line needs 3 fields");
  if (meta[0] != geometry_name(g.geom))
    fail(path, "geometry mismatch: file has " + meta[0] + ", grid is " +
                   geometry_name(g.geom));
  if (meta[1] != g.resolution_string())
    fail(path, "resolution mismatch: file has " + meta[1] + ", grid is " +
                   g.resolution_string());
  if (time) *time = parse_double(meta[2], path);
  ScalarField f(g);
  for (int j = 0; j < g.n1; ++j) {
    if (!std::getline(is, line)) fail(path, "truncated value rows");
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != g.n0)
      fail(path, "row " + std::to_string(j) + " has " + std::to_string(cells.size()) +
                     " values, expected " + std::to_string(g.n0));
    for (int i = 0; i < g.n0; ++i) f[g.idx(i, j)] = parse_double(cells[i], path);
  }
  return f;
}

void write_field_binary(const std::string& path, const ScalarField& f, double time) {
  if (!f.grid)
    throw std::invalid_argument("write_field_binary: field not bound to a grid");
  const Grid& g = *f.grid;
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(path, "cannot open for writing");
  FieldHeader h{};
  std::memcpy(h.magic, "CCF1", 4);
  h.geom = static_cast<uint8_t>(g.geom);
  h.dim = static_cast<uint8_t>(g.dim);
  h.pad = 0;
  h.n0 = static_cast<uint32_t>(g.n0);
  h.n1 = static_cast<uint32_t>(g.n1);
  h.time = time;
  h.reserved = 0;
  os.write(reinterpret_cast<const char*>(&h), sizeof(h));
  os.write(reinterpret_cast<const char*>(f.v.data()),
           static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!os) fail(path, "write error");
}

ScalarField read_field_binary(const std::string& path, const Grid& g, double* time) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(path, "cannot open");
  FieldHeader h{};
  is.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!is) fail(path, "truncated header");
  if (std::memcmp(h.magic, "CCF1", 4) != 0) fail(path, "bad magic");
  if (h.geom != static_cast<uint8_t>(g.geom) || h.n0 != static_cast<uint32_t>(g.n0) ||
      h.n1 != static_cast<uint32_t>(g.n1))
    fail(path, "grid mismatch between file and target grid");
  if (time) *time = h.time;
  ScalarField f(g);
  is.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!is) fail(path, "truncated values");
  return f;
}

void write_diag_csv(const std::string& path, const std::vector<DiagRecord>& records) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  const auto& cols = diag_columns();
  for (size_t i = 0; i < cols.size(); ++i) os << cols[i] << (i + 1 < cols.size() ? ',' : '\n');
  for (const DiagRecord& r : records) {
    const double vals[] = {static_cast<double>(r.step),
                           r.t,
                           r.dt,
                           r.mass,
                           r.v_l1,
                           r.v_l2,
                           r.v_linf,
                           r.energy,
                           r.diss_fisher_u,
                           r.diss_hess_logv,
                           r.diss_weighted_gradv,
                           r.boundary_term,
                           r.energy_residual,
                           r.u_dev_l1,
                           r.u_dev_linf,
                           r.u_power,
                           r.gradu_power,
                           r.flux_power,
                           r.weighted_gradv_sq,
                           r.cum_gradv_sq,
                           r.cum_consumption,
                           r.cum_consumed_exact,
                           r.cum_u_dev_l1,
                           r.cum_fisher_u,
                           r.cum_hessv_sq,
                           r.cum_weighted_gradv,
                           r.moment,
                           r.clipped_mass,
                           r.floored_v_mass};
    static_assert(sizeof(vals) / sizeof(vals[0]) == 29, "column count drifted");
    os << r.step;
    for (size_t i = 1; i < sizeof(vals) / sizeof(vals[0]); ++i)
      os << ',' << fmt_g17(vals[i]);
    os << '\n';
  }
  if (!os) fail(path, "write error");
}

void write_scalar_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& row) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  for (size_t i = 0; i < row.size(); ++i)
    os << row[i].first << (i + 1 < row.size() ? ',' : '\n');
  for (size_t i = 0; i < row.size(); ++i)
    os << fmt_g17(row[i].second) << (i + 1 < row.size() ? ',' : '\n');
  if (!os) fail(path, "write error");
}

std::vector<std::pair<std::string, double>> read_scalar_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(path, "cannot open");
  std::string names, values;
  if (!std::getline(is, names) || !std::getline(is, values))
    fail(path, "expected two lines (names, values)");
  const auto ns = split_csv_line(names);
  const auto vs = split_csv_line(values);
  if (ns.size() != vs.size()) fail(path, "name/value column count mismatch");
  std::vector<std::pair<std::string, double>> out;
  out.reserve(ns.size());
  for (size_t i = 0; i < ns.size(); ++i) out.emplace_back(ns[i], parse_double(vs[i], path));
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  for (size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? ',' : '\n');
  for (const auto& row : rows) {
    if (row.size() != header.size()) fail(path, "row width does not match header");
    for (size_t i = 0; i < row.size(); ++i) os << row[i] << (i + 1 < row.size() ? ',' : '\n');
  }
  if (!os) fail(path, "write error");
}

}  // namespace ccsim

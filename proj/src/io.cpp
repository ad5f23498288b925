#include "hmf/io.hpp"

#include "hmf/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hmf {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k) out += ',';
    out += table.header[k];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw DomainError("to_csv: row width differs from header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_double(row[k]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

void write_csv(const std::string& path, const CsvTable& table) { write_text(path, to_csv(table)); }

CsvTable diagnostics_table(const std::vector<DiagnosticRow>& rows) {
  CsvTable t{{"t", "max_grad", "lambda_est", "xi1_est", "xi2_est", "e_total", "e_ball"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.t, r.max_grad, r.lambda_est, r.xi1_est, r.xi2_est, r.e_total, r.e_ball});
  return t;
}

namespace {

std::string snapshot_header(const Grid2D& g, double t) {
  std::ostringstream s;
  s << "# " << g.nr << ' ' << g.nz << ' ' << format_double(g.r_min) << ' ' << format_double(g.r_max)
    << ' ' << format_double(g.z_min) << ' ' << format_double(g.z_max) << ' ' << format_double(t) << '\n';
  return s.str();
}

} // namespace

void write_snapshot(const std::string& path, const MapField& u) {
  std::string s = snapshot_header(u.grid, u.t) + "u1,u2,u3\n";
  for (const auto& v : u.u) s += format_double(v.x) + ',' + format_double(v.y) + ',' + format_double(v.z) + '\n';
  write_text(path, s);
}

void write_snapshot(const std::string& path, const ScalarField& v) {
  std::string s = snapshot_header(v.grid, v.t) + "v\n";
  for (double x : v.v) s += format_double(x) + '\n';
  write_text(path, s);
}

MapField read_map_snapshot(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  char hash;
  MapField m;
  f >> hash >> m.grid.nr >> m.grid.nz >> m.grid.r_min >> m.grid.r_max >> m.grid.z_min >> m.grid.z_max >> m.t;
  if (!f || hash != '#') throw IoError("bad snapshot header: " + path);
  m.grid.validate();
  std::string line;
  std::getline(f, line);
  std::getline(f, line);
  m.u.reserve(m.grid.size());
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) throw IoError("bad snapshot row: " + path);
    m.u.emplace_back(a, b, c);
  }
  if (m.u.size() != m.grid.size()) throw IoError("snapshot size mismatch: " + path);
  return m;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(n) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DomainError("config line " + std::to_string(n) + ": empty key");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return parse(s.str());
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  double x;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw DomainError("config key '" + key + "': not a number: " + v);
  return x;
}

long KeyValueConfig::get_int(const std::string& key, long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  long x;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw DomainError("config key '" + key + "': not an integer: " + v);
  return x;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::require_double(const std::string& key) const {
  if (!has(key)) throw DomainError("missing required key: " + key);
  return get_double(key, 0);
}

void KeyValueConfig::check_keys(const std::vector<std::string>& known) const {
  std::string bad;
  for (const auto& [k, v] : values_) {
    bool ok = false;
    for (const auto& n : known) ok = ok || n == k;
    if (!ok) bad += (bad.empty() ? "" : ", ") + k;
  }
  if (!bad.empty()) throw DomainError("unknown config keys: " + bad);
}

void KeyValueConfig::check_required(const std::vector<std::string>& required) const {
  std::string miss;
  for (const auto& k : required)
    if (!has(k)) miss += (miss.empty() ? "" : ", ") + k;
  if (!miss.empty()) throw DomainError("missing required keys: " + miss);
}

} // namespace hmf

#pragma once

#include "hmf/flow_sim.hpp"

#include <map>
#include <string>
#include <vector>

namespace hmf {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// %.17g
std::string format_double(double x);
std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
void write_text(const std::string& path, const std::string& text);

CsvTable diagnostics_table(const std::vector<DiagnosticRow>& rows);

// Header line "# nr nz r_min r_max z_min z_max t", then one row per node in index order.
void write_snapshot(const std::string& path, const MapField& u);
void write_snapshot(const std::string& path, const ScalarField& v);
MapField read_map_snapshot(const std::string& path);

// Flat key = value file; '#' starts a comment.
class KeyValueConfig {
public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double require_double(const std::string& key) const;

  // DomainError naming every key not in `known`.
  void check_keys(const std::vector<std::string>& known) const;
  // DomainError naming every key of `required` that is absent.
  void check_required(const std::vector<std::string>& required) const;

private:
  std::map<std::string, std::string> values_;
};

} // namespace hmf

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fopa::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Comment lines ('#' prefixed), header, then rows with 9 significant digits, LF endings.
void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& comments);
std::string format_value(double v);

struct RunManifest {
  std::string subcommand;
  std::string scenario_name;
  std::string scenario_hash;  // over the canonical scenario text, seed, subcommand and version
  std::string tool_version;
  std::uint64_t rng_seed = 0;
  double wall_time_s = 0.0;
  std::map<std::string, double> tolerances;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

std::string run_hash(const std::string& canonical_scenario, std::uint64_t rng_seed, const std::string& subcommand,
                     const std::string& version);

const char* tool_version();

}  // namespace fopa::cli

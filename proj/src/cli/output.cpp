#include "fopa/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#ifndef FOPA_VERSION
#define FOPA_VERSION "0.0.0"
#endif

namespace fopa::cli {

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
  rows.push_back(std::move(row));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_value(row[i]);
    out << '\n';
  }
}

std::string run_hash(const std::string& canonical_scenario, std::uint64_t rng_seed, const std::string& subcommand,
                     const std::string& version) {
  return hex64(fnv1a64(canonical_scenario + "rng_seed=" + std::to_string(rng_seed) + "\nsubcommand=" + subcommand +
                       "\nversion=" + version + "\n"));
}

const char* tool_version() { return FOPA_VERSION; }

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "simulate";
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["scenario"] = scenario_name;
  j["scenario_hash"] = scenario_hash;
  j["rng_seed"] = rng_seed;
  j["wall_time_s"] = wall_time_s;
  j["tolerances"] = tolerances;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace fopa::cli

#include "fopa/cli/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fopa/core/units.hpp"

namespace fopa::cli {

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_real(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + t + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("expected an unsigned integer, got '" + t + "'");
  }
  return v;
}

int to_int(const std::string& text) {
  const std::uint64_t v = to_u64(text);
  if (v > 1u << 30) throw std::invalid_argument("integer too large");
  return static_cast<int>(v);
}

bool to_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + t + "'");
}

std::vector<double> to_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(item));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(fmt(x));
  return join(parts, ",");
}

SweepAxis to_axis(const std::string& text) {
  const std::string t = trim(text);
  if (t == "pump_power") return SweepAxis::pump_power;
  if (t == "gain") return SweepAxis::gain;
  if (t == "seed_power") return SweepAxis::seed_power;
  throw std::invalid_argument("expected pump_power, gain or seed_power, got '" + t + "'");
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(Scenario&, const std::string&)> set;
  std::function<std::string(const Scenario&)> get;
};

#define FOPA_REAL(sec, name, member)                                              \
  Field {                                                                         \
    sec, name, [](Scenario& s, const std::string& v) { s.member = to_real(v); }, \
        [](const Scenario& s) { return fmt(s.member); }                           \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"scenario", "name", [](Scenario& s, const std::string& v) { s.name = trim(v); },
       [](const Scenario& s) { return s.name; }},
      {"scenario", "rng_seed", [](Scenario& s, const std::string& v) { s.rng_seed = to_u64(v); },
       [](const Scenario& s) { return std::to_string(s.rng_seed); }},
      FOPA_REAL("fiber", "length_m", fiber.length_m),
      FOPA_REAL("fiber", "gamma_per_W_km", fiber.gamma_per_W_km),
      FOPA_REAL("fiber", "zdw_nm", fiber.zdw_nm),
      FOPA_REAL("fiber", "dispersion_slope_ps_per_nm2_km", fiber.dispersion_slope_ps_per_nm2_km),
      FOPA_REAL("fiber", "beta2_ref_ps2_per_km", fiber.beta2_ref_ps2_per_km),
      FOPA_REAL("fiber", "temperature_K", fiber.temperature_K),
      FOPA_REAL("fiber", "propagation_loss_dB", fiber.propagation_loss_dB),
      FOPA_REAL("fiber", "overlap_factor", fiber.overlap_factor),
      FOPA_REAL("pump", "wavelength_nm", pump.wavelength_nm),
      FOPA_REAL("pump", "fwhm_nm", pump.fwhm_nm),
      FOPA_REAL("pump", "avg_power_mW", pump.avg_power_mW),
      FOPA_REAL("seed", "wavelength_nm", seed.wavelength_nm),
      FOPA_REAL("seed", "fwhm_nm", seed.fwhm_nm),
      FOPA_REAL("seed", "avg_power_uW", seed.avg_power_uW),
      FOPA_REAL("seed", "excess_noise_db", seed.excess_noise_db),
      FOPA_REAL("raman", "raman_fraction", raman_fraction),
      FOPA_REAL("saturation", "depletion_knee", saturation.depletion_knee),
      FOPA_REAL("saturation", "decorrelation_fraction", saturation.decorrelation_fraction),
      FOPA_REAL("detection", "eta_signal", detection.eta_signal),
      FOPA_REAL("detection", "eta_idler", detection.eta_idler),
      FOPA_REAL("detection", "voa_transmission", detection.voa_transmission),
      FOPA_REAL("detection", "electronic_noise_db_below_snl", detection.electronic_noise_db_below_snl),
      FOPA_REAL("detection", "detection_frequency_MHz", detection.detection_frequency_MHz),
      FOPA_REAL("detection", "resolution_bandwidth_kHz", detection.resolution_bandwidth_kHz),
      {"detection", "optimize_voa", [](Scenario& s, const std::string& v) { s.optimize_voa = to_bool(v); },
       [](const Scenario& s) { return std::string(s.optimize_voa ? "true" : "false"); }},
      FOPA_REAL("detection", "voa_min", balance.voa_min),
      FOPA_REAL("detection", "voa_max", balance.voa_max),
      {"sweep", "axis", [](Scenario& s, const std::string& v) { s.sweep.axis = to_axis(v); },
       [](const Scenario& s) { return std::string(axis_name(s.sweep.axis)); }},
      {"sweep", "points", [](Scenario& s, const std::string& v) { s.sweep.points = to_list(v); },
       [](const Scenario& s) { return list_text(s.sweep.points); }},
      {"sweep", "seed_powers_uW",
       [](Scenario& s, const std::string& v) {
         s.sweep.seed_powers_uW = trim(v) == "none" ? std::vector<double>{} : to_list(v);
       },
       [](const Scenario& s) {
         return s.sweep.seed_powers_uW.empty() ? std::string("none") : list_text(s.sweep.seed_powers_uW);
       }},
      {"model", "pulse_averaging", [](Scenario& s, const std::string& v) { s.model.pulse_averaging = to_bool(v); },
       [](const Scenario& s) { return std::string(s.model.pulse_averaging ? "true" : "false"); }},
      {"model", "slices", [](Scenario& s, const std::string& v) { s.model.slices = to_int(v); },
       [](const Scenario& s) { return std::to_string(s.model.slices); }},
      {"model", "sideband_order", [](Scenario& s, const std::string& v) { s.model.sideband_order = to_int(v); },
       [](const Scenario& s) { return std::to_string(s.model.sideband_order); }},
      FOPA_REAL("model", "rep_rate_MHz", model.rep_rate_MHz),
      {"spectrum", "grid_points", [](Scenario& s, const std::string& v) { s.spectrum.grid_points = to_int(v); },
       [](const Scenario& s) { return std::to_string(s.spectrum.grid_points); }},
      FOPA_REAL("spectrum", "dt_ps", spectrum.dt_ps),
      {"spectrum", "target_gain",
       [](Scenario& s, const std::string& v) {
         if (trim(v) == "none") {
           s.spectrum.target_gain.reset();
         } else {
           s.spectrum.target_gain = to_real(v);
         }
       },
       [](const Scenario& s) { return s.spectrum.target_gain ? fmt(*s.spectrum.target_gain) : std::string("none"); }},
  };
  return table;
}

#undef FOPA_REAL

const std::vector<std::string> kRequiredSections = {"fiber", "pump", "seed", "detection", "sweep"};

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join(issues, "\n")), issues_(std::move(issues)) {}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::pump_power: return "pump_power";
    case SweepAxis::gain: return "gain";
    case SweepAxis::seed_power: return "seed_power";
  }
  return "";
}

double Scenario::detuning_thz() const {
  return units::frequency_thz(pump.wavelength_nm) - units::frequency_thz(seed.wavelength_nm);
}

double Scenario::pump_fwhm_ps() const { return units::transform_limited_fwhm_ps(pump.fwhm_nm, pump.wavelength_nm); }
double Scenario::seed_fwhm_ps() const { return units::transform_limited_fwhm_ps(seed.fwhm_nm, seed.wavelength_nm); }

FiberSpec Scenario::fiber_spec() const {
  FiberSpec f = FiberSpec::dispersion_shifted(fiber.length_m, fiber.gamma_per_W_km, fiber.zdw_nm,
                                              fiber.dispersion_slope_ps_per_nm2_km, fiber.temperature_K);
  f.beta2_ref_ps2_per_km = fiber.beta2_ref_ps2_per_km;
  f.propagation_loss_dB = fiber.propagation_loss_dB;
  f.overlap_factor = fiber.overlap_factor;
  // Stokes gain tied to the Kerr coefficient through the Raman fraction.
  f.raman_gain_per_W_km = 2.0 * f.effective_gamma() * raman_fraction;
  f.validate();
  return f;
}

LadderSpec Scenario::ladder_spec() const {
  LadderSpec l;
  l.pump_nm = pump.wavelength_nm;
  l.detuning_thz = detuning_thz();
  l.order = model.sideband_order;
  return l;
}

PulseAveraging Scenario::averaging() const {
  PulseAveraging a;
  a.enabled = model.pulse_averaging;
  a.slices = model.slices;
  a.pump_fwhm_ps = pump_fwhm_ps();
  a.seed_fwhm_ps = seed_fwhm_ps();
  return a;
}

RamanSpec Scenario::raman() const {
  RamanSpec r;
  r.detuning_THz = detuning_thz();
  r.temperature_K = fiber.temperature_K;
  r.raman_fraction = raman_fraction;
  return r;
}

double Scenario::pump_peak_W(double avg_power_mW) const {
  return units::gaussian_peak_power_W(units::pulse_energy_J(avg_power_mW * 1e-3, rep_rate_Hz()), pump_fwhm_ps());
}

double Scenario::seed_peak_W(double avg_power_uW) const {
  return units::gaussian_peak_power_W(units::pulse_energy_J(avg_power_uW * 1e-6, rep_rate_Hz()), seed_fwhm_ps());
}

double Scenario::seed_photons(double avg_power_uW) const {
  return units::photons_per_pulse(avg_power_uW * 1e-6, seed.wavelength_nm, rep_rate_Hz());
}

std::string Scenario::canonical() const {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.section) + "." + f.key + " = " + f.get(*this) + "\n";
  return out;
}

std::vector<std::string> check_scenario(const Scenario& s) {
  std::vector<std::string> issues;
  const auto require = [&](bool ok, const char* key, const char* reason) {
    if (!ok) issues.push_back(std::string(key) + ": " + reason);
  };
  require(!s.name.empty(), "scenario.name", "must not be empty");

  require(s.fiber.length_m > 0.0, "fiber.length_m", "must be positive");
  require(s.fiber.gamma_per_W_km >= 0.0, "fiber.gamma_per_W_km", "must be non-negative");
  require(s.fiber.zdw_nm > 0.0, "fiber.zdw_nm", "must be positive");
  require(s.fiber.temperature_K > 0.0, "fiber.temperature_K", "must be positive");
  require(s.fiber.propagation_loss_dB >= 0.0, "fiber.propagation_loss_dB", "must be non-negative");
  require(s.fiber.overlap_factor > 0.0 && s.fiber.overlap_factor <= 1.0, "fiber.overlap_factor",
          "out of range (0, 1]");

  require(s.pump.wavelength_nm > 0.0, "pump.wavelength_nm", "must be positive");
  require(s.pump.fwhm_nm > 0.0, "pump.fwhm_nm", "must be positive");
  require(s.pump.avg_power_mW >= 0.0, "pump.avg_power_mW", "must be non-negative");
  require(s.seed.wavelength_nm > s.pump.wavelength_nm, "seed.wavelength_nm", "must be longer than the pump wavelength");
  require(s.seed.fwhm_nm > 0.0, "seed.fwhm_nm", "must be positive");
  require(s.seed.avg_power_uW >= 0.0, "seed.avg_power_uW", "must be non-negative");
  require(s.seed.excess_noise_db >= 0.0, "seed.excess_noise_db", "must be non-negative");

  require(s.raman_fraction >= 0.0 && s.raman_fraction < 1.0, "raman.raman_fraction", "out of range [0, 1)");
  require(s.saturation.depletion_knee > 0.0, "saturation.depletion_knee", "must be positive");
  require(s.saturation.decorrelation_fraction >= 0.0 && s.saturation.decorrelation_fraction <= 1.0,
          "saturation.decorrelation_fraction", "out of range [0, 1]");

  const auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
  require(unit(s.detection.eta_signal), "detection.eta_signal", "out of range (0, 1]");
  require(unit(s.detection.eta_idler), "detection.eta_idler", "out of range (0, 1]");
  require(unit(s.detection.voa_transmission), "detection.voa_transmission", "out of range (0, 1]");
  require(s.balance.voa_min > 0.0 && s.balance.voa_min <= 1.0, "detection.voa_min", "out of range (0, 1]");
  require(s.balance.voa_max > s.balance.voa_min && s.balance.voa_max <= 1.0, "detection.voa_max",
          "out of range (voa_min, 1]");
  require(s.detection.electronic_noise_db_below_snl >= 0.0, "detection.electronic_noise_db_below_snl",
          "must be non-negative");
  require(s.detection.detection_frequency_MHz > 0.0, "detection.detection_frequency_MHz", "must be positive");
  require(s.detection.resolution_bandwidth_kHz > 0.0, "detection.resolution_bandwidth_kHz", "must be positive");

  require(!s.sweep.points.empty(), "sweep.points", "must list at least one point");
  require(strictly_increasing(s.sweep.points), "sweep.points", "must be strictly increasing");
  for (double p : s.sweep.points) {
    switch (s.sweep.axis) {
      case SweepAxis::gain: require(p >= 1.0, "sweep.points", "gains must be >= 1"); break;
      case SweepAxis::pump_power: require(p >= 0.0, "sweep.points", "pump powers must be non-negative"); break;
      case SweepAxis::seed_power: require(p > 0.0, "sweep.points", "seed powers must be positive"); break;
    }
  }
  require(strictly_increasing(s.sweep.seed_powers_uW), "sweep.seed_powers_uW", "must be strictly increasing");
  for (double p : s.sweep.seed_powers_uW) require(p > 0.0, "sweep.seed_powers_uW", "must be positive");

  require(s.model.slices >= 33 && s.model.slices % 2 == 1, "model.slices", "must be odd and >= 33");
  require(s.model.sideband_order >= 1 && s.model.sideband_order <= 4, "model.sideband_order", "out of range [1, 4]");
  require(s.model.rep_rate_MHz > 0.0, "model.rep_rate_MHz", "must be positive");
  const int n = s.spectrum.grid_points;
  require(n >= 256 && (n & (n - 1)) == 0, "spectrum.grid_points", "must be a power of two >= 256");
  require(s.spectrum.dt_ps > 0.0, "spectrum.dt_ps", "must be positive");
  if (s.spectrum.target_gain) require(*s.spectrum.target_gain > 1.0, "spectrum.target_gain", "must exceed 1");

  // Collapse repeats from per-point checks.
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (auto& i : issues) {
    if (seen.insert(i).second) unique.push_back(i);
  }
  return unique;
}

Scenario parse_scenario(std::istream& in) {
  std::string text, line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    text += (!t.empty() && t[0] == '#') ? std::string() : line;
    text += '\n';
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream ss(text);
    boost::property_tree::ini_parser::read_ini(ss, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
  }

  std::vector<std::string> issues;
  for (const auto& sec : kRequiredSections) {
    if (!tree.get_child_optional(sec)) issues.push_back("missing section: " + sec);
  }

  std::map<std::string, std::map<std::string, const Field*>> known;
  for (const Field& f : fields()) known[f.section][f.key] = &f;

  Scenario s;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      issues.push_back(section + ": key outside a section");
      continue;
    }
    const auto sec = known.find(section);
    if (sec == known.end()) {
      issues.push_back("unknown section: " + section);
      continue;
    }
    for (const auto& [key, value] : body) {
      const auto f = sec->second.find(key);
      if (f == sec->second.end()) {
        issues.push_back(section + "." + key + ": unknown key");
        continue;
      }
      try {
        f->second->set(s, value.data());
      } catch (const std::invalid_argument& e) {
        issues.push_back(section + "." + key + ": " + e.what());
      }
    }
  }
  if (!issues.empty()) throw ConfigError(issues);
  issues = check_scenario(s);
  if (!issues.empty()) throw ConfigError(issues);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read " + path});
  return parse_scenario(in);
}

}  // namespace fopa::cli

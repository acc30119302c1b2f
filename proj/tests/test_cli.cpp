#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fopa/cli/output.hpp"
#include "fopa/cli/runs.hpp"
#include "fopa/cli/scenario.hpp"

using namespace fopa;
using namespace fopa::cli;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = FOPA_SCENARIO_DIR;
const std::string kSimulate = FOPA_SIMULATE;

// Minimal valid scenario. `tail` adds whole sections the base leaves out.
std::string base_ini(const std::string& sweep = "axis = gain\npoints = 1, 2, 5",
                     const std::string& fiber_extra = "", const std::string& tail = "") {
  return "[scenario]\nname = unit\n"
         "[fiber]\nlength_m = 300\ngamma_per_W_km = 2\nzdw_nm = 1551\ndispersion_slope_ps_per_nm2_km = 0.075\n" +
         fiber_extra +
         "[pump]\nwavelength_nm = 1552.5\nfwhm_nm = 0.9\navg_power_mW = 1.7\n"
         "[seed]\nwavelength_nm = 1569.8\nfwhm_nm = 1.2\navg_power_uW = 2\n"
         "[detection]\neta_signal = 0.55\neta_idler = 0.55\n"
         "[sweep]\n" +
         sweep + "\n" + tail;
}

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

std::vector<std::string> config_issues(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool any_starts_with(const std::vector<std::string>& v, const std::string& prefix) {
  for (const auto& s : v) {
    if (s.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

std::string csv(const Table& t) {
  std::ostringstream ss;
  write_csv(ss, t, {"simulate test", "manifest " + hex64(fnv1a64("x"))});
  return ss.str();
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == name) return c;
  }
  FAIL("no column " << name);
  return 0;
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("fopa_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

int simulate(const std::string& args) {
  const int status = std::system((kSimulate + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config: empty file reports the first missing section") {
  const auto issues = config_issues("");
  REQUIRE_FALSE(issues.empty());
  CHECK(issues.front() == "missing section: fiber");
}

TEST_CASE("config: out-of-range VOA transmission names its key") {
  std::string text = base_ini();
  text.replace(text.find("eta_idler = 0.55\n"), 17, "eta_idler = 0.55\nvoa_transmission = 1.5\n");
  CHECK(any_starts_with(config_issues(text), "detection.voa_transmission: out of range"));
}

TEST_CASE("config: unknown keys, unknown sections and bad values are all reported") {
  std::string text = base_ini() + "[model]\nslice = 33\n[extras]\nfoo = 1\n";
  text.replace(text.find("avg_power_uW = 2"), 16, "avg_power_uW = two");
  const auto issues = config_issues(text);
  CHECK(any_starts_with(issues, "model.slice: unknown key"));
  CHECK(any_starts_with(issues, "unknown section: extras"));
  CHECK(any_starts_with(issues, "seed.avg_power_uW:"));
}

TEST_CASE("config: sweep points must increase strictly") {
  CHECK(any_starts_with(config_issues(base_ini("axis = gain\npoints = 2, 2")), "sweep.points: must be strictly"));
  CHECK(any_starts_with(config_issues(base_ini("axis = gain\npoints = 0.5")), "sweep.points: gains must be"));
}

TEST_CASE("config: canonical text round-trips") {
  const Scenario s = load_scenario(kScenarioDir + "/fig6a_77K.ini");
  std::string ini;
  std::string section;
  std::istringstream lines(s.canonical());
  for (std::string line; std::getline(lines, line);) {
    const auto dot = line.find('.');
    const std::string sec = line.substr(0, dot);
    if (sec != section) ini += "[" + sec + "]\n";
    section = sec;
    ini += line.substr(dot + 1) + "\n";
  }
  CHECK(parse(ini).canonical() == s.canonical());
}

TEST_CASE("bundled scenarios: all validate, fig2b_2uW carries the stated conditions") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kScenarioDir)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path().string()));
    ++count;
  }
  CHECK(count == 8);
  const Scenario s = load_scenario(kScenarioDir + "/fig2b_2uW.ini");
  CHECK(s.seed.avg_power_uW == 2.0);
  CHECK(s.pump.fwhm_nm == 0.9);
  CHECK(s.name == "fig2b_2uW");
}

TEST_CASE("output: header, hash comment and 9 significant digits") {
  Table t;
  t.columns = {"a", "b"};
  t.add({1.0 / 3.0, 2e-12});
  t.add({std::nan(""), -INFINITY});
  const std::string text = csv(t);
  CHECK(text.rfind("# simulate test\n# manifest ", 0) == 0);
  CHECK(text.find("\na,b\n0.333333333,2e-12\nnan,-inf\n") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("rt-vs-gain: no amplification sits at the shot-noise limit") {
  const Scenario s = parse(base_ini("axis = gain\npoints = 1, 2"));
  const Table t = run_rt_vs_gain(s);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][column(t, "g")] == doctest::Approx(1.0));
  CHECK(std::abs(t.rows[0][column(t, "R_t_db")]) <= 0.05);
  CHECK(t.rows[1][column(t, "R_t_db")] < 0.0);
}

TEST_CASE("rt-vs-gain: identical output for repeated, serial and parallel runs") {
  const Scenario s = parse(base_ini("axis = gain\npoints = 1.5, 3, 8, 20"));
  const std::string a = csv(run_rt_vs_gain(s, Execution::parallel));
  const std::string b = csv(run_rt_vs_gain(s, Execution::parallel));
  const std::string c = csv(run_rt_vs_gain(s, Execution::serial));
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.find("\ng,R_t_db,R_s_db,R_i_db,voa_opt,i1_over_i2,xi,snl_photons,") != std::string::npos);
}

TEST_CASE("rt-vs-gain: 15 uW seed stays above the shot-noise limit at low gain") {
  Scenario s = load_scenario(kScenarioDir + "/fig2b_15uW.ini");
  s.sweep.points = {1.5, 3, 5, 6, 6.9};
  const Table t = run_rt_vs_gain(s);
  for (const auto& row : t.rows) {
    CAPTURE(row[column(t, "g")]);
    CHECK(row[column(t, "R_t_db")] > 0.0);
  }
}

TEST_CASE("rt-vs-gain: 77 K scenario near g = 56 reaches about -3.1 dB") {
  Scenario s = load_scenario(kScenarioDir + "/fig6a_77K.ini");
  s.sweep.points = {56};
  const Table t = run_rt_vs_gain(s);
  const double rt = t.rows[0][column(t, "R_t_db")];
  CHECK(rt <= -3.1 + 0.4);
  CHECK(rt >= -3.1 - 0.4);
}

TEST_CASE("rt-vs-gain: a failing point is reported with its index") {
  Scenario s = parse(base_ini("axis = gain\npoints = 2, 1e9"));
  try {
    run_rt_vs_gain(s);
    FAIL("expected a sweep failure");
  } catch (const SweepPointError& e) {
    CHECK(e.index() == 1);
    CHECK(e.value() == 1e9);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("sweep point 1") != std::string::npos);
  }
}

TEST_CASE("gain-vs-pump: unity at zero pump, lower gain for the stronger seed") {
  Scenario s = load_scenario(kScenarioDir + "/fig3b.ini");
  s.sweep.seed_powers_uW = {2, 15};
  s.sweep.points = {0, 0.5, 1.0, 1.5, 2.0};
  const Table t = run_gain_vs_pump(s);
  REQUIRE(t.rows.size() == 10);
  const std::size_t g = column(t, "g");
  CHECK(t.rows[0][g] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.rows[5][g] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 0; k < 5; ++k) {
    CAPTURE(k);
    CHECK(t.rows[5 + k][g] <= t.rows[k][g] + 1e-9);
  }
  CHECK(t.rows[4][g] > t.rows[3][g]);
}

TEST_CASE("gain-vs-pump: doubling the length at low gain follows the undepleted formula") {
  // Zero dispersion everywhere: the linear mismatch vanishes, kappa = 2 gamma P and g = 1 + (gamma P L)^2.
  const std::string flat = "beta2_ref_ps2_per_km = 0\n";
  std::string text = base_ini("axis = pump_power\npoints = 0.02", flat, "[model]\npulse_averaging = false\n");
  text.replace(text.find("zdw_nm = 1551"), 13, "zdw_nm = 1552.5");
  text.replace(text.find("dispersion_slope_ps_per_nm2_km = 0.075"), 38, "dispersion_slope_ps_per_nm2_km = 0");
  text.replace(text.find("avg_power_uW = 2"), 16, "avg_power_uW = 0.001");
  Scenario s = parse(text);
  s.fiber.overlap_factor = 1.0;
  for (double length : {300.0, 600.0}) {
    s.fiber.length_m = length;
    const Table t = run_gain_vs_pump(s);
    const double peak = t.rows[0][column(t, "pump_peak_W")];
    const double phi = s.fiber.gamma_per_W_km * peak * length * 1e-3;
    CAPTURE(length);
    CAPTURE(phi);
    CHECK(phi < 0.2);
    CHECK(t.rows[0][column(t, "g")] - 1.0 == doctest::Approx(phi * phi).epsilon(0.02));
  }
}

TEST_CASE("xi-vs-gain: ideal amplifier is balanced, Raman makes the signal side richer") {
  std::string sat = "[saturation]\ndecorrelation_fraction = 0\n";
  Scenario ideal = parse(base_ini("axis = gain\npoints = 1.5, 3, 10", "", sat + "[model]\nsideband_order = 1\n"));
  ideal.optimize_voa = false;
  const Table t0 = run_xi_vs_gain(ideal);
  for (const auto& row : t0.rows) CHECK(row[column(t0, "xi")] == doctest::Approx(1.0).epsilon(1e-6));

  Scenario raman = parse(base_ini("axis = gain\npoints = 1.5, 2, 3", "", sat + "[raman]\nraman_fraction = 1e-4\n"));
  const Table t1 = run_xi_vs_gain(raman);
  const std::size_t xi = column(t1, "xi");
  for (const auto& row : t1.rows) CHECK(row[xi] > 1.0);
  CHECK(t1.rows[1][xi] < t1.rows[0][xi]);
  CHECK(t1.rows[2][xi] < t1.rows[1][xi]);
}

TEST_CASE("spectrum: without a seed the mean-field sidebands stay empty") {
  std::string text = base_ini("axis = gain\npoints = 2", "", "[spectrum]\ngrid_points = 2048\ndt_ps = 0.05\n");
  text.replace(text.find("avg_power_uW = 2"), 16, "avg_power_uW = 0");
  const SpectrumRun r = run_spectrum(parse(text));
  const std::size_t lad = column(r.sidebands, "ladder_db_rel_pump");
  for (const auto& row : r.sidebands.rows) {
    if (row[0] == 0.0) continue;
    CHECK(std::isinf(row[lad]));
  }
}

TEST_CASE("simulate: exit codes and written files") {
  const fs::path dir = scratch_dir();
  const fs::path good = dir / "good.ini";
  const fs::path bad = dir / "bad.ini";
  {
    std::ofstream(good) << base_ini("axis = gain\npoints = 1, 3");
    std::ofstream(bad) << base_ini() << "[detection2]\nfoo = 1\n";
  }
  CHECK(simulate("validate --config " + good.string()) == 0);
  CHECK(simulate("validate --config " + bad.string()) == 2);
  CHECK(simulate("rt-vs-gain --config " + (dir / "missing.ini").string()) == 2);
  CHECK(simulate("no-such-subcommand") == 2);

  const fs::path out1 = dir / "a.csv";
  const fs::path out2 = dir / "b.csv";
  REQUIRE(simulate("rt-vs-gain --config " + good.string() + " --out " + out1.string() + " --threads 1") == 0);
  REQUIRE(simulate("rt-vs-gain --config " + good.string() + " --out " + out2.string() + " --threads 3") == 0);
  const std::string a = read_file(out1);
  CHECK(a == read_file(out2));
  CHECK(a.find("# manifest ") != std::string::npos);
  CHECK(fs::exists(dir / "a.manifest.json"));

  std::ofstream(bad) << base_ini("axis = gain\npoints = 2, 1e9");
  CHECK(simulate("rt-vs-gain --config " + bad.string() + " --out " + (dir / "c.csv").string()) == 3);
  fs::remove_all(dir);
}

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sagin/commands.hpp"
#include "sagin/error.hpp"

using namespace sagin;
using namespace sagin::commands;

namespace {

const std::string kBaseline = SAGIN_SOURCE_DIR "/scenarios/baseline.scenario";
const std::string kCorrupted = SAGIN_SOURCE_DIR "/tests/fixtures/corrupted_coefficients.tsv";

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sagin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

const scenario::Scenario& baseline() {
  static const auto s = scenario::load(kBaseline);
  return s;
}

}  // namespace

TEST_CASE("sweep parsing") {
  const auto db = Sweep::parse("0:40:9", SweepScale::db);
  CHECK(db.scale == SweepScale::db);
  const auto g = db.grid();
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 0.0);
  CHECK(g[4] == 20.0);
  CHECK(g.back() == 40.0);
  const auto lin = db.linear_values();
  CHECK(lin[0] == doctest::Approx(1.0));
  CHECK(lin[2] == doctest::Approx(10.0));
  CHECK(lin[8] == doctest::Approx(1e4));
  const auto l = Sweep::parse("5:90:18:linear", SweepScale::db);
  CHECK(l.scale == SweepScale::linear);
  CHECK(l.linear_values()[1] == doctest::Approx(10.0));
  CHECK(Sweep::parse("-300:300:61", SweepScale::linear).grid()[30] == doctest::Approx(0.0));
  CHECK(Sweep::parse("7:7:1", SweepScale::linear).grid() == std::vector<double>{7.0});
  for (const char* bad : {"1:2", "1:2:3:4:5", "a:2:3", "1:2:0", "2:1:5", "1:2:3:log", "1:2:3.5"})
    CHECK_THROWS_AS(Sweep::parse(bad, SweepScale::db), ConfigError);
}

TEST_CASE("CSV output ignores the global locale") {
  Table t{{"a", "b", "c"}, {{1234567.25, std::int64_t{1234567}, std::string("x")}, {0.1, std::int64_t{-3}, std::string("y")}}};
  const std::locale comma(std::locale::classic(), new CommaDecimal);
  const std::locale previous = std::locale::global(comma);
  std::ostringstream os;
  os.imbue(comma);
  t.write_csv(os);
  std::locale::global(previous);
  CHECK(os.str() == "a,b,c\n1234567.25,1234567,x\n0.1,-3,y\n");
  CHECK(t.number(0, "a") == 1234567.25);
  CHECK(t.number(1, "b") == -3.0);
  CHECK_THROWS(t.column("missing"));
}

TEST_CASE("geometry table") {
  const auto t = geometry(baseline(), std::nullopt, nullptr);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.columns == std::vector<std::string>{"theta0_deg", "d_rf_simple_km", "d_rf_accurate_km",
                                              "ground_range_km", "d_st_km", "d_dif_km", "theta_e_deg",
                                              "flat_benchmark_km", "path_loss_db", "lambda_t_db"});
  CHECK(t.number(0, "theta_e_deg") <= 60.0);
  CHECK(t.number(0, "d_dif_km") >= 0.0);
  CHECK(t.number(0, "flat_benchmark_km") == doctest::Approx(346.41016).epsilon(1e-7));

  auto vacuum = baseline();
  vacuum.surface_refractivity = 0.0;
  const auto v = geometry(vacuum, Sweep{5, 90, 18, SweepScale::linear}, nullptr);
  double prev = 1e9;
  for (std::size_t i = 0; i < v.rows.size(); ++i) {
    CHECK(std::abs(v.number(i, "d_rf_accurate_km") - v.number(i, "d_st_km")) < 2e-6);
    CHECK(v.number(i, "d_st_km") < prev);
    prev = v.number(i, "d_st_km");
  }
  const auto b = geometry(baseline(), Sweep{5, 90, 18, SweepScale::linear}, nullptr);
  prev = 1e9;
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    CHECK(b.number(i, "theta0_deg") == doctest::Approx(5.0 + 5.0 * i));
    CHECK(b.number(i, "d_st_km") < prev);
    prev = b.number(i, "d_st_km");
  }
}

TEST_CASE("doppler table") {
  const auto t = doppler(baseline(), std::nullopt);
  REQUIRE(t.rows.size() == 61);
  CHECK(t.number(0, "t_s") == -300.0);
  CHECK(t.number(30, "t_s") == 0.0);
  CHECK(t.number(30, "doppler_ratio") == 0.0);
  for (std::size_t i = 0; i < 30; ++i) {
    const double a = t.number(30 - i, "doppler_hz_at_fc");
    const double b = t.number(30 + i, "doppler_hz_at_fc");
    CHECK(std::abs(a + b) < 1e-15 * 2e9);
  }
  CHECK(t.number(0, "doppler_ratio") > 0.0);
}

TEST_CASE("perf trends") {
  PerfOptions m_series;
  m_series.series = "m";
  m_series.series_values = {2, 3, 4, 5};
  const auto tm = perf(baseline(), m_series, nullptr);
  REQUIRE(tm.rows.size() == 36);
  for (std::size_t i = 0; i < 9; ++i) {
    for (int j = 1; j < 4; ++j)
      CHECK(tm.number(9 * j + i, "P_out") < tm.number(9 * (j - 1) + i, "P_out"));
    CHECK(tm.number(27 + i, "P_out") <= tm.number(i, "P_out"));
  }

  PerfOptions k_series;
  k_series.series = "K";
  k_series.series_values = {0.5, 1, 4, 10};
  const auto tk = perf(baseline(), k_series, nullptr);
  for (std::size_t i = 0; i < 9; ++i)
    for (int j = 1; j < 4; ++j) CHECK(tk.number(9 * j + i, "R_er") > tk.number(9 * (j - 1) + i, "R_er"));

  PerfOptions qam;
  qam.series = "M";
  qam.series_values = {4, 16, 64};
  qam.sweep = Sweep{0, 30, 9, SweepScale::db};
  const auto tq = perf(baseline(), qam, nullptr);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(tq.number(9 + i, "BER_bound") > tq.number(i, "BER_bound"));
    CHECK(tq.number(18 + i, "BER_bound") > tq.number(9 + i, "BER_bound"));
    CHECK(tq.number(i, "R_GP") <= tq.number(i, "R_er"));
  }

  PerfOptions bad;
  bad.series = "z";
  bad.series_values = {1};
  CHECK_THROWS(perf(baseline(), bad, nullptr));
}

TEST_CASE("perf power axis and Monte-Carlo columns") {
  PerfOptions opts;
  opts.axis = PerfAxis::power;
  opts.sweep = Sweep{30, 50, 3, SweepScale::db};
  const auto t = perf(baseline(), opts, nullptr);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.number(1, "x") == 40.0);
  const auto lb = scenario::link_budget(baseline(), nullptr, 60.0);
  CHECK(t.number(1, "lambda_t") == doctest::Approx(lb.lambda_t).epsilon(1e-12));
  CHECK(t.number(2, "lambda_t") == doctest::Approx(lb.lambda_t * 10).epsilon(1e-12));

  PerfOptions mc;
  mc.monte_carlo = true;
  mc.mc.trials = 100000;
  mc.mc.master_seed = 5;
  const auto m = perf(baseline(), mc, nullptr);
  CHECK(m.columns.back() == "mc_seed");
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    // Outage below ~100 expected hits is too rare to compare at this size.
    if (m.number(i, "P_out") * 100000 > 100)
      CHECK(std::abs(m.number(i, "P_out_mc") - m.number(i, "P_out")) <= 4 * m.number(i, "P_out_se"));
    CHECK(std::abs(m.number(i, "R_er_mc") - m.number(i, "R_er")) <= 4 * m.number(i, "R_er_se"));
    CHECK(m.number(i, "mc_trials") == 100000.0);
  }
}

TEST_CASE("fading table") {
  const auto t = commands::fading(baseline(), std::nullopt, std::nullopt);
  REQUIRE(t.rows.size() == 41);
  CHECK(t.number(0, "cdf") == 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    CHECK(t.number(i, "cdf") == doctest::Approx(t.number(i, "cdf_lemma")).epsilon(1e-12));
  montecarlo::McConfig mc;
  mc.trials = 200000;
  const auto e = commands::fading(baseline(), Sweep{0.5, 2, 4, SweepScale::linear}, mc);
  for (std::size_t i = 0; i < e.rows.size(); ++i)
    CHECK(std::abs(e.number(i, "ecdf") - e.number(i, "cdf")) <= 4 * e.number(i, "ecdf_se"));
}

TEST_CASE("command line exit codes") {
  SUBCASE("success") {
    const auto r = cli({"--config", kBaseline, "geometry"});
    CHECK(r.code == kExitOk);
    CHECK(lines(r.out).size() == 2);
    CHECK(cli({"--config", kBaseline, "doppler", "--sweep=-10:10:3"}).code == kExitOk);
    CHECK(cli({"perf", "--sweep", "0:10:3", "--series", "m=2,4"}).code == kExitOk);
    CHECK(cli({"--help"}).code == kExitOk);
  }
  SUBCASE("configuration errors") {
    const auto missing = cli({"--config", "/nonexistent.scenario", "geometry"});
    CHECK(missing.code == kExitConfigError);
    CHECK(missing.err.find("/nonexistent.scenario") != std::string::npos);
    const auto bad = temp_file("sagin_bad.scenario", "[geometry]\naltitude_km = high\n");
    const auto r = cli({"--config", bad.string(), "geometry"});
    CHECK(r.code == kExitConfigError);
    CHECK(r.err.find("sagin_bad.scenario:2") != std::string::npos);
    CHECK(cli({"geometry", "--sweep", "1:2"}).code == kExitConfigError);
    CHECK(cli({"perf", "--series", "m"}).code == kExitConfigError);
    CHECK(cli({"perf", "--axis", "time"}).code == kExitConfigError);
    CHECK(cli({"--bogus"}).code == kExitConfigError);
    CHECK(cli({}).code == kExitConfigError);
    CHECK(cli({"--coefficients", "/nonexistent.tsv", "geometry"}).code == kExitConfigError);
    CHECK(cli({"perf", "--trials", "5"}).code == kExitConfigError);
    std::filesystem::remove(bad);
  }
  SUBCASE("numerical domain errors") {
    const auto duct = temp_file("sagin_duct.scenario",
                                "[geometry]\ndetected_elevation_deg = 0.5\n[refraction]\n"
                                "surface_refractivity = 20000\nscale_height_km = 1\nbending_model = simple\n");
    const auto r = cli({"--config", duct.string(), "geometry"});
    CHECK(r.code == kExitNumericalError);
    CHECK(r.err.find("quadrature node") != std::string::npos);
    std::filesystem::remove(duct);
  }
}

TEST_CASE("dump-config round trip and --out") {
  const auto r = cli({"--config", kBaseline, "--dump-config"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  CHECK(scenario::parse(in, "dump") == baseline());
  const auto again = temp_file("sagin_dump.scenario", r.out);
  CHECK(cli({"--config", again.string(), "--dump-config"}).out == r.out);
  std::filesystem::remove(again);

  const auto out = std::filesystem::temp_directory_path() / "sagin_out.csv";
  const auto w = cli({"--config", kBaseline, "--out", out.string(), "doppler"});
  CHECK(w.code == kExitOk);
  CHECK(w.out.empty());
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  CHECK(header == "t_s,psi_rad,doppler_ratio,doppler_hz_at_fc");
  std::filesystem::remove(out);
}

TEST_CASE("validate") {
  const auto ok = cli({"--config", kBaseline, "validate", "--trials", "200000", "--seed", "9"});
  CHECK(ok.code == kExitOk);
  CHECK(lines(ok.out).front() == "check,expected,got,tolerance,status");
  CHECK(ok.out.find(",FAIL") == std::string::npos);
  const auto again = cli({"--config", kBaseline, "validate", "--trials", "200000", "--seed", "9"});
  CHECK(again.out == ok.out);

  const auto bad = cli({"--config", kBaseline, "--coefficients", kCorrupted, "validate", "--trials", "200000", "--seed", "9"});
  CHECK(bad.code == kExitValidationFailed);
  std::vector<std::string> failed;
  for (const auto& l : lines(bad.out))
    if (l.ends_with(",FAIL")) failed.push_back(l.substr(0, l.find(',')));
  CHECK(failed == std::vector<std::string>{"coefficient_table_sane"});
  CHECK(lines(bad.out).size() == lines(ok.out).size());
}

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "sagin/attenuation.hpp"
#include "sagin/error.hpp"

using namespace sagin;
using namespace sagin::attenuation;

namespace {

WeatherConditions rain(double k, double alpha, double rate, double path) {
  WeatherConditions w;
  w.rain = {k, alpha, rate, path};
  return w;
}

WeatherConditions fog(double k, double density, double path) {
  WeatherConditions w;
  w.fog = {k, density, path};
  return w;
}

}  // namespace

TEST_CASE("free-space path loss") {
  const CarrierSpec c{};
  const double lambda_over_4pi = 299792458.0 / (4 * kPi * 2e9);
  const double expected = lambda_over_4pi * lambda_over_4pi / (346410.0 * 346410.0);
  CHECK(path_loss(c, 346410.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(path_loss(c, 346410.0) == doctest::Approx(1.1857e-15).epsilon(1e-4));
  // Standard FSPL in dB: 20 log10 d + 20 log10 f - 147.55.
  const double fspl_db = 20 * std::log10(346410.0) + 20 * std::log10(2e9) - 147.55;
  CHECK(linear_loss_to_db(path_loss(c, 346410.0)) == doctest::Approx(fspl_db).epsilon(1e-4));
  CHECK(path_loss(c, 2000.0) == doctest::Approx(path_loss(c, 1000.0) / 4).epsilon(1e-14));
  CarrierSpec hi = c;
  hi.frequency_hz = 4e9;
  CHECK(path_loss(hi, 1000.0) == doctest::Approx(path_loss(c, 1000.0) / 4).epsilon(1e-14));
  CarrierSpec steep = c;
  steep.path_loss_exponent = 3.0;
  CHECK(path_loss(steep, 1000.0) == doctest::Approx(path_loss(c, 1000.0) / 1000.0).epsilon(1e-14));
  double prev = 1.0;
  for (double d = 1e3; d < 1e7; d *= 1.5) {
    CHECK(path_loss(c, d) < prev);
    prev = path_loss(c, d);
  }
  CHECK_THROWS_AS(path_loss(c, 0.0), std::invalid_argument);
  steep.path_loss_exponent = 1.5;
  CHECK_THROWS_AS(steep.validate(), std::invalid_argument);
}

TEST_CASE("molecular absorption") {
  AbsorptionSpec none{{{"o2", 0.0}, {"h2o", 0.0}}, 1e5, 2e9};
  CHECK(molecular_absorption(none) == 1.0);
  AbsorptionSpec one{{{"o2", 1e-5}}, 1e5, 2e9};
  CHECK(molecular_absorption(one) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(molecular_absorption(one) == doctest::Approx(0.3679).epsilon(1e-4));
  AbsorptionSpec two{{{"a", 3e-6}, {"b", 3e-6}}, 1e5, 2e9};
  AbsorptionSpec doubled{{{"a", 6e-6}}, 1e5, 2e9};
  CHECK(molecular_absorption(two) == doctest::Approx(molecular_absorption(doubled)).epsilon(1e-14));
  CHECK(molecular_absorption(AbsorptionSpec{{{"a", 1e-6}}, 2e5, 2e9}) <
        molecular_absorption(AbsorptionSpec{{{"a", 1e-6}}, 1e5, 2e9}));
  AbsorptionSpec bad{{{"a", -1e-6}}, 1e5, 2e9};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("rain") {
  CHECK(rain_specific_attenuation(rain(8.47e-5, 1.0664, 0.0, 5.0)) == 0.0);
  CHECK(rain_factor(rain(8.47e-5, 1.0664, 0.0, 5.0)) == 1.0);
  CHECK(rain_factor(rain(8.47e-5, 1.0664, 10.0, 0.0)) == 1.0);
  CHECK(rain_specific_attenuation(rain(1e-4, 1.0, 10.0, 1.0)) == doctest::Approx(0.001).epsilon(1e-14));
  CHECK(rain_factor(rain(1.0, 1.0, 10.0, 1.0)) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(rain_factor(rain(1.0, 1.0, 3.0, 1.0)) == doctest::Approx(0.5012).epsilon(1e-4));
  const auto a = rain(0.02, 1.2, 25.0, 3.0);
  const auto b = rain(0.02, 1.2, 25.0, 4.5);
  const auto ab = rain(0.02, 1.2, 25.0, 7.5);
  CHECK(rain_factor(ab) == doctest::Approx(rain_factor(a) * rain_factor(b)).epsilon(1e-12));

  const auto table = CoefficientTable::load(SAGIN_SOURCE_DIR "/data/itu_coefficients.tsv");
  const auto row = table.at(2.0);
  CHECK(row.k_r == 8.47e-5);
  CHECK(row.alpha_r == 1.0664);
  const double hand = 8.47e-5 * std::exp(1.0664 * std::log(25.0));
  CHECK(rain_specific_attenuation(rain(row.k_r, row.alpha_r, 25.0, 1.0)) == doctest::Approx(hand).epsilon(1e-14));
}

TEST_CASE("fog") {
  CHECK(fog_factor(fog(0.1, 0.0, 20.0)) == 1.0);
  CHECK(fog_factor(fog(0.1, 0.5, 20.0)) == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-14));
  CHECK(fog_factor(fog(0.1, 0.5, 20.0)) == doctest::Approx(0.7943).epsilon(1e-4));
  for (double d : {0.5, 3.0, 40.0}) {
    const auto w = fog(0.0037386, 0.3, d);
    CHECK(-10 * std::log10(fog_factor(w)) == doctest::Approx(fog_specific_attenuation(w) * d).epsilon(1e-12));
  }
}

TEST_CASE("clouds") {
  WeatherConditions w;
  CHECK(clouds_factor(w, 0.5) == 1.0);
  const double theta = 0.6;
  w.clouds = {{std::sin(theta), 1.0}};
  CHECK(cloud_attenuation_db(w.clouds[0], theta) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(clouds_factor(w, theta) == doctest::Approx(0.7943).epsilon(1e-4));
  const double single = clouds_factor(w, theta);
  w.clouds.push_back(w.clouds[0]);
  CHECK(clouds_factor(w, theta) == doctest::Approx(single * single).epsilon(1e-14));
  CHECK_THROWS_AS(clouds_factor(w, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cloud_attenuation_db(w.clouds[0], 0.0), std::invalid_argument);
  CHECK_NOTHROW(clouds_factor(w, kPi / 2));
}

TEST_CASE("decibel conversions") {
  for (double db : {0.0, 0.1, 3.0, 10.0, 57.3}) {
    const double f = db_to_linear_loss(db);
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
    CHECK(linear_loss_to_db(f) == doctest::Approx(db).epsilon(1e-12));
  }
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_watt(40.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(watt_to_dbm(dbm_to_watt(-90.0)) == doctest::Approx(-90.0).epsilon(1e-14));
  CHECK(noise_power_dbm_from_bandwidth(1e8) == doctest::Approx(-90.0).epsilon(1e-14));
}

TEST_CASE("link budget composition") {
  CHECK(compose_link_budget(100.0, 1.0, LinkFactors{}) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(compose_link_budget(dbm_to_watt(40.0), dbm_to_watt(-90.0), LinkFactors{}) ==
        doctest::Approx(1e13).epsilon(1e-12));
  const LinkFactors f{1e-15, 0.9, 0.7, 0.95, 0.5};
  const double base = compose_link_budget(10.0, 1e-12, f);
  CHECK(base == doctest::Approx(10.0 * 1e-15 * 0.9 * 0.7 * 0.95 * 0.5 / 1e-12).epsilon(1e-14));
  const LinkFactors permuted{0.5, 0.95, 0.7, 0.9, 1e-15};
  CHECK(compose_link_budget(10.0, 1e-12, permuted) == doctest::Approx(base).epsilon(2e-16));
  LinkFactors scaled = f;
  scaled.rain *= 0.5;
  CHECK(compose_link_budget(10.0, 1e-12, scaled) == doctest::Approx(base * 0.5).epsilon(1e-14));
  LinkFactors bad = f;
  bad.fog = 1.5;
  CHECK_THROWS_AS(compose_link_budget(10.0, 1e-12, bad), std::invalid_argument);
  CHECK_THROWS_AS(compose_link_budget(0.0, 1e-12, f), std::invalid_argument);
}

TEST_CASE("coefficient table") {
  const auto table = CoefficientTable::load(SAGIN_SOURCE_DIR "/data/itu_coefficients.tsv");
  REQUIRE(table.rows().size() == 22);
  for (const auto& r : table.rows()) {
    CHECK(r.k_r > 0.0);
    CHECK(r.k_l > 0.0);
    CHECK(r.alpha_r > 0.0);
    CHECK(r.alpha_r <= 2.0);
  }
  const auto mid = table.at(2.25);
  CHECK(mid.k_r == doctest::Approx(std::sqrt(8.47e-5 * 1.321e-4)).epsilon(1e-3));
  CHECK(mid.k_r > 8.47e-5);
  CHECK(mid.k_r < 1.321e-4);
  CHECK(mid.alpha_r > 1.0664);
  CHECK(mid.alpha_r < 1.1209);
  CHECK_THROWS_AS(table.at(0.5), std::out_of_range);
  CHECK_THROWS_AS(table.at(150.0), std::out_of_range);
  CHECK_THROWS_AS(CoefficientTable{}.at(2.0), std::out_of_range);

  std::istringstream no_header("1 2 3 4\n");
  CHECK_THROWS_AS(CoefficientTable::parse(no_header, "t.tsv"), ConfigError);
  std::istringstream short_row("frequency_GHz K_R_h alpha_R_h K_L\n1 2 3\n");
  try {
    (void)CoefficientTable::parse(short_row, "t.tsv");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("t.tsv:2") != std::string::npos);
  }
  std::istringstream unordered("frequency_GHz K_R_h alpha_R_h K_L\n2 1 1 1\n1 1 1 1\n");
  CHECK_THROWS_AS(CoefficientTable::parse(unordered), ConfigError);
  CHECK_THROWS_AS(CoefficientTable::load("/nonexistent/table.tsv"), ConfigError);
}

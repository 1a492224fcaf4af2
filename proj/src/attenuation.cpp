#include "sagin/attenuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <locale>
#include <sstream>
#include <stdexcept>

#include "sagin/error.hpp"

namespace sagin::attenuation {

void CarrierSpec::validate() const {
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(path_loss_exponent >= 2.0))
    throw std::invalid_argument("path-loss exponent must be >= 2");
  if (!(speed_of_light_m_s > 0.0)) throw std::invalid_argument("speed of light must be > 0");
}

void AbsorptionSpec::validate() const {
  for (const auto& s : species) {
    if (!(s.coefficient_per_m >= 0.0))
      throw std::invalid_argument("absorption coefficient of '" + s.name +
                                  "' must be non-negative");
  }
  if (!(path_length_m >= 0.0)) throw std::invalid_argument("absorption path must be >= 0");
}

void WeatherConditions::validate() const {
  const auto nonneg = [](double v, const char* what) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be non-negative");
  };
  nonneg(rain.k_r, "rain K_R");
  nonneg(rain.alpha_r, "rain alpha_R");
  nonneg(rain.rate_mm_h, "rain rate");
  nonneg(rain.path_km, "rain path length");
  nonneg(fog.k_l, "fog K_L");
  nonneg(fog.density_g_m3, "fog density");
  nonneg(fog.path_km, "fog path length");
  for (const auto& c : clouds) {
    nonneg(c.columnar_water, "cloud columnar water");
    nonneg(c.k_l, "cloud K_L");
  }
}

double path_loss(const CarrierSpec& carrier, double distance_m) {
  carrier.validate();
  if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss: distance must be positive");
  const double amp = carrier.speed_of_light_m_s / (4.0 * kPi * carrier.frequency_hz);
  return amp * amp * std::pow(distance_m, -carrier.path_loss_exponent);
}

double molecular_absorption(const AbsorptionSpec& spec) {
  spec.validate();
  double total = 0.0;
  for (const auto& s : spec.species) total += s.coefficient_per_m;
  return std::exp(-total * spec.path_length_m);
}

double db_to_linear_loss(double attenuation_db) { return std::pow(10.0, -attenuation_db / 10.0); }

double linear_loss_to_db(double factor) { return -10.0 * std::log10(factor); }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

double noise_power_dbm_from_bandwidth(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return -170.0 + 10.0 * std::log10(bandwidth_hz);
}

double rain_specific_attenuation(const WeatherConditions& weather) {
  weather.validate();
  if (weather.rain.rate_mm_h == 0.0) return 0.0;
  return weather.rain.k_r * std::pow(weather.rain.rate_mm_h, weather.rain.alpha_r);
}

double rain_factor(const WeatherConditions& weather) {
  return db_to_linear_loss(rain_specific_attenuation(weather) * weather.rain.path_km);
}

double fog_specific_attenuation(const WeatherConditions& weather) {
  weather.validate();
  return weather.fog.k_l * weather.fog.density_g_m3;
}

double fog_factor(const WeatherConditions& weather) {
  return db_to_linear_loss(fog_specific_attenuation(weather) * weather.fog.path_km);
}

double cloud_attenuation_db(const Cloud& cloud, double true_elevation_rad) {
  if (!(true_elevation_rad > 0.0 && true_elevation_rad <= kPi / 2))
    throw std::invalid_argument("cloud attenuation needs a true elevation in (0, pi/2]");
  return cloud.columnar_water * cloud.k_l / std::sin(true_elevation_rad);
}

double clouds_factor(const WeatherConditions& weather, double true_elevation_rad) {
  weather.validate();
  if (!(true_elevation_rad > 0.0 && true_elevation_rad <= kPi / 2))
    throw std::invalid_argument("clouds_factor needs a true elevation in (0, pi/2]");
  // The product of 10^(gamma_i/10) is one power of ten of the summed dB.
  double total_db = 0.0;
  for (const auto& c : weather.clouds) total_db += cloud_attenuation_db(c, true_elevation_rad);
  return db_to_linear_loss(total_db);
}

double compose_link_budget(double transmit_power_w, double noise_power_w,
                           const LinkFactors& factors) {
  if (!(transmit_power_w > 0.0)) throw std::invalid_argument("transmit power must be > 0");
  if (!(noise_power_w > 0.0)) throw std::invalid_argument("noise power must be > 0");
  std::array<double, 7> terms{transmit_power_w,  factors.path_loss, factors.absorption,
                              factors.rain,      factors.fog,       factors.clouds,
                              1.0 / noise_power_w};
  for (std::size_t i = 1; i <= 5; ++i) {
    if (!(terms[i] > 0.0 && terms[i] <= 1.0))
      throw std::invalid_argument("link factors must lie in (0, 1]");
  }
  // Fixed (magnitude) order makes the product independent of argument order.
  std::sort(terms.begin(), terms.end());
  double product = 1.0;
  for (double t : terms) product *= t;
  return product;
}

CoefficientTable::CoefficientTable(std::vector<CoefficientRow> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (!(rows_[i].frequency_ghz > rows_[i - 1].frequency_ghz))
      throw ConfigError("coefficient table", "frequencies must be strictly increasing");
  }
}

CoefficientTable CoefficientTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open coefficient table");
  return parse(in, path);
}

CoefficientTable CoefficientTable::parse(std::istream& in, const std::string& source) {
  std::vector<CoefficientRow> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (!header_seen) {
      std::string rest;
      std::getline(ls, rest);
      std::istringstream hs(first + " " + rest);
      std::vector<std::string> cols;
      for (std::string c; hs >> c;) cols.push_back(c);
      const std::vector<std::string> expected{"frequency_GHz", "K_R_h", "alpha_R_h", "K_L"};
      if (cols != expected)
        throw ConfigError(where, "expected header 'frequency_GHz K_R_h alpha_R_h K_L'");
      header_seen = true;
      continue;
    }
    CoefficientRow row{};
    std::istringstream rs(line);
    rs.imbue(std::locale::classic());
    if (!(rs >> row.frequency_ghz >> row.k_r >> row.alpha_r >> row.k_l))
      throw ConfigError(where, "expected four numeric columns");
    std::string extra;
    if (rs >> extra) throw ConfigError(where, "unexpected trailing field '" + extra + "'");
    if (!rows.empty() && !(row.frequency_ghz > rows.back().frequency_ghz))
      throw ConfigError(where, "frequencies must be strictly increasing");
    rows.push_back(row);
  }
  if (!header_seen) throw ConfigError(source, "missing header line");
  return CoefficientTable(std::move(rows));
}

CoefficientRow CoefficientTable::at(double frequency_ghz) const {
  if (rows_.empty()) throw std::out_of_range("coefficient table is empty");
  if (frequency_ghz < rows_.front().frequency_ghz || frequency_ghz > rows_.back().frequency_ghz) {
    std::ostringstream os;
    os << "frequency " << frequency_ghz << " GHz outside tabulated range ["
       << rows_.front().frequency_ghz << ", " << rows_.back().frequency_ghz << "] GHz";
    throw std::out_of_range(os.str());
  }
  const auto hi = std::lower_bound(
      rows_.begin(), rows_.end(), frequency_ghz,
      [](const CoefficientRow& r, double f) { return r.frequency_ghz < f; });
  if (hi->frequency_ghz == frequency_ghz) return *hi;
  const auto lo = hi - 1;
  const double t = (std::log(frequency_ghz) - std::log(lo->frequency_ghz)) /
                   (std::log(hi->frequency_ghz) - std::log(lo->frequency_ghz));
  const auto loglerp = [t](double a, double b) {
    return std::exp(std::log(a) + t * (std::log(b) - std::log(a)));
  };
  return {frequency_ghz, loglerp(lo->k_r, hi->k_r), lo->alpha_r + t * (hi->alpha_r - lo->alpha_r),
          loglerp(lo->k_l, hi->k_l)};
}

}  // namespace sagin::attenuation

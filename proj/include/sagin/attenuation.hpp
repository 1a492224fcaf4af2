#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sagin/constants.hpp"

/// Power-domain loss factors of the satellite-ground link. Every factor is a
/// linear multiplier on the received power; weather terms are specified in dB
/// and converted here.
namespace sagin::attenuation {

struct CarrierSpec {
  double frequency_hz = 2e9;
  double path_loss_exponent = 2.0;
  double speed_of_light_m_s = kSpeedOfLightMps;

  void validate() const;
};

struct AbsorbingSpecies {
  std::string name;
  double coefficient_per_m = 0.0;
};

struct AbsorptionSpec {
  std::vector<AbsorbingSpecies> species;
  double path_length_m = 0.0;
  double frequency_hz = 2e9;

  void validate() const;
};

struct RainConditions {
  double k_r = 0.0;          // K_R
  double alpha_r = 1.0;      // alpha_R
  double rate_mm_h = 0.0;    // R_rate
  double path_km = 0.0;      // d_Rain
};

struct FogConditions {
  double k_l = 0.0;              // K_L, (dB/km)/(g/m^3)
  double density_g_m3 = 0.0;     // M_den
  double path_km = 0.0;          // d_Fog
};

struct Cloud {
  double columnar_water = 0.0;   // L_W, kg/m^2
  double k_l = 0.0;              // K_L
};

struct WeatherConditions {
  RainConditions rain;
  FogConditions fog;
  std::vector<Cloud> clouds;

  static WeatherConditions clear() { return {}; }
  void validate() const;
};

/// (c / (4 pi f_c))^2 d^-alpha with d in metres.
double path_loss(const CarrierSpec& carrier, double distance_m);

/// Beer-Lambert transmittance exp(-sum_i kappa_i r).
double molecular_absorption(const AbsorptionSpec& spec);

/// gamma_R = K_R R^alpha_R in dB/km.
double rain_specific_attenuation(const WeatherConditions& weather);
double rain_factor(const WeatherConditions& weather);

/// gamma_F = K_L M_den in dB/km.
double fog_specific_attenuation(const WeatherConditions& weather);
double fog_factor(const WeatherConditions& weather);

/// gamma_C,i = L_W,i K_L,i / sin(theta_e) in dB.
double cloud_attenuation_db(const Cloud& cloud, double true_elevation_rad);
double clouds_factor(const WeatherConditions& weather, double true_elevation_rad);

double db_to_linear_loss(double attenuation_db);
double linear_loss_to_db(double factor);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Thermal noise floor -174 dBm/Hz + 4 dB, i.e. -170 + 10 log10(BW) dBm.
double noise_power_dbm_from_bandwidth(double bandwidth_hz);

struct LinkFactors {
  double path_loss = 1.0;
  double absorption = 1.0;
  double rain = 1.0;
  double fog = 1.0;
  double clouds = 1.0;
};

/// lambda_t = P_s * (product of factors) / sigma^2, powers in watts.
double compose_link_budget(double transmit_power_w, double noise_power_w,
                           const LinkFactors& factors);

/// One row of the rain/fog coefficient table.
struct CoefficientRow {
  double frequency_ghz;
  double k_r;
  double alpha_r;
  double k_l;
};

/// Rain (ITU-R P.838, horizontal polarization) and cloud/fog liquid-water
/// (ITU-R P.840) coefficients versus frequency.
///
/// File format: '#' comments, one header line
///   frequency_GHz K_R_h alpha_R_h K_L
/// then whitespace-separated rows in increasing frequency.
class CoefficientTable {
 public:
  CoefficientTable() = default;
  explicit CoefficientTable(std::vector<CoefficientRow> rows);

  static CoefficientTable load(const std::string& path);
  static CoefficientTable parse(std::istream& in, const std::string& source = "<stream>");

  const std::vector<CoefficientRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }

  /// Interpolated coefficients: log-log for K_R and K_L, lin-log for alpha_R.
  /// Throws std::out_of_range outside the tabulated band.
  CoefficientRow at(double frequency_ghz) const;

 private:
  std::vector<CoefficientRow> rows_;
};

}  // namespace sagin::attenuation

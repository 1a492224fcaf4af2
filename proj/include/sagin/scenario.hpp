#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sagin/attenuation.hpp"
#include "sagin/fading.hpp"
#include "sagin/kinematics.hpp"
#include "sagin/montecarlo.hpp"
#include "sagin/refraction.hpp"

/// Scenario files.
///
/// A scenario is a plain text file of `[section]` headers and `key = value`
/// lines; `#` starts a comment. Angles are given in degrees and powers in
/// dBm; the accessors below hand the core modules radians and watts.
/// Unknown sections or keys, duplicates and malformed values are reported
/// as ConfigError with a `file:line` location.
namespace sagin::scenario {

/// Distance fed to the path-loss factor.
enum class PathDistance { bending, straight, flat };

struct AbsorberEntry {
  std::string name;
  double coefficient_per_m;
};

struct Scenario {
  // [geometry]
  double earth_radius_km = kEarthRadiusKm;
  double earth_rotation_rad_s = kEarthRotationRadPerS;
  double altitude_km = 300.0;
  double detected_elevation_deg = 60.0;
  double max_elevation_deg = 60.0;
  double epoch_s = 0.0;
  double satellite_speed_km_s = 7.8;
  double inclination_deg = 0.0;
  kinematics::UserKind user = kinematics::UserKind::terrestrial;
  double latitude_deg = 0.0;
  double airborne_speed_km_s = 0.25;
  double heading_deg = 0.0;

  // [refraction]
  double surface_refractivity = 315.0;
  double scale_height_km = 7.5;
  int quadrature_order = 64;
  refraction::QuadratureRule quadrature_rule = refraction::QuadratureRule::fejer;
  refraction::BendingModel bending_model = refraction::BendingModel::accurate;

  // [fading]
  double b0 = 0.1;
  double omega = 0.8;
  int nakagami_m = 4;

  // [carrier]
  double frequency_ghz = 2.0;
  double path_loss_exponent = 2.0;
  PathDistance path_distance = PathDistance::bending;

  // [power]; noise from noise_dbm, or from bandwidth_hz when that is set.
  double transmit_dbm = 40.0;
  double noise_dbm = -90.0;
  std::optional<double> bandwidth_hz;

  // [weather]; coefficient overrides take precedence over the table.
  double rain_rate_mm_h = 0.0;
  double rain_path_km = 0.0;
  double fog_density_g_m3 = 0.0;
  double fog_path_km = 0.0;
  std::vector<double> cloud_columnar_water;  // kg/m^2, one per layer
  std::optional<double> rain_k;
  std::optional<double> rain_alpha;
  std::optional<double> liquid_water_k;
  std::string coefficients;  // path; relative paths resolve against base_dir

  // [absorption]
  double absorption_path_m = 0.0;
  std::vector<AbsorberEntry> absorbers;

  // [analysis]
  double outage_threshold = 0.1;
  int qam_order = 4;
  std::int64_t mc_trials = 1'000'000;
  std::uint64_t seed = 20240601;
  int mc_streams = 8;

  /// Directory of the file the scenario was read from (not serialized).
  std::string base_dir;

  void validate() const;

  kinematics::EarthModel earth() const;
  kinematics::SatelliteState satellite() const;
  kinematics::UserKinematics user_kinematics() const;
  /// Pass culminating at max_elevation_deg at epoch_s, with the relative
  /// angular velocity of the configured user.
  kinematics::PassGeometry pass() const;

  refraction::RefractionProfile profile() const;
  refraction::GeometryScenario geometry() const;
  refraction::GeometryScenario geometry_at(double detected_elevation_deg) const;

  fading::ShadowedRicianParams fading() const;
  attenuation::CarrierSpec carrier() const;
  attenuation::AbsorptionSpec absorption() const;

  double transmit_power_w() const;
  double noise_power_w() const;

  /// True when any weather term needs tabulated coefficients.
  bool needs_coefficient_table() const;
  std::string coefficient_path() const;
  /// Weather with coefficients resolved from the overrides or `table`.
  attenuation::WeatherConditions weather(const attenuation::CoefficientTable* table) const;

  montecarlo::McConfig mc_config() const;
};

Scenario parse(std::istream& in, const std::string& source = "<stream>");
Scenario load(const std::string& path);

/// Writes every field with round-trip precision; parse(dump(s)) == s.
void dump(std::ostream& out, const Scenario& s);
std::string dump(const Scenario& s);

bool operator==(const Scenario& a, const Scenario& b);

/// Link budget of one ray: the factors and the resulting lambda_t.
struct LinkBudget {
  attenuation::LinkFactors factors;
  double slant_range_km;
  double true_elevation_rad;
  double lambda_t;
};

LinkBudget link_budget(const Scenario& s, const attenuation::CoefficientTable* table,
                       double detected_elevation_deg);

}  // namespace sagin::scenario

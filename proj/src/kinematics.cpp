#include "sagin/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sagin/error.hpp"

namespace sagin::kinematics {

void EarthModel::validate() const {
  if (!(radius_km > 0.0)) throw std::invalid_argument("earth radius must be positive");
  if (!(angular_velocity_rad_s >= 0.0))
    throw std::invalid_argument("earth angular velocity must be non-negative");
}

void SatelliteState::validate() const {
  if (!(altitude_km > 0.0)) throw std::invalid_argument("satellite altitude must be positive");
  if (!(speed_km_s > 0.0)) throw std::invalid_argument("satellite speed must be positive");
  if (!(inclination_rad >= 0.0 && inclination_rad <= kPi))
    throw std::invalid_argument("inclination must lie in [0, pi]");
}

void UserKinematics::validate() const {
  if (kind == UserKind::terrestrial) {
    if (!(std::abs(latitude_rad) <= kPi / 2))
      throw std::invalid_argument("latitude must lie in [-pi/2, pi/2]");
  } else if (!(airborne_speed_km_s >= 0.0)) {
    throw std::invalid_argument("airborne speed must be non-negative");
  }
}

void PassGeometry::validate() const {
  if (!(max_elevation_rad > 0.0 && max_elevation_rad <= kPi / 2))
    throw std::invalid_argument("max elevation must lie in (0, pi/2]");
  if (!(relative_angular_velocity_rad_s > 0.0))
    throw std::invalid_argument("relative angular velocity must be positive");
}

double relative_speed_airborne(const SatelliteState& sat, const UserKinematics& user) {
  if (user.kind != UserKind::airborne)
    throw std::invalid_argument("relative_speed_airborne requires an airborne user");
  sat.validate();
  user.validate();
  const double vs = sat.speed_km_s;
  const double va = user.airborne_speed_km_s;
  const double sq = vs * vs + va * va - 2.0 * vs * va * std::cos(user.heading_angle_rad);
  // Collinear motion can leave a tiny negative residue.
  return std::sqrt(std::max(sq, 0.0));
}

double relative_speed_terrestrial(const EarthModel& earth, const SatelliteState& sat,
                                  const UserKinematics& user) {
  if (user.kind != UserKind::terrestrial)
    throw std::invalid_argument("relative_speed_terrestrial requires a terrestrial user");
  earth.validate();
  sat.validate();
  user.validate();
  const double vs = sat.speed_km_s;
  const double ve = earth.radius_km * earth.angular_velocity_rad_s * std::cos(user.latitude_rad);
  const double sq = vs * vs + ve * ve - 2.0 * vs * ve * std::cos(sat.inclination_rad);
  return std::sqrt(std::max(sq, 0.0));
}

double relative_speed(const EarthModel& earth, const SatelliteState& sat,
                      const UserKinematics& user) {
  return user.kind == UserKind::airborne ? relative_speed_airborne(sat, user)
                                         : relative_speed_terrestrial(earth, sat, user);
}

double relative_angular_velocity(const EarthModel& earth, const SatelliteState& sat,
                                 double rel_speed_km_s) {
  if (!(rel_speed_km_s > 0.0))
    throw PreconditionError("relative speed must be positive, got " +
                            std::to_string(rel_speed_km_s));
  earth.validate();
  sat.validate();
  return rel_speed_km_s / sat.orbit_radius_km(earth);
}

double culmination_offset_angle(const EarthModel& earth, const SatelliteState& sat,
                                const PassGeometry& pass) {
  const double hos = sat.orbit_radius_km(earth);
  return std::acos(earth.radius_km * std::cos(pass.max_elevation_rad) / hos) -
         pass.max_elevation_rad;
}

double slant_range(const EarthModel& earth, const SatelliteState& sat,
                   const PassGeometry& pass, double t_s) {
  const double r = earth.radius_km;
  const double hos = sat.orbit_radius_km(earth);
  const double cos_gamma0 = std::cos(culmination_offset_angle(earth, sat, pass));
  const double psi = pass.swept_angle(t_s);
  return std::sqrt(r * r + hos * hos - 2.0 * r * hos * std::cos(psi) * cos_gamma0);
}

double normalized_doppler(const EarthModel& earth, const SatelliteState& sat,
                          const PassGeometry& pass, double t_s) {
  earth.validate();
  sat.validate();
  pass.validate();
  const double r = earth.radius_km;
  const double hos = sat.orbit_radius_km(earth);
  const double cos_gamma0 = std::cos(culmination_offset_angle(earth, sat, pass));
  const double psi = pass.swept_angle(t_s);
  const double num =
      r * hos * std::sin(psi) * cos_gamma0 * pass.relative_angular_velocity_rad_s;
  const double den = std::sqrt(r * r + hos * hos - 2.0 * r * hos * std::cos(psi) * cos_gamma0);
  return -num / (kSpeedOfLightKmps * den);
}

double doppler_magnitude_bound(const EarthModel& earth, const SatelliteState& sat,
                               const PassGeometry& pass) {
  return pass.relative_angular_velocity_rad_s * sat.orbit_radius_km(earth) / kSpeedOfLightKmps;
}

std::vector<DopplerSample> doppler_series(const EarthModel& earth, const SatelliteState& sat,
                                          const PassGeometry& pass, double t_start,
                                          double t_end, double step) {
  if (!(t_start < t_end)) throw std::invalid_argument("doppler_series: empty time range");
  if (!(step > 0.0)) throw std::invalid_argument("doppler_series: step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((t_end - t_start) / step + 1e-9)) + 1;
  std::vector<DopplerSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Index-based timestamps avoid accumulating rounding in t.
    const double t = t_start + static_cast<double>(i) * step;
    out.push_back({t, pass.swept_angle(t), normalized_doppler(earth, sat, pass, t)});
  }
  return out;
}

}  // namespace sagin::kinematics

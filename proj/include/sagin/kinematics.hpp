#pragma once

#include <vector>

#include "sagin/constants.hpp"

/// Relative motion between a LEO satellite and its users, and the normalized
/// Doppler profile of a pass. Lengths in km, speeds in km/s, angles in rad.
namespace sagin::kinematics {

struct EarthModel {
  double radius_km = kEarthRadiusKm;
  double angular_velocity_rad_s = kEarthRotationRadPerS;

  void validate() const;
};

struct SatelliteState {
  double altitude_km = 300.0;
  double speed_km_s = 7.8;
  double inclination_rad = 0.0;

  double orbit_radius_km(const EarthModel& earth) const noexcept {
    return earth.radius_km + altitude_km;
  }
  void validate() const;
};

enum class UserKind { terrestrial, airborne };

/// Only the fields of the active kind are read.
struct UserKinematics {
  UserKind kind = UserKind::terrestrial;
  double latitude_rad = 0.0;          // terrestrial
  double airborne_speed_km_s = 0.0;   // airborne
  double heading_angle_rad = 0.0;     // airborne, angle between v_A and v_S

  static UserKinematics terrestrial(double latitude_rad) {
    return {UserKind::terrestrial, latitude_rad, 0.0, 0.0};
  }
  static UserKinematics airborne(double speed_km_s, double heading_rad) {
    return {UserKind::airborne, 0.0, speed_km_s, heading_rad};
  }
  void validate() const;
};

/// A pass is described by its culmination: the maximum elevation reached at
/// the epoch t0, and the (constant) relative angular velocity.
struct PassGeometry {
  double max_elevation_rad = kPi / 2;
  double epoch_s = 0.0;
  double relative_angular_velocity_rad_s = 1.0e-3;

  /// Central angle swept since the epoch.
  double swept_angle(double t_s) const noexcept {
    return relative_angular_velocity_rad_s * (t_s - epoch_s);
  }
  void validate() const;
};

double relative_speed_airborne(const SatelliteState& sat, const UserKinematics& user);

double relative_speed_terrestrial(const EarthModel& earth, const SatelliteState& sat,
                                  const UserKinematics& user);

/// Dispatches on user.kind.
double relative_speed(const EarthModel& earth, const SatelliteState& sat,
                      const UserKinematics& user);

double relative_angular_velocity(const EarthModel& earth, const SatelliteState& sat,
                                 double rel_speed_km_s);

/// Earth-centred angle between the satellite at the epoch and the user's
/// zenith, from cos(theta_max + gamma) = R cos(theta_max) / H_os.
double culmination_offset_angle(const EarthModel& earth, const SatelliteState& sat,
                                const PassGeometry& pass);

/// User-to-satellite distance at time t (km).
double slant_range(const EarthModel& earth, const SatelliteState& sat,
                   const PassGeometry& pass, double t_s);

/// Delta f / f_c at time t. Negative while the satellite recedes.
double normalized_doppler(const EarthModel& earth, const SatelliteState& sat,
                          const PassGeometry& pass, double t_s);

/// Upper bound on |Delta f / f_c| over the whole pass.
double doppler_magnitude_bound(const EarthModel& earth, const SatelliteState& sat,
                               const PassGeometry& pass);

struct DopplerSample {
  double t_s;
  double swept_angle_rad;
  double ratio;
};

/// Samples t_start, t_start + step, ... while t <= t_end (plus a small
/// tolerance so that an end point on the grid is included).
std::vector<DopplerSample> doppler_series(const EarthModel& earth, const SatelliteState& sat,
                                          const PassGeometry& pass, double t_start,
                                          double t_end, double step);

}  // namespace sagin::kinematics

#include <array>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sagin/kinematics.hpp"

using namespace sagin;
using namespace sagin::kinematics;

namespace {

const EarthModel kEarth{6371.393, 7.2921159e-5};

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// |v_S - v_U| from explicit 3-D vectors at the user's position on a
// spherical Earth. East and north unit vectors at latitude phi, longitude 0.
double relative_speed_by_vectors(double speed, double inclination, double latitude) {
  const std::array<double, 3> east{0.0, 1.0, 0.0};
  const std::array<double, 3> north{-std::sin(latitude), 0.0, std::cos(latitude)};
  const double ground = kEarth.radius_km * kEarth.angular_velocity_rad_s * std::cos(latitude);
  std::array<double, 3> d{};
  for (int i = 0; i < 3; ++i)
    d[i] = speed * (std::cos(inclination) * east[i] + std::sin(inclination) * north[i]) -
           ground * east[i];
  return norm3(d);
}

}  // namespace

TEST_CASE("airborne relative speed") {
  SatelliteState sat{300.0, 7.8, 0.0};
  CHECK(relative_speed_airborne(sat, UserKinematics::airborne(0.0, 0.0)) == doctest::Approx(7.8).epsilon(1e-15));
  CHECK(relative_speed_airborne(sat, UserKinematics::airborne(0.25, 0.0)) == doctest::Approx(7.55).epsilon(1e-14));
  // 2-D vector subtraction with perpendicular velocities.
  const double perpendicular = std::hypot(7.8, 0.25);
  CHECK(relative_speed_airborne(sat, UserKinematics::airborne(0.25, kPi / 2)) ==
        doctest::Approx(perpendicular).epsilon(1e-14));
  CHECK(perpendicular == doctest::Approx(7.804).epsilon(1e-4));
  // Triangle inequality, equality at collinear headings.
  for (double heading = 0.0; heading <= kPi; heading += 0.1) {
    const double v = relative_speed_airborne(sat, UserKinematics::airborne(0.25, heading));
    CHECK(v >= 7.55 - 1e-12);
    CHECK(v <= 8.05 + 1e-12);
  }
  CHECK(relative_speed_airborne(sat, UserKinematics::airborne(0.25, kPi)) == doctest::Approx(8.05).epsilon(1e-14));
  CHECK_THROWS_AS(relative_speed_airborne(sat, UserKinematics::terrestrial(0.0)), std::invalid_argument);
}

TEST_CASE("terrestrial relative speed") {
  SatelliteState sat{300.0, 7.8, 0.0};
  CHECK(relative_speed_terrestrial(kEarth, sat, UserKinematics::terrestrial(kPi / 2)) ==
        doctest::Approx(7.8).epsilon(1e-15));
  const EarthModel still{6371.393, 0.0};
  for (double lat : {-1.0, 0.0, 0.7}) {
    SatelliteState s2{300.0, 7.8, 0.9};
    CHECK(relative_speed_terrestrial(still, s2, UserKinematics::terrestrial(lat)) == 7.8);
  }
  for (double inc : {0.0, 0.5, 1.7}) {
    for (double lat : {0.0, 0.4, -1.1}) {
      SatelliteState s2{300.0, 7.8, inc};
      CHECK(relative_speed_terrestrial(kEarth, s2, UserKinematics::terrestrial(lat)) ==
            doctest::Approx(relative_speed_by_vectors(7.8, inc, lat)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(relative_speed_terrestrial(kEarth, sat, UserKinematics::airborne(0.2, 0.0)),
                  std::invalid_argument);
  CHECK(relative_speed(kEarth, sat, UserKinematics::airborne(0.25, 0.0)) == doctest::Approx(7.55));
}

TEST_CASE("relative angular velocity") {
  SatelliteState sat{300.0, 7.8, 0.0};
  CHECK(relative_angular_velocity(kEarth, sat, 7.8) == doctest::Approx(7.8 / 6671.393).epsilon(1e-15));
  CHECK(relative_angular_velocity(kEarth, sat, 7.8) == doctest::Approx(1.1692e-3).epsilon(1e-4));
  CHECK(relative_angular_velocity(kEarth, sat, 15.6) == 2.0 * relative_angular_velocity(kEarth, sat, 7.8));
  CHECK_THROWS(relative_angular_velocity(kEarth, sat, 0.0));
}

TEST_CASE("normalized Doppler") {
  SatelliteState sat{300.0, 7.8, 0.0};
  const PassGeometry pass{kPi / 2, 100.0, 1.1692e-3};
  SUBCASE("zero at closest approach") { CHECK(normalized_doppler(kEarth, sat, pass, 100.0) == 0.0); }
  SUBCASE("odd about the epoch") {
    for (double d : {0.5, 7.0, 60.0, 299.0}) {
      CHECK(normalized_doppler(kEarth, sat, pass, 100.0 + d) ==
            -normalized_doppler(kEarth, sat, pass, 100.0 - d));
    }
  }
  SUBCASE("matches finite differences of the slant range") {
    const PassGeometry p0{kPi / 2, 0.0, 1.1692e-3};
    for (double t : {60.0, -60.0, 250.0, 3.0}) {
      const double h = 1e-3;
      const double ds = slant_range(kEarth, sat, p0, t + h) - slant_range(kEarth, sat, p0, t - h);
      const double fd = -(ds / (2 * h)) / kSpeedOfLightKmps;
      CHECK(normalized_doppler(kEarth, sat, p0, t) == doctest::Approx(fd).epsilon(1e-6));
    }
    // Receding satellite gives a negative shift.
    CHECK(normalized_doppler(kEarth, sat, p0, 60.0) < 0.0);
  }
  SUBCASE("bounded by omega H_os / c") {
    for (double elev : {0.2, 0.9, kPi / 2}) {
      const PassGeometry p{elev, 0.0, 1.1692e-3};
      const double bound = 1.1692e-3 * 6671.393 / kSpeedOfLightKmps;
      CHECK(doppler_magnitude_bound(kEarth, sat, p) <= bound * (1 + 1e-15));
      for (double t = -2000.0; t <= 2000.0; t += 37.0)
        CHECK(std::abs(normalized_doppler(kEarth, sat, p, t)) < bound);
    }
  }
  SUBCASE("slant range at the epoch matches the culmination geometry") {
    const PassGeometry p{deg_to_rad(60.0), 0.0, 1.1692e-3};
    // Law of sines triangle: distance at elevation 60 deg for a 300 km orbit.
    const double r = 6371.393;
    const double ro = r + 300.0;
    const double c = std::cos(deg_to_rad(60.0));
    const double expected = std::sqrt(ro * ro - r * r * c * c) - r * std::sin(deg_to_rad(60.0));
    CHECK(slant_range(kEarth, sat, p, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    const double gamma = culmination_offset_angle(kEarth, sat, p);
    CHECK(std::cos(deg_to_rad(60.0) + gamma) == doctest::Approx(r * c / ro).epsilon(1e-13));
  }
}

TEST_CASE("Doppler series") {
  SatelliteState sat{300.0, 7.8, 0.0};
  const PassGeometry pass{kPi / 2, 0.0, 1.1692e-3};
  const auto three = doppler_series(kEarth, sat, pass, -1.0, 1.0, 1.0);
  REQUIRE(three.size() == 3);
  CHECK(three[1].ratio == 0.0);
  const auto series = doppler_series(kEarth, sat, pass, -300.0, 300.0, 1.0);
  REQUIRE(series.size() == 601);
  double peak = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0) CHECK(series[i].t_s > series[i - 1].t_s);
    CHECK(series[i].ratio == normalized_doppler(kEarth, sat, pass, series[i].t_s));
    peak = std::max(peak, std::abs(series[i].ratio));
  }
  // Dense scalar grid search for the peak over the same window.
  double dense = 0.0;
  for (double t = -300.0; t <= 300.0; t += 0.05)
    dense = std::max(dense, std::abs(normalized_doppler(kEarth, sat, pass, t)));
  CHECK(peak == doctest::Approx(dense).epsilon(1e-6));
  CHECK_THROWS_AS(doppler_series(kEarth, sat, pass, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(doppler_series(kEarth, sat, pass, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("type invariants") {
  CHECK_THROWS(EarthModel{-1.0, 0.0}.validate());
  CHECK_THROWS(SatelliteState{-1.0, 7.8, 0.0}.validate());
  CHECK_THROWS(SatelliteState{300.0, 0.0, 0.0}.validate());
  CHECK_THROWS(SatelliteState{300.0, 7.8, 4.0}.validate());
  CHECK_THROWS(UserKinematics::terrestrial(2.0).validate());
  CHECK_THROWS(PassGeometry{0.0, 0.0, 1e-3}.validate());
  CHECK_THROWS(PassGeometry{1.0, 0.0, 0.0}.validate());
  CHECK_NOTHROW(PassGeometry{kPi / 2, 0.0, 1e-3}.validate());
}

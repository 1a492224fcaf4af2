#pragma once

#include <vector>

#include "sagin/constants.hpp"

/// Ray geometry through an exponentially stratified atmosphere.
///
/// The refractive index is n(h) = 1 + rho0 * exp(-k h) with rho0 = N0 * 1e-6
/// and k = 1 / h0. A ray leaves the user at the detected elevation theta0 and
/// is traced up to the orbit altitude H. All lengths are in km.
///
/// The path integrals are evaluated on the Chebyshev nodes
///   kappa_i = H (cos((2i - 1) pi / 2M) + 1) / 2,  i = 1..M.
/// Two weightings of those nodes are available:
///   - QuadratureRule::fejer (default): interpolatory weights, spectrally
///     accurate for the smooth path integrands;
///   - QuadratureRule::chebyshev_gauss: weights pi/M applied to the integrand
///     times sqrt(1 - x_i^2). This is the textbook Gauss-Chebyshev sum; its
///     error decays only as O(M^-2) for these integrands.
namespace sagin::refraction {

enum class QuadratureRule { fejer, chebyshev_gauss };

struct QuadratureNode {
  double node;
  double weight;
};

/// Gauss-Chebyshev (first kind) rule on [-1, 1]:
/// integral f(x)/sqrt(1-x^2) dx ~= sum weight_i f(node_i), nodes decreasing.
std::vector<QuadratureNode> chebyshev_gauss_nodes(int order);

/// Fejer's first rule on the same nodes: integral f(x) dx ~= sum w_i f(x_i).
std::vector<QuadratureNode> fejer_nodes(int order);

class RefractionProfile {
 public:
  RefractionProfile() = default;

  /// ITU-R style profile from surface refractivity (N-units) and scale height.
  static RefractionProfile exponential(double surface_refractivity, double scale_height_km,
                                       int quadrature_order = 64);

  /// The generalized n(h) = 1 + rho0 exp(-k h) form.
  static RefractionProfile general(double rho0, double decay_rate_per_km,
                                   int quadrature_order = 64);

  double surface_refractivity() const noexcept { return surface_refractivity_; }
  double scale_height_km() const noexcept { return scale_height_km_; }
  double rho0() const noexcept { return surface_refractivity_ * 1e-6; }
  double decay_rate_per_km() const noexcept { return 1.0 / scale_height_km_; }
  double surface_index() const noexcept { return 1.0 + rho0(); }
  int quadrature_order() const noexcept { return quadrature_order_; }
  QuadratureRule rule() const noexcept { return rule_; }

  RefractionProfile with_order(int order) const;
  RefractionProfile with_rule(QuadratureRule rule) const;

  void validate() const;

 private:
  double surface_refractivity_ = 315.0;
  double scale_height_km_ = 7.5;
  int quadrature_order_ = 64;
  QuadratureRule rule_ = QuadratureRule::fejer;
};

struct GeometryScenario {
  double earth_radius_km = kEarthRadiusKm;
  double altitude_km = 300.0;
  double detected_elevation_rad = kPi / 3;

  void validate() const;
};

struct RayPathResult {
  double bending_length_km;
  double ground_range_km;
  double straight_length_km;
  double excess_km;
  double true_elevation_rad;
  double detected_elevation_rad;

  double central_angle_rad(double earth_radius_km) const noexcept {
    return ground_range_km / earth_radius_km;
  }
};

enum class BendingModel { simple, accurate };

/// Minimum detected elevation for the accurate (mu/upsilon/omega) model.
inline constexpr double kAccurateModelMinElevationRad = 1.5 * kPi / 180.0;

double refractive_index(const RefractionProfile& profile, double altitude_km);

/// Snell-law form: integrand n / sqrt(1 - (n0 cos theta0 / (n (1 + h/R)))^2).
double bending_length_simple(const RefractionProfile& profile, const GeometryScenario& geom);

/// Expanded form with mu, upsilon(h), omega(h). Requires theta0 >= 1.5 deg.
double bending_length_accurate(const RefractionProfile& profile, const GeometryScenario& geom);

double bending_length(const RefractionProfile& profile, const GeometryScenario& geom,
                      BendingModel model);

/// Arc length along the surface between the user and the sub-satellite point.
double ground_range(const RefractionProfile& profile, const GeometryScenario& geom);

/// Chord from user to satellite given the ground range.
double straight_distance(const GeometryScenario& geom, double ground_range_km);

double refraction_excess(double bending_length_km, double straight_length_km);

/// Geometric elevation of the satellite. The formula is selected by the
/// detected elevation: theta0 <= pi/4 uses the law-of-cosines branch,
/// theta0 > pi/4 the law-of-sines branch.
double true_elevation(const GeometryScenario& geom, double ground_range_km,
                      double straight_length_km);

/// Both true-elevation branches, exposed for consistency checks.
double true_elevation_cosine_branch(const GeometryScenario& geom, double ground_range_km,
                                    double straight_length_km);
double true_elevation_sine_branch(const GeometryScenario& geom, double ground_range_km,
                                  double straight_length_km);

/// Flat-Earth benchmark H / sin(theta0).
double flat_earth_slant(const GeometryScenario& geom);

/// Runs the whole chain with the given bending model.
RayPathResult trace(const RefractionProfile& profile, const GeometryScenario& geom,
                    BendingModel model = BendingModel::accurate);

// Integrands in h (km), exposed so that independent quadrature can check the sums.
double simple_integrand(const RefractionProfile& profile, const GeometryScenario& geom,
                        double h_km);
double accurate_integrand(const RefractionProfile& profile, const GeometryScenario& geom,
                          double h_km);
double ground_range_integrand(const RefractionProfile& profile, const GeometryScenario& geom,
                              double h_km);

}  // namespace sagin::refraction

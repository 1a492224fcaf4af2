#include "sagin/refraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sagin/error.hpp"

namespace sagin::refraction {

namespace {

// Arguments this close to +-1 are rounding noise from exact geometric identities.
constexpr double kArcsinSlack = 1e-12;

double checked_asin(double arg, const char* what) {
  if (std::abs(arg) > 1.0 + kArcsinSlack) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": arcsin argument " << arg << " outside [-1, 1]";
    throw NumericalDomainError(os.str());
  }
  return std::asin(std::clamp(arg, -1.0, 1.0));
}

[[noreturn]] void radicand_error(const char* what, int node, double h_km, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": non-positive radicand " << value << " at quadrature node " << node
     << " (h = " << h_km << " km)";
  throw NumericalDomainError(os.str());
}

void require_elevation(const GeometryScenario& geom) {
  geom.validate();
}

void require_accurate_domain(const GeometryScenario& geom) {
  require_elevation(geom);
  if (geom.detected_elevation_rad < kAccurateModelMinElevationRad) {
    std::ostringstream os;
    os << "detected elevation " << rad_to_deg(geom.detected_elevation_rad)
       << " deg is below 1.5 deg; the expanded ray model yields negative values there";
    throw PreconditionError(os.str());
  }
}

// Radicands of the two integrand forms.
double simple_radicand(const RefractionProfile& p, const GeometryScenario& g, double h) {
  const double ratio = p.surface_index() * std::cos(g.detected_elevation_rad) /
                       (refractive_index(p, h) * (1.0 + h / g.earth_radius_km));
  return 1.0 - ratio * ratio;
}

double expanded_radicand(const RefractionProfile& p, const GeometryScenario& g, double h) {
  const double rho = p.rho0();
  const double k = p.decay_rate_per_km();
  const double s = std::sin(g.detected_elevation_rad);
  const double mu = (1.0 + rho) * (1.0 + rho) * s * s - 2.0 * rho - rho * rho;
  const double e = std::exp(-k * h);
  const double upsilon = 2.0 * rho * e + rho * rho * e * e;
  const double hr = h / g.earth_radius_km;
  const double omega = 2.0 * hr + hr * hr;
  return mu + upsilon + omega + upsilon * omega;
}

// Integrates f over [0, H] on the profile's Chebyshev nodes. f receives the
// node index (1-based) and the altitude.
template <typename F>
double integrate_path(const RefractionProfile& profile, double altitude_km, F&& f) {
  const int order = profile.quadrature_order();
  const double half = altitude_km / 2.0;
  double sum = 0.0;
  if (profile.rule() == QuadratureRule::chebyshev_gauss) {
    const auto nodes = chebyshev_gauss_nodes(order);
    for (int i = 0; i < order; ++i) {
      const double x = nodes[i].node;
      const double kappa = half * (x + 1.0);
      sum += nodes[i].weight * half * std::sqrt(1.0 - x * x) * f(i + 1, kappa);
    }
  } else {
    const auto nodes = fejer_nodes(order);
    for (int i = 0; i < order; ++i) {
      const double kappa = half * (nodes[i].node + 1.0);
      sum += nodes[i].weight * half * f(i + 1, kappa);
    }
  }
  return sum;
}

}  // namespace

std::vector<QuadratureNode> chebyshev_gauss_nodes(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  std::vector<QuadratureNode> out;
  out.reserve(static_cast<std::size_t>(order));
  const double w = kPi / order;
  for (int i = 1; i <= order; ++i) {
    out.push_back({std::cos((2.0 * i - 1.0) * kPi / (2.0 * order)), w});
  }
  return out;
}

std::vector<QuadratureNode> fejer_nodes(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  std::vector<QuadratureNode> out;
  out.reserve(static_cast<std::size_t>(order));
  for (int i = 1; i <= order; ++i) {
    const double theta = (2.0 * i - 1.0) * kPi / (2.0 * order);
    double acc = 1.0;
    for (int j = 1; j <= order / 2; ++j) {
      acc -= 2.0 * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
    }
    out.push_back({std::cos(theta), 2.0 * acc / order});
  }
  return out;
}

RefractionProfile RefractionProfile::exponential(double surface_refractivity,
                                                 double scale_height_km, int quadrature_order) {
  RefractionProfile p;
  p.surface_refractivity_ = surface_refractivity;
  p.scale_height_km_ = scale_height_km;
  p.quadrature_order_ = quadrature_order;
  p.validate();
  return p;
}

RefractionProfile RefractionProfile::general(double rho0, double decay_rate_per_km,
                                             int quadrature_order) {
  if (!(decay_rate_per_km > 0.0)) throw std::invalid_argument("decay rate must be positive");
  return exponential(rho0 * 1e6, 1.0 / decay_rate_per_km, quadrature_order);
}

RefractionProfile RefractionProfile::with_order(int order) const {
  RefractionProfile p = *this;
  p.quadrature_order_ = order;
  p.validate();
  return p;
}

RefractionProfile RefractionProfile::with_rule(QuadratureRule rule) const {
  RefractionProfile p = *this;
  p.rule_ = rule;
  return p;
}

void RefractionProfile::validate() const {
  if (!(surface_refractivity_ >= 0.0))
    throw std::invalid_argument("surface refractivity must be non-negative");
  if (!(scale_height_km_ > 0.0)) throw std::invalid_argument("scale height must be positive");
  if (quadrature_order_ < 8) throw std::invalid_argument("quadrature order must be >= 8");
}

void GeometryScenario::validate() const {
  if (!(earth_radius_km > 0.0)) throw std::invalid_argument("earth radius must be positive");
  if (!(altitude_km > 0.0)) throw std::invalid_argument("altitude must be positive");
  if (!(detected_elevation_rad > 0.0 && detected_elevation_rad <= kPi / 2))
    throw PreconditionError("detected elevation must lie in (0, pi/2]");
}

double refractive_index(const RefractionProfile& profile, double altitude_km) {
  if (!(altitude_km >= 0.0))
    throw std::invalid_argument("altitude must be non-negative, got " +
                                std::to_string(altitude_km));
  return 1.0 + profile.rho0() * std::exp(-altitude_km / profile.scale_height_km());
}

double simple_integrand(const RefractionProfile& profile, const GeometryScenario& geom,
                        double h_km) {
  return refractive_index(profile, h_km) / std::sqrt(simple_radicand(profile, geom, h_km));
}

double accurate_integrand(const RefractionProfile& profile, const GeometryScenario& geom,
                          double h_km) {
  const double n = refractive_index(profile, h_km);
  return n * n * (1.0 + h_km / geom.earth_radius_km) /
         std::sqrt(expanded_radicand(profile, geom, h_km));
}

double ground_range_integrand(const RefractionProfile& profile, const GeometryScenario& geom,
                              double h_km) {
  return profile.surface_index() * std::cos(geom.detected_elevation_rad) /
         ((1.0 + h_km / geom.earth_radius_km) *
          std::sqrt(expanded_radicand(profile, geom, h_km)));
}

double bending_length_simple(const RefractionProfile& profile, const GeometryScenario& geom) {
  profile.validate();
  require_elevation(geom);
  return integrate_path(profile, geom.altitude_km, [&](int node, double h) {
    const double rad = simple_radicand(profile, geom, h);
    if (!(rad > 0.0)) radicand_error("bending_length_simple", node, h, rad);
    return refractive_index(profile, h) / std::sqrt(rad);
  });
}

double bending_length_accurate(const RefractionProfile& profile, const GeometryScenario& geom) {
  profile.validate();
  require_accurate_domain(geom);
  return integrate_path(profile, geom.altitude_km, [&](int node, double h) {
    const double rad = expanded_radicand(profile, geom, h);
    if (!(rad > 0.0)) radicand_error("bending_length_accurate", node, h, rad);
    const double n = refractive_index(profile, h);
    return n * n * (1.0 + h / geom.earth_radius_km) / std::sqrt(rad);
  });
}

double bending_length(const RefractionProfile& profile, const GeometryScenario& geom,
                      BendingModel model) {
  return model == BendingModel::simple ? bending_length_simple(profile, geom)
                                       : bending_length_accurate(profile, geom);
}

double ground_range(const RefractionProfile& profile, const GeometryScenario& geom) {
  profile.validate();
  require_accurate_domain(geom);
  const double numerator = profile.surface_index() * std::cos(geom.detected_elevation_rad);
  return integrate_path(profile, geom.altitude_km, [&](int node, double h) {
    const double rad = expanded_radicand(profile, geom, h);
    if (!(rad > 0.0)) radicand_error("ground_range", node, h, rad);
    return numerator / ((1.0 + h / geom.earth_radius_km) * std::sqrt(rad));
  });
}

double straight_distance(const GeometryScenario& geom, double ground_range_km) {
  if (!(ground_range_km >= 0.0)) throw std::invalid_argument("ground range must be >= 0");
  const double r = geom.earth_radius_km;
  const double h = geom.altitude_km;
  const double s = std::sin(ground_range_km / (2.0 * r));
  return std::sqrt(h * h + 4.0 * r * (r + h) * s * s);
}

double refraction_excess(double bending_length_km, double straight_length_km) {
  if (!(bending_length_km > 0.0 && straight_length_km > 0.0))
    throw std::invalid_argument("path lengths must be positive");
  return bending_length_km - straight_length_km;
}

double true_elevation_cosine_branch(const GeometryScenario& geom, double /*ground_range_km*/,
                                    double straight_length_km) {
  const double r = geom.earth_radius_km;
  const double h = geom.altitude_km;
  const double d = straight_length_km;
  return checked_asin(h / d + h * h / (2.0 * r * d) - d / (2.0 * r), "true_elevation");
}

double true_elevation_sine_branch(const GeometryScenario& geom, double ground_range_km,
                                  double straight_length_km) {
  const double r = geom.earth_radius_km;
  const double h = geom.altitude_km;
  return kPi / 2 -
         checked_asin((r + h) * std::sin(ground_range_km / r) / straight_length_km,
                      "true_elevation");
}

double true_elevation(const GeometryScenario& geom, double ground_range_km,
                      double straight_length_km) {
  if (!(straight_length_km > 0.0)) throw std::invalid_argument("straight length must be > 0");
  return geom.detected_elevation_rad <= kPi / 4
             ? true_elevation_cosine_branch(geom, ground_range_km, straight_length_km)
             : true_elevation_sine_branch(geom, ground_range_km, straight_length_km);
}

double flat_earth_slant(const GeometryScenario& geom) {
  require_elevation(geom);
  return geom.altitude_km / std::sin(geom.detected_elevation_rad);
}

RayPathResult trace(const RefractionProfile& profile, const GeometryScenario& geom,
                    BendingModel model) {
  const double d_rf = bending_length(profile, geom, model);
  const double g = ground_range(profile, geom);
  const double d_st = straight_distance(geom, g);
  return {d_rf,
          g,
          d_st,
          refraction_excess(d_rf, d_st),
          true_elevation(geom, g, d_st),
          geom.detected_elevation_rad};
}

}  // namespace sagin::refraction

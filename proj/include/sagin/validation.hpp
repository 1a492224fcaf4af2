#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sagin/attenuation.hpp"
#include "sagin/montecarlo.hpp"
#include "sagin/scenario.hpp"

/// Oracle suite comparing every closed form against an independent
/// computation: Monte-Carlo, adaptive quadrature, finite differences or
/// plain geometry.
namespace sagin::validation {

/// One report row. For comparisons `got` must lie within `tolerance` of
/// `expected`; for counted properties `got` is the number of violations.
struct CheckResult {
  std::string name;
  double expected;
  double got;
  double tolerance;
  bool passed;
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const noexcept;
  std::size_t failures() const noexcept;
  /// CSV with header `check,expected,got,tolerance,status`.
  void write_csv(std::ostream& out) const;
};

struct ValidationOptions {
  montecarlo::McConfig mc;
  /// Coefficient table under test; null skips the table sanity check.
  const attenuation::CoefficientTable* table = nullptr;
};

Report run(const scenario::Scenario& s, const ValidationOptions& opts);

// Oracles, also used by the tests.

/// (1/ln 2) * integral_0^inf (1 - F(x / lambda_t)) / (1 + x) dx by
/// double-exponential quadrature of the outage CDF.
double ergodic_rate_by_integration(const fading::ShadowedRicianParams& params, double lambda_t);

/// Adaptive Gauss-Kronrod integral of `integrand` over [0, H].
double bending_length_by_integration(const refraction::RefractionProfile& profile,
                                     const refraction::GeometryScenario& geom,
                                     refraction::BendingModel model);
double ground_range_by_integration(const refraction::RefractionProfile& profile,
                                   const refraction::GeometryScenario& geom);

/// Chord length for a straight ray (no atmosphere).
double straight_ray_length(const refraction::GeometryScenario& geom);
/// Ground range of a straight ray.
double straight_ray_ground_range(const refraction::GeometryScenario& geom);

/// -(ds/dt)/c by central differences of the slant range.
double doppler_by_finite_difference(const kinematics::EarthModel& earth,
                                    const kinematics::SatelliteState& sat,
                                    const kinematics::PassGeometry& pass, double t_s,
                                    double step_s = 1e-3);

/// sum_k C(m-1,k) varsigma(k); equals one.
double identity_i1(const fading::ShadowedRicianParams& params);
/// sum_k C(m-1,k) r^k (k+1) and its binomial collapse, r = Omega/(2 m b0).
double identity_i2_sum(const fading::ShadowedRicianParams& params);
double identity_i2_closed(const fading::ShadowedRicianParams& params);

/// x with F(x) = q, by bisection on the CDF.
double power_quantile(const fading::ShadowedRicianParams& params, double q);

/// Number of rows with non-finite, non-positive K_R or K_L, or alpha_R
/// outside (0, 2].
std::size_t count_bad_coefficient_rows(const attenuation::CoefficientTable& table);

}  // namespace sagin::validation

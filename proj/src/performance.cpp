#include "sagin/performance.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sagin/error.hpp"
#include "sagin/specfun.hpp"

namespace sagin::performance {

bool is_square_qam(int order) noexcept {
  if (order < 4) return false;
  // Powers of four: a single set bit at an even position.
  return (order & (order - 1)) == 0 && (order & 0x55555555) != 0;
}

void PerformanceInputs::validate() const {
  if (!(lambda_t > 0.0)) throw std::invalid_argument("lambda_t must be positive");
  if (!is_square_qam(qam_order))
    throw std::invalid_argument("QAM order must be a square constellation size >= 4");
  if (!(outage_threshold > 0.0)) throw std::invalid_argument("outage threshold must be > 0");
}

double mean_snr(const PerformanceInputs& in) { return in.lambda_t * in.fading.mean_power(); }

BerBound ber_upper_bound(const PerformanceInputs& in) {
  if (in.qam_order < 4)
    throw std::invalid_argument("BER bound requires M >= 4, got " + std::to_string(in.qam_order));
  if (!(in.lambda_t >= 0.0)) throw std::invalid_argument("lambda_t must be non-negative");
  const double snr = mean_snr(in);
  const double value = 0.2 * std::exp(-3.0 * snr / (2.0 * (in.qam_order - 1)));
  return {value, snr >= 0.0 && snr <= kBerBoundMaxMeanSnr};
}

double outage_probability(const PerformanceInputs& in) {
  in.validate();
  return fading::cdf_power(in.fading, in.outage_threshold / in.lambda_t);
}

ErgodicRateParts ergodic_rate_parts(const PerformanceInputs& in) {
  if (!(in.lambda_t > 0.0)) throw std::invalid_argument("lambda_t must be positive");
  const auto& f = in.fading;
  const int m = f.nakagami_m();
  // Outage CDF in lambda_t |h|^2 is a Gamma mixture with scale lambda_t * s.
  const double u = 1.0 / (in.lambda_t * f.component_scale());
  double ei_part = 0.0;
  double tricomi_part = 0.0;
  try {
    // I3 = -e^u Ei(-u) = e^u E1(u) = U(1, 1; u), taken in the scaled form
    // that stays finite for large u.
    const double i3 = specfun::tricomi_u_equal(1, u);
    // The p-th term integrates (u x)^p e^{-u x} / (p! (1 + x)) to
    // u^p U(p+1, p+1; u); only it depends on p, so accumulate it once.
    double higher = 0.0;
    for (int k = 0; k < m; ++k) {
      if (k > 0) higher += std::pow(u, k) * specfun::tricomi_u_equal(k + 1, u);
      const double w = f.mixture_weight(k);
      ei_part += w * i3;
      tricomi_part += w * higher;
    }
  } catch (const NumericalDomainError& e) {
    std::ostringstream os;
    os << "ergodic_rate(lambda_t=" << in.lambda_t << ", m=" << m << "): " << e.what();
    throw NumericalDomainError(os.str());
  }
  return {ei_part / std::numbers::ln2, tricomi_part / std::numbers::ln2};
}

double ergodic_rate(const PerformanceInputs& in) { return ergodic_rate_parts(in).total(); }

double goodput_lower_bound(const PerformanceInputs& in) {
  return (1.0 - ber_upper_bound(in).value) * ergodic_rate(in);
}

}  // namespace sagin::performance

#pragma once

#include "sagin/fading.hpp"

/// Long-term link metrics over Shadowed-Rician fading with mean-SNR scale
/// lambda_t: the instantaneous SNR is lambda_t |h|^2.
namespace sagin::performance {

struct PerformanceInputs {
  double lambda_t;
  fading::ShadowedRicianParams fading;
  int qam_order = 4;
  double outage_threshold = 0.1;

  void validate() const;
};

/// True for square QAM sizes 4, 16, 64, ...
bool is_square_qam(int order) noexcept;

/// Largest mean SNR (linear) for which the tight BER bound is stated.
inline constexpr double kBerBoundMaxMeanSnr = 1e3;

struct BerBound {
  double value;
  /// M >= 4 and 0 <= E[SNR] <= 30 dB.
  bool within_validity;
};

/// E[SNR] = lambda_t (2 b0 + Omega); equals lambda_t under normalization.
double mean_snr(const PerformanceInputs& in);

/// (1/5) exp(-3 E[SNR] / (2 (M - 1))).
BerBound ber_upper_bound(const PerformanceInputs& in);

/// P(lambda_t |h|^2 < gamma_th).
double outage_probability(const PerformanceInputs& in);

/// E[log2(1 + lambda_t |h|^2)] in closed form.
double ergodic_rate(const PerformanceInputs& in);

/// Ergodic rate split into the exponential-integral (p = 0) part and the
/// Tricomi (p >= 1) part; the two add up to ergodic_rate().
struct ErgodicRateParts {
  double exponential_integral_part;
  double tricomi_part;
  double total() const noexcept { return exponential_integral_part + tricomi_part; }
};
ErgodicRateParts ergodic_rate_parts(const PerformanceInputs& in);

/// (1 - BER bound) * ergodic rate.
double goodput_lower_bound(const PerformanceInputs& in);

}  // namespace sagin::performance

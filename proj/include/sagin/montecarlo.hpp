#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sagin/fading.hpp"

/// Monte-Carlo estimators used as independent oracles for the closed forms.
///
/// Trials are split over `stream_count` streams; stream i draws from
/// fading::make_stream(master_seed, i) and the per-stream moments are merged
/// in index order, so results depend only on (master_seed, stream_count,
/// trials) and not on thread scheduling.
namespace sagin::montecarlo {

struct McConfig {
  std::int64_t trials = 1'000'000;
  std::uint64_t master_seed = 0x5A61;
  int stream_count = 8;
  double confidence_sigma = 3.0;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;

  /// |mean - expected| <= sigma * std_error. A zero-variance estimate must
  /// match exactly (up to one ulp-scale slack).
  bool consistent_with(double expected, double sigma) const;
};

/// Running count/mean/M2 with pairwise (Chan) merging.
struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const Moments& other) noexcept;
  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// Runs `body(rng, count)` on every stream in parallel and merges the
/// returned moments in stream order.
Moments run_streams(const McConfig& cfg,
                    const std::function<Moments(std::mt19937_64&, std::int64_t)>& body);

/// Fraction of draws with lambda_t |h|^2 < gamma_th; std error sqrt(p(1-p)/n).
McEstimate estimate_outage(const fading::ShadowedRicianParams& params, double lambda_t,
                           double gamma_th, const McConfig& cfg);

/// Sample mean of log2(1 + lambda_t |h|^2).
McEstimate estimate_ergodic_rate(const fading::ShadowedRicianParams& params, double lambda_t,
                                 const McConfig& cfg);

/// Sample mean of |h|^2.
McEstimate estimate_mean_power(const fading::ShadowedRicianParams& params,
                               const McConfig& cfg);

/// Empirical CDF of |h|^2 at each threshold in `xs`, from one shared set of
/// draws; std errors are sqrt(F(1-F)/n).
std::vector<McEstimate> estimate_power_cdf(const fading::ShadowedRicianParams& params,
                                           const std::vector<double>& xs, const McConfig& cfg);

/// Bit error rate of Gray-mapped square M-QAM with coherent detection.
/// With `params` null the channel is AWGN at SNR lambda_t, otherwise each
/// symbol sees SNR lambda_t |h|^2. One trial is one symbol; the estimate is
/// the mean fraction of erroneous bits per symbol.
McEstimate estimate_qam_ber(int qam_order, double lambda_t,
                            const fading::ShadowedRicianParams* params, const McConfig& cfg);

}  // namespace sagin::montecarlo

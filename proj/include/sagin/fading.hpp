#pragma once

#include <cmath>
#include <cstdint>
#include <random>

/// Shadowed-Rician small-scale fading of the power gain |h|^2.
///
/// The LoS amplitude is Nakagami-m with power Omega, the scatter is complex
/// Gaussian with power 2 b0. For integer m the 1F1 density reduces, through
/// Laguerre polynomials, to a finite mixture of Gamma(k+1) densities with
/// binomial weights; every closed form here uses that mixture.
namespace sagin::fading {

class ShadowedRicianParams {
 public:
  /// b0 > 0, Omega >= 0, integer m >= 1.
  ShadowedRicianParams(double half_scatter_power, double los_power, int nakagami_m);

  /// Normalized (2 b0 + Omega = 1) parameters from the Rician K factor.
  static ShadowedRicianParams from_k_factor(double rician_k, int nakagami_m);

  /// Rejects non-integer m: the closed forms need the finite Laguerre sum.
  static ShadowedRicianParams with_real_m(double half_scatter_power, double los_power,
                                          double nakagami_m);

  double half_scatter_power() const noexcept { return b0_; }
  double los_power() const noexcept { return omega_; }
  int nakagami_m() const noexcept { return m_; }

  double mean_power() const noexcept { return 2.0 * b0_ + omega_; }
  bool normalized(double tol = 1e-12) const noexcept;

  /// K = Omega / (2 b0).
  double rician_k() const noexcept { return omega_ / (2.0 * b0_); }
  /// K / ((K+1) m) and 1 / (K+1); both are normalized by the mean power.
  double k_los() const noexcept { return omega_ / (mean_power() * m_); }
  double k_sct() const noexcept { return 2.0 * b0_ / mean_power(); }

  // Lemma-style coefficients of the mixture density.
  double a_st() const noexcept;
  double b_st() const noexcept { return 1.0 / (2.0 * b0_); }
  double c_st() const noexcept;
  double e_st() const noexcept { return m_ / (2.0 * b0_ * m_ + omega_); }
  /// a_st c_st^k / e_st^(k+1).
  double varsigma(int k) const;

  /// Unnormalized scale of the Gamma mixture components, 2 b0 + Omega / m.
  double component_scale() const noexcept { return 2.0 * b0_ + omega_ / m_; }

  /// Mixture weight of component k (k = 0..m-1): C(m-1,k) q^k (1-q)^(m-1-k)
  /// with q = K_LoS / (K_Sct + K_LoS). Evaluated in the log domain for m > 12.
  double mixture_weight(int k) const;

 private:
  double b0_;
  double omega_;
  int m_;
};

/// Density of |h|^2 at x >= 0 (Laguerre mixture form).
double pdf_power(const ShadowedRicianParams& params, double x);

/// CDF of |h|^2 in the (K_LoS, K_Sct) form, scaled by the mean power so that
/// unnormalized parameters are handled.
double cdf_power(const ShadowedRicianParams& params, double x);

/// CDF of |h|^2 from (a_st, c_st, e_st) and varsigma(k).
double cdf_power_lemma(const ShadowedRicianParams& params, double x);

/// 2 b0 + Omega.
double mean_power(const ShadowedRicianParams& params);

/// Draws |h|^2 for h = A e^{j alpha} + Z with A^2 ~ Gamma(m, Omega/m),
/// alpha uniform and Z ~ CN(0, 2 b0).
class PowerSampler {
 public:
  explicit PowerSampler(const ShadowedRicianParams& params);

  template <typename Engine>
  double operator()(Engine& rng) {
    const double los_amp = los_power_ > 0.0 ? std::sqrt(los_gamma_(rng)) : 0.0;
    const double phase = phase_(rng);
    const double re = los_amp * std::cos(phase) + scatter_(rng);
    const double im = los_amp * std::sin(phase) + scatter_(rng);
    return re * re + im * im;
  }

 private:
  double los_power_;
  std::gamma_distribution<double> los_gamma_;
  std::uniform_real_distribution<double> phase_;
  std::normal_distribution<double> scatter_;
};

/// Deterministic per-stream engine: stream i is seeded from a SplitMix64
/// hash of (master_seed, i).
std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_index);

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index);

template <typename Engine>
double sample_power(const ShadowedRicianParams& params, Engine& rng) {
  PowerSampler sampler(params);
  return sampler(rng);
}

}  // namespace sagin::fading

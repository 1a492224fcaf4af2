#include "sagin/fading.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sagin/constants.hpp"
#include "sagin/specfun.hpp"

namespace sagin::fading {

namespace {

constexpr int kLogDomainFromM = 13;

}  // namespace

ShadowedRicianParams::ShadowedRicianParams(double half_scatter_power, double los_power,
                                           int nakagami_m)
    : b0_(half_scatter_power), omega_(los_power), m_(nakagami_m) {
  if (!(b0_ > 0.0)) throw std::invalid_argument("b0 must be positive");
  if (!(omega_ >= 0.0)) throw std::invalid_argument("Omega must be non-negative");
  if (m_ < 1) throw std::invalid_argument("Nakagami m must be an integer >= 1");
}

ShadowedRicianParams ShadowedRicianParams::from_k_factor(double rician_k, int nakagami_m) {
  if (!(rician_k >= 0.0)) throw std::invalid_argument("Rician K must be non-negative");
  return {0.5 / (rician_k + 1.0), rician_k / (rician_k + 1.0), nakagami_m};
}

ShadowedRicianParams ShadowedRicianParams::with_real_m(double half_scatter_power,
                                                       double los_power, double nakagami_m) {
  if (!(nakagami_m >= 1.0) || std::floor(nakagami_m) != nakagami_m) {
    std::ostringstream os;
    os << "Nakagami m = " << nakagami_m
       << " is not a positive integer; the closed forms rely on the finite Laguerre "
          "reduction of 1F1(m; 1; x), which needs integer m";
    throw std::invalid_argument(os.str());
  }
  return {half_scatter_power, los_power, static_cast<int>(nakagami_m)};
}

bool ShadowedRicianParams::normalized(double tol) const noexcept {
  return std::abs(mean_power() - 1.0) <= tol;
}

double ShadowedRicianParams::a_st() const noexcept {
  return std::pow(2.0 * b0_ * m_ / (2.0 * b0_ * m_ + omega_), m_) / (2.0 * b0_);
}

double ShadowedRicianParams::c_st() const noexcept {
  return omega_ / (2.0 * b0_ * (2.0 * b0_ * m_ + omega_));
}

double ShadowedRicianParams::varsigma(int k) const {
  // (2 b0 m)^(m-k-1) Omega^k / (2 b0 m + Omega)^(m-1)
  const double s = 2.0 * b0_ * m_;
  const double t = s + omega_;
  return std::pow(s / t, m_ - k - 1) * std::pow(omega_ / t, k);
}

double ShadowedRicianParams::mixture_weight(int k) const {
  if (k < 0 || k >= m_) return 0.0;
  const int n = m_ - 1;
  const double q = (omega_ / m_) / component_scale();
  if (q == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 1.0) return k == n ? 1.0 : 0.0;
  if (m_ < kLogDomainFromM) {
    return specfun::binomial(n, k) * std::pow(q, k) * std::pow(1.0 - q, n - k);
  }
  return std::exp(specfun::log_binomial(n, k) + k * std::log(q) + (n - k) * std::log1p(-q));
}

double pdf_power(const ShadowedRicianParams& params, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("pdf_power: x must be non-negative");
  const int m = params.nakagami_m();
  const double scale = params.component_scale();
  const double y = x / scale;
  double sum = 0.0;
  // Component k is a Gamma(k+1, scale) density: y^k e^-y / (k! scale), with
  // e^-y carried from the start so large y underflows instead of giving inf * 0.
  double term = std::exp(-y);
  for (int k = 0; k < m; ++k) {
    if (k > 0) term *= y / k;
    sum += params.mixture_weight(k) * term;
  }
  return sum / scale;
}

double cdf_power(const ShadowedRicianParams& params, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("cdf_power: x must be non-negative");
  const int m = params.nakagami_m();
  const double mean = params.mean_power();
  const double s = params.k_sct() + params.k_los();
  const double y = x / (mean * s);
  // e^-y folded into the first term: y^p alone overflows long before the
  // product does, and an underflowed term means the survival is negligible.
  double survival = 0.0;
  double partial = 0.0;  // e^-y sum_{p<=k} y^p / p!
  double term = std::exp(-y);
  for (int k = 0; k < m; ++k) {
    if (k > 0) term *= y / k;
    partial += term;
    survival += params.mixture_weight(k) * partial;
  }
  return 1.0 - survival;
}

double cdf_power_lemma(const ShadowedRicianParams& params, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("cdf_power_lemma: x must be non-negative");
  const int m = params.nakagami_m();
  const double ex = params.e_st() * x;
  double survival = 0.0;
  for (int k = 0; k < m; ++k) {
    double inner = 0.0;
    double term = std::exp(-ex);
    for (int p = 0; p <= k; ++p) {
      if (p > 0) term *= ex / p;
      inner += term;
    }
    survival += specfun::binomial(m - 1, k) * params.varsigma(k) * inner;
  }
  return 1.0 - survival;
}

double mean_power(const ShadowedRicianParams& params) { return params.mean_power(); }

PowerSampler::PowerSampler(const ShadowedRicianParams& params)
    : los_power_(params.los_power()),
      los_gamma_(static_cast<double>(params.nakagami_m()),
                 params.los_power() > 0.0 ? params.los_power() / params.nakagami_m() : 1.0),
      phase_(0.0, 2.0 * kPi),
      scatter_(0.0, std::sqrt(params.half_scatter_power())) {}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  // SplitMix64 finalizer over master_seed + (i + 1) * golden gamma.
  std::uint64_t z = master_seed + (stream_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  return std::mt19937_64(stream_seed(master_seed, stream_index));
}

}  // namespace sagin::fading

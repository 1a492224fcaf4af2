#include "sagin/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sagin::montecarlo {

void McConfig::validate() const {
  if (trials < 1000) throw std::invalid_argument("Monte-Carlo trials must be >= 1000");
  if (stream_count < 1) throw std::invalid_argument("stream_count must be >= 1");
  if (!(confidence_sigma > 0.0)) throw std::invalid_argument("confidence_sigma must be > 0");
}

bool McEstimate::consistent_with(double expected, double sigma) const {
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(expected), std::abs(mean));
  return std::abs(mean - expected) <= sigma * std_error + slack;
}

void Moments::add(double x) noexcept {
  ++n;
  const double delta = x - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (x - mean);
}

void Moments::merge(const Moments& o) noexcept {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(o.n);
  const double total = na + nb;
  const double delta = o.mean - mean;
  mean += delta * nb / total;
  m2 += o.m2 + delta * delta * na * nb / total;
  n += o.n;
}

Moments run_streams(const McConfig& cfg,
                    const std::function<Moments(std::mt19937_64&, std::int64_t)>& body) {
  cfg.validate();
  const auto streams = static_cast<std::int64_t>(cfg.stream_count);
  std::vector<std::future<Moments>> parts;
  parts.reserve(static_cast<std::size_t>(streams));
  for (std::int64_t i = 0; i < streams; ++i) {
    const std::int64_t count = cfg.trials / streams + (i < cfg.trials % streams ? 1 : 0);
    parts.push_back(std::async(std::launch::async, [&cfg, &body, i, count] {
      auto rng = fading::make_stream(cfg.master_seed, static_cast<std::uint64_t>(i));
      return body(rng, count);
    }));
  }
  // Pairwise tree reduction in index order.
  std::vector<Moments> level;
  level.reserve(parts.size());
  for (auto& f : parts) level.push_back(f.get());
  while (level.size() > 1) {
    std::vector<Moments> next;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      Moments m = level[i];
      if (i + 1 < level.size()) m.merge(level[i + 1]);
      next.push_back(m);
    }
    level.swap(next);
  }
  return level.front();
}

namespace {

McEstimate from_moments(const Moments& m) {
  return {m.mean, std::sqrt(m.variance() / static_cast<double>(m.n)), m.n};
}

}  // namespace

McEstimate estimate_outage(const fading::ShadowedRicianParams& params, double lambda_t,
                           double gamma_th, const McConfig& cfg) {
  if (!(lambda_t >= 0.0)) throw std::invalid_argument("lambda_t must be non-negative");
  const Moments m = run_streams(cfg, [&](std::mt19937_64& rng, std::int64_t count) {
    fading::PowerSampler draw(params);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < count; ++i) hits += lambda_t * draw(rng) < gamma_th ? 1 : 0;
    // Bernoulli moments in closed form: exact and cheaper than add().
    Moments s;
    s.n = count;
    s.mean = count > 0 ? static_cast<double>(hits) / static_cast<double>(count) : 0.0;
    s.m2 = static_cast<double>(hits) * (1.0 - s.mean);
    return s;
  });
  const double p = m.mean;
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(m.n)), m.n};
}

McEstimate estimate_ergodic_rate(const fading::ShadowedRicianParams& params, double lambda_t,
                                 const McConfig& cfg) {
  if (!(lambda_t >= 0.0)) throw std::invalid_argument("lambda_t must be non-negative");
  return from_moments(run_streams(cfg, [&](std::mt19937_64& rng, std::int64_t count) {
    fading::PowerSampler draw(params);
    Moments s;
    for (std::int64_t i = 0; i < count; ++i) s.add(std::log2(1.0 + lambda_t * draw(rng)));
    return s;
  }));
}

McEstimate estimate_mean_power(const fading::ShadowedRicianParams& params,
                               const McConfig& cfg) {
  return from_moments(run_streams(cfg, [&](std::mt19937_64& rng, std::int64_t count) {
    fading::PowerSampler draw(params);
    Moments s;
    for (std::int64_t i = 0; i < count; ++i) s.add(draw(rng));
    return s;
  }));
}

std::vector<McEstimate> estimate_power_cdf(const fading::ShadowedRicianParams& params,
                                           const std::vector<double>& xs, const McConfig& cfg) {
  cfg.validate();
  const auto streams = static_cast<std::int64_t>(cfg.stream_count);
  std::vector<std::future<std::vector<std::int64_t>>> parts;
  for (std::int64_t i = 0; i < streams; ++i) {
    const std::int64_t count = cfg.trials / streams + (i < cfg.trials % streams ? 1 : 0);
    parts.push_back(std::async(std::launch::async, [&, i, count] {
      auto rng = fading::make_stream(cfg.master_seed, static_cast<std::uint64_t>(i));
      fading::PowerSampler draw(params);
      std::vector<std::int64_t> hits(xs.size(), 0);
      for (std::int64_t t = 0; t < count; ++t) {
        const double y = draw(rng);
        for (std::size_t j = 0; j < xs.size(); ++j) hits[j] += y <= xs[j] ? 1 : 0;
      }
      return hits;
    }));
  }
  std::vector<std::int64_t> hits(xs.size(), 0);
  for (auto& f : parts) {
    const auto h = f.get();
    for (std::size_t j = 0; j < xs.size(); ++j) hits[j] += h[j];
  }
  std::vector<McEstimate> out;
  const double n = static_cast<double>(cfg.trials);
  for (auto h : hits) {
    const double p = static_cast<double>(h) / n;
    out.push_back({p, std::sqrt(p * (1.0 - p) / n), cfg.trials});
  }
  return out;
}

McEstimate estimate_qam_ber(int qam_order, double lambda_t,
                            const fading::ShadowedRicianParams* params, const McConfig& cfg) {
  const int levels = static_cast<int>(std::lround(std::sqrt(static_cast<double>(qam_order))));
  if (qam_order < 4 || levels * levels != qam_order || !std::has_single_bit(
                                                           static_cast<unsigned>(levels)))
    throw std::invalid_argument("QAM order must be a square power of two >= 4");
  if (!(lambda_t > 0.0)) throw std::invalid_argument("lambda_t must be positive");
  const int bits_per_axis = std::countr_zero(static_cast<unsigned>(levels));
  const double bits_per_symbol = 2.0 * bits_per_axis;
  // Unit average symbol energy.
  const double half_spacing = std::sqrt(3.0 / (2.0 * (qam_order - 1)));
  const auto gray = [](int i) { return static_cast<unsigned>(i ^ (i >> 1)); };

  return from_moments(run_streams(cfg, [&](std::mt19937_64& rng, std::int64_t count) {
    std::uniform_int_distribution<int> pick(0, levels - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::optional<fading::PowerSampler> draw;
    if (params != nullptr) draw.emplace(*params);
    const auto detect = [&](double y) {
      const double idx = std::round((y / half_spacing + (levels - 1)) / 2.0);
      return static_cast<int>(std::clamp(idx, 0.0, static_cast<double>(levels - 1)));
    };
    Moments s;
    for (std::int64_t t = 0; t < count; ++t) {
      const double gain = draw ? (*draw)(rng) : 1.0;
      // Coherent detection: after phase and amplitude equalization the
      // per-component noise std is sqrt(1 / (2 SNR)).
      const double snr = lambda_t * gain;
      const double sigma = snr > 0.0 ? std::sqrt(0.5 / snr) : 1e300;
      const int i_tx = pick(rng);
      const int q_tx = pick(rng);
      const double yi = (2 * i_tx - levels + 1) * half_spacing + sigma * noise(rng);
      const double yq = (2 * q_tx - levels + 1) * half_spacing + sigma * noise(rng);
      const int errs = std::popcount(gray(i_tx) ^ gray(detect(yi))) +
                       std::popcount(gray(q_tx) ^ gray(detect(yq)));
      s.add(errs / bits_per_symbol);
    }
    return s;
  }));
}

}  // namespace sagin::montecarlo

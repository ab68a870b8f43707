#include "repwalk/mcmc_sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

constexpr std::size_t kTauTraceCap = std::size_t{1} << 17;
constexpr std::size_t kTauMaxLag = 2000;
constexpr int kMaxHistogramSpins = 20;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Index in [0, n) by multiply-shift; bias <= n / 2^64.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/**
 * Quadratic energy E = sum_p sum_{k,l} J_kl phi_k^p phi_l^p with
 * J_kl = sum_{i < min(k,l), j >= max(k,l)} w(j - i), evaluated in O(1) from
 * double prefix sums of w. Local fields h_k = sum_{l != k} J_kl phi_l give
 * the flip delta -4 phi_k h_k.
 */
class QuadraticFields {
 public:
  QuadraticFields(const std::vector<double>& w, const SpinPath& path) : d_(path.dimension()), t_(path.horizon()) {
    w2_.assign(static_cast<std::size_t>(t_) + 1, 0.0);
    double w1 = 0.0;
    double acc = 0.0;
    for (int m = 1; m <= t_; ++m) {
      w1 += w[static_cast<std::size_t>(m)];
      acc += w1;
      w2_[static_cast<std::size_t>(m)] = acc;
    }
    h_.assign(static_cast<std::size_t>(d_ * t_), 0.0);
    for (int p = 0; p < d_; ++p)
      for (int k = 1; k <= t_; ++k) {
        double s = 0.0;
        for (int l = 1; l <= t_; ++l)
          if (l != k) s += coupling(k, l) * path.increment(l, p);
        field(k, p) = s;
      }
  }

  double coupling(int k, int l) const {
    const int lo = std::min(k, l);
    const int hi = std::max(k, l);
    return w2(t_) - w2(t_ - lo) - w2(hi - 1) + w2(hi - 1 - lo);
  }

  double delta(const SpinPath& path, int k, int p) const { return -4.0 * path.increment(k, p) * field(k, p); }

  /// Call before path.flip(k, p).
  void flip(const SpinPath& path, int k, int p) {
    const double change = -2.0 * path.increment(k, p);
    for (int l = 1; l <= t_; ++l)
      if (l != k) field(l, p) += coupling(l, k) * change;
  }

 private:
  double w2(int m) const { return m <= 0 ? 0.0 : w2_[static_cast<std::size_t>(m)]; }
  double& field(int k, int p) { return h_[static_cast<std::size_t>((k - 1) * d_ + p)]; }
  double field(int k, int p) const { return h_[static_cast<std::size_t>((k - 1) * d_ + p)]; }

  int d_;
  int t_;
  std::vector<double> w2_;
  std::vector<double> h_;
};

std::optional<std::vector<double>> fast_weights(const GibbsSpec& spec) {
  if (spec.interaction_set || !spec.window_terms.empty()) return std::nullopt;
  return spec.potential.quadratic_weights(spec.horizon);
}

}  // namespace

void SamplerConfig::validate() const {
  if (burnin < 0) throw DomainError("sampler: burnin must be >= 0");
  if (sweeps <= burnin) throw DomainError("sampler: sweeps must exceed burnin");
  if (chains < 1) throw DomainError("sampler: chains must be >= 1");
  if (thin < 1) throw DomainError("sampler: thin must be >= 1");
  if (samples_per_chain() < 1) throw DomainError("sampler: no samples left after burnin and thinning");
}

void check_sampler_budget(const GibbsSpec& spec, const SamplerConfig& cfg) {
  spec.validate();
  const bool fast = fast_weights(spec).has_value();
  cfg.validate();
  if (spec.spin_count() > kMaxSamplerSpins)
    throw CapacityError("sampler budget exceeded: d*T = " + std::to_string(spec.spin_count()) + " > " +
                        std::to_string(kMaxSamplerSpins));
  const double t = spec.horizon;
  if (spec.potential.is_power_law() && !fast && static_cast<double>(cfg.sweeps) * t * t > kPowerLawFlipBudget)
    throw CapacityError("sampler budget exceeded: sweeps * T^2 > 1e11 for a power-law potential");
}

std::uint64_t chain_seed(std::uint64_t seed, int chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chain)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

ChainResult run_chain(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg, int chain,
                      bool histogram) {
  check_sampler_budget(spec, cfg);
  const auto weights = fast_weights(spec);
  validate(obs, spec.dimension, spec.horizon);
  const int d = spec.dimension;
  const int spins = spec.spin_count();
  if (histogram && spins > kMaxHistogramSpins)
    throw CapacityError("histogram sampling needs d*T <= " + std::to_string(kMaxHistogramSpins));

  std::mt19937_64 rng(chain_seed(cfg.seed, chain));
  std::vector<int> signs(static_cast<std::size_t>(spins));
  for (auto& s : signs) s = (rng() >> 63) ? 1 : -1;
  SpinPath path = SpinPath::from_signs(d, spec.horizon, spec.amplitude, signs);
  std::uint64_t bits = histogram ? path.bits() : 0;

  const EnergyFunctional functional(spec);
  std::optional<QuadraticFields> fields;
  if (weights) fields.emplace(*weights, path);
  double current = functional.energy(path);

  ChainResult out;
  if (histogram) out.visits.assign(std::size_t{1} << spins, 0);
  double sum = 0.0;
  std::int64_t steps = 0;
  for (std::int64_t sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    for (int s = 0; s < spins; ++s) {
      const int idx = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(spins)));
      const int k = idx / d + 1;
      const int p = idx % d;
      const double delta = fields ? fields->delta(path, k, p) : functional.delta_flip(path, k, p);
      const double x = spec.alpha * delta;
      if (!std::isfinite(x)) throw NumericError("sampler: non-finite energy change");
      ++out.proposals;
      if (x >= 0.0 || unit_interval(rng) < std::exp(x)) {
        if (fields) fields->flip(path, k, p);
        path.flip(k, p);
        bits ^= std::uint64_t{1} << idx;
        current += delta;
        ++out.accepted;
      }
      if (++steps % kAuditInterval == 0) {
        const double fresh = functional.energy(path);
        if (std::abs(fresh - current) > 1e-6 * std::max(1.0, std::abs(fresh)))
          throw NumericError("sampler: energy drift " + std::to_string(fresh - current) + " at step " +
                             std::to_string(steps));
        current = fresh;
      }
    }
    if (sweep <= cfg.burnin || (sweep - cfg.burnin) % cfg.thin != 0) continue;
    if (histogram) {
      ++out.visits[bits];
      ++out.samples;
      continue;
    }
    const double v = evaluate(obs, path);
    sum += v;
    ++out.samples;
    if (cfg.keep_traces || out.trace.size() < kTauTraceCap) out.trace.push_back(v);
  }
  if (!histogram) {
    out.mean = sum / static_cast<double>(out.samples);
    out.autocorrelation_time = integrated_autocorrelation_time(
        std::span<const double>(out.trace.data(), std::min(out.trace.size(), kTauTraceCap)));
    if (!cfg.keep_traces) {
      out.trace.clear();
      out.trace.shrink_to_fit();
    }
  }
  return out;
}

Estimate merge_chains(std::span<const ChainResult> chains, const SamplerConfig& cfg) {
  Estimate e;
  std::int64_t accepted = 0;
  std::int64_t proposals = 0;
  for (const auto& c : chains) {
    e.chain_means.push_back(c.mean);
    e.n_samples += c.samples;
    e.autocorrelation_time += c.autocorrelation_time;
    accepted += c.accepted;
    proposals += c.proposals;
    if (cfg.keep_traces) e.traces.push_back(c.trace);
  }
  const double n = static_cast<double>(chains.size());
  e.mean = std::accumulate(e.chain_means.begin(), e.chain_means.end(), 0.0) / n;
  e.autocorrelation_time /= n;
  e.acceptance_rate = proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
  if (chains.size() > 1) {
    double ss = 0.0;
    for (double m : e.chain_means) ss += (m - e.mean) * (m - e.mean);
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

namespace {

std::vector<ChainResult> run_chains(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg,
                                    bool histogram) {
  std::vector<ChainResult> results(static_cast<std::size_t>(cfg.chains));
  std::vector<std::exception_ptr> errors(results.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int c = 0; c < cfg.chains; ++c) {
    try {
      results[static_cast<std::size_t>(c)] = run_chain(spec, obs, cfg, c, histogram);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace

Estimate sample_expectation(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg) {
  cfg.validate();
  if (cfg.chains < 4) throw DomainError("sample_expectation: error bars need at least 4 chains");
  const auto results = run_chains(spec, obs, cfg, false);
  return merge_chains(results, cfg);
}

std::vector<double> sample_histogram(const GibbsSpec& spec, const SamplerConfig& cfg) {
  const auto results = run_chains(spec, EndpointSquare{}, cfg, true);
  std::vector<double> freq(results.front().visits.size(), 0.0);
  std::uint64_t total = 0;
  for (const auto& r : results) {
    for (std::size_t i = 0; i < freq.size(); ++i) freq[i] += static_cast<double>(r.visits[i]);
    total += static_cast<std::uint64_t>(r.samples);
  }
  for (auto& f : freq) f /= static_cast<double>(total);
  return freq;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeError("total_variation: distributions differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double integrated_autocorrelation_time(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < 8) return 1.0;
  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (trace[i] - mean) * (trace[i + lag] - mean);
    return s / static_cast<double>(n - lag);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return 1.0;
  double tau = 1.0;
  for (std::size_t m = 1; m < std::min(n / 4, kTauMaxLag); ++m) {
    tau += 2.0 * autocov(m) / c0;
    if (static_cast<double>(m) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

ScalingSweep msd_scaling_sweep(const PairPotential& potential, double alpha, std::span<const int> horizons,
                               const SamplerConfig& cfg) {
  if (!potential.is_power_law()) throw DomainError("msd_scaling_sweep: needs a power-law potential");
  if (horizons.size() < 2) throw DomainError("msd_scaling_sweep: needs at least two horizons");
  for (int t : horizons)
    if (t < 1 || (t & (t - 1)) != 0) throw DomainError("msd_scaling_sweep: horizons must be powers of two");

  ScalingSweep out;
  std::vector<double> xs, ys, sig;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    GibbsSpec spec;
    spec.horizon = horizons[i];
    spec.alpha = alpha;
    spec.potential = potential;
    SamplerConfig c = cfg;
    c.seed = splitmix64(cfg.seed + i);
    auto est = sample_expectation(spec, EndpointSquare{}, c);
    if (!(est.mean > 0.0)) throw NumericError("msd_scaling_sweep: non-positive MSD estimate");
    xs.push_back(std::log2(static_cast<double>(spec.horizon)));
    ys.push_back(std::log2(est.mean));
    sig.push_back(est.std_error / (est.mean * std::log(2.0)));
    out.points.push_back({spec.horizon, std::move(est)});
  }

  const bool weighted = std::all_of(sig.begin(), sig.end(), [](double s) { return s > 0.0; });
  std::vector<double> w(xs.size(), 1.0);
  if (weighted)
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (sig[i] * sig[i]);
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += w[i];
    sx += w[i] * xs[i];
    sy += w[i] * ys[i];
  }
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += w[i] * (xs[i] - xm) * (xs[i] - xm);
    sxy += w[i] * (xs[i] - xm) * (ys[i] - ym);
  }
  out.slope = sxy / sxx;
  if (weighted) {
    out.slope_std_error = std::sqrt(1.0 / sxx);
  } else if (xs.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - ym - out.slope * (xs[i] - xm);
      rss += r * r;
    }
    out.slope_std_error = std::sqrt(rss / static_cast<double>(xs.size() - 2) / sxx);
  }
  return out;
}

}  // namespace repwalk

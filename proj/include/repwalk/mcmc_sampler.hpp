#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "repwalk/model.hpp"
#include "repwalk/observable.hpp"

namespace repwalk {

/// Generator pinned for every chain; recorded in output metadata.
inline constexpr const char* kGeneratorName = "mt19937_64";

/// Largest d*T the sampler accepts.
inline constexpr int kMaxSamplerSpins = 4096;

/// sweeps * T^2 limit for power-law potentials without the quadratic fast path.
inline constexpr double kPowerLawFlipBudget = 1e11;

/// Steps between from-scratch energy audits.
inline constexpr std::int64_t kAuditInterval = 100000;

/// One sweep is d*T single-spin proposals. sweeps, burnin and thin count
/// sweeps per chain; a sample is taken every `thin` sweeps after burn-in.
struct SamplerConfig {
  std::int64_t sweeps = 10000;
  std::int64_t burnin = 1000;
  std::int64_t thin = 1;
  int chains = 4;
  std::uint64_t seed = 0;
  bool keep_traces = false;

  void validate() const;
  std::int64_t samples_per_chain() const { return (sweeps - burnin) / thin; }
};

struct Estimate {
  double mean = 0.0;
  /// Standard deviation of the chain means over sqrt(chains).
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  /// Integrated autocorrelation time in samples, averaged over chains.
  double autocorrelation_time = 0.0;
  double acceptance_rate = 0.0;
  std::vector<double> chain_means;
  /// Per-chain sample traces when SamplerConfig::keep_traces is set.
  std::vector<std::vector<double>> traces;
};

/// Output of a single chain. Everything the merge step needs.
struct ChainResult {
  double mean = 0.0;
  std::int64_t samples = 0;
  std::int64_t accepted = 0;
  std::int64_t proposals = 0;
  double autocorrelation_time = 0.0;
  std::vector<double> trace;
  /// Visit counts per configuration bit pattern (histogram runs only).
  std::vector<std::uint64_t> visits;
};

/// Throws CapacityError (or DomainError for a bad config) when a run of
/// cfg on spec would exceed the sampler budgets.
void check_sampler_budget(const GibbsSpec& spec, const SamplerConfig& cfg);

/// Seed of chain `chain`: a seed_seq over (low word, high word, chain index).
std::uint64_t chain_seed(std::uint64_t seed, int chain);

/// Runs chain `chain` of cfg. Deterministic in (spec, obs, cfg, chain).
/// With `histogram` set, visits over all 2^(dT) configurations are counted
/// instead of evaluating obs (requires d*T <= 20).
ChainResult run_chain(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg, int chain,
                      bool histogram = false);

/// Deterministic merge in chain-index order.
Estimate merge_chains(std::span<const ChainResult> chains, const SamplerConfig& cfg);

/// Metropolis single-flip estimate of E[obs]; chains run on OpenMP threads.
/// Requires >= 4 chains.
Estimate sample_expectation(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg);

/// Empirical configuration frequencies pooled over chains, indexed like
/// configuration_probabilities(). Requires d*T <= 20.
std::vector<double> sample_histogram(const GibbsSpec& spec, const SamplerConfig& cfg);

/// 0.5 * sum |p - q|.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Sokal windowed estimate: tau = 1 + 2 sum_{t=1}^{M} rho(t) with the
/// smallest M >= 5 tau(M). Returns 1 for constant or very short traces.
double integrated_autocorrelation_time(std::span<const double> trace);

struct ScalingPoint {
  int horizon = 0;
  Estimate msd;
};

struct ScalingSweep {
  std::vector<ScalingPoint> points;
  /// Weighted least-squares slope of log2 MSD against log2 T.
  double slope = 0.0;
  double slope_std_error = 0.0;
  std::string label = "DIAGNOSTIC";
};

/// d = 1, amplitude 1. Horizons must be powers of two within the sampler budget.
/// Horizon h_i uses seed splitmix64(seed + i).
ScalingSweep msd_scaling_sweep(const PairPotential& potential, double alpha, std::span<const int> horizons,
                               const SamplerConfig& cfg);

}  // namespace repwalk

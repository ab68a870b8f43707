#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repwalk/model.hpp"
#include "repwalk/observable.hpp"

namespace repwalk {

/// Hard cap on d*T for full enumeration (2^24 ~ 16.7M configurations).
inline constexpr int kMaxEnumerationSpins = 24;

/// Negative slack absorbed by every non-strict inequality check.
inline constexpr double kSlackTolerance = 1e-9;

struct ExactResult {
  double value = 0.0;
  /// log E_P[exp(alpha * energy)] under the normalized product base measure.
  double log_partition = 0.0;
  std::uint64_t config_count = 0;
};

/**
 * Exact expectations by enumeration of all 2^(dT) increment configurations.
 *
 * Configurations are visited in Gray-code order inside a fixed number of
 * contiguous segments (see enumeration_segments()); every segment recomputes
 * its first energy from scratch and then updates it with single-spin deltas.
 * Segments run on OpenMP threads and their log-sum-exp partials merge in
 * segment order, so results are bitwise independent of the thread count.
 */
ExactResult expectation(const GibbsSpec& spec, const Observable& obs);

/// Several observables from one enumeration pass (same weights, same partition).
std::vector<ExactResult> expectations(const GibbsSpec& spec, std::span<const Observable> observables);

/// P(phi_j = phi_{j+1}); requires d = 1 and 1 <= j < T.
double pair_equal_prob(const GibbsSpec& spec, int j);

/// P(phi_i = ... = phi_{i+w-1}); requires d = 1.
double window_all_equal_prob(const GibbsSpec& spec, int i, int w);

/// E|x_T|^2 / (d T).
double msd_per_step(const GibbsSpec& spec);

/// Probability of every configuration, indexed by its bit encoding (see
/// SpinPath::from_bits). Limited to d*T <= 20.
std::vector<double> configuration_probabilities(const GibbsSpec& spec);

/// Number of contiguous Gray-code segments used for d*T spins.
int enumeration_segments(int spins);

/// Throws CapacityError unless d*T <= kMaxEnumerationSpins.
void check_enumeration_capacity(const GibbsSpec& spec);

}  // namespace repwalk

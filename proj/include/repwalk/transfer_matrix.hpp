#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "repwalk/model.hpp"

namespace repwalk {

/// Coupling of the free-boundary Ising chain H = -beta * sum s_i s_{i+1}.
/// The walk with W(z, 2) = c |z|^2, amplitude a and coupling alpha maps to
/// beta_eff = 2 alpha c a^2, since (phi + phi')^2 = 2a^2 + 2 phi phi'.
struct IsingParams {
  double beta_eff = 0.0;
};

IsingParams ising_params_for_nearest_quadratic(double alpha, double coefficient = 1.0, double amplitude = 1.0);

/// <s_i s_{i+r}> = tanh(beta)^r.
double ising_two_point(IsingParams params, int r);

/// chi = (1 + t) / (1 - t) with t = tanh(beta); 1 - t is formed as
/// 2 / (e^{2 beta} + 1) so the ratio stays finite for large beta.
double susceptibility(IsingParams params);

/// E[x_T^2] of the free chain: T + 2 sum_{r=1}^{T-1} (T - r) t^r.
double finite_chain_msd(IsingParams params, std::int64_t horizon);

inline constexpr int kMaxBandRange = 4;

/**
 * Block transfer operator for a range-R coefficient table in d = 1.
 *
 * Spins are grouped into blocks of R consecutive increments; every window of
 * length <= R lies inside one block or straddles two neighbouring blocks, so
 *   M(s, s') = exp(alpha * [E_inside(s') + E_across(s, s')])
 * over block states s, s' in {-1, +1}^R reproduces the Gibbs weights.
 */
class BandedTransferOperator {
 public:
  BandedTransferOperator(const PairPotential& potential, double alpha, double amplitude = 1.0);

  int range() const { return range_; }
  int states() const { return 1 << range_; }

  /// Log-weight for appending a block of `len` spins in state `next` after
  /// a full block in state `prev` (prev ignored when `first` is true).
  double log_weight(std::uint32_t prev, std::uint32_t next, int len, bool first) const;

  /// Entry of the full R x R block matrix.
  double weight(std::uint32_t prev, std::uint32_t next) const { return std::exp(log_weight(prev, next, range_, false)); }

  /// Sum of the increments of a block state with `len` spins.
  double block_sum(std::uint32_t state, int len) const;

 private:
  PairPotential potential_;
  double alpha_;
  double amplitude_;
  int range_;
};

/// E[x_T^2] for a range-R coefficient table via forward products of the
/// block operator with (Z, sum x, sum x^2) accumulators. R <= 4, T <= 10^6.
double banded_msd(const PairPotential& potential, double alpha, std::int64_t horizon, double amplitude = 1.0);

}  // namespace repwalk

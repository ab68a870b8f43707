#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "repwalk/model.hpp"

namespace repwalk {

/// Finite symmetric probability measure on the real line.
class SymmetricMeasure {
 public:
  struct Atom {
    double x;
    double w;
  };

  /// Builds the measure from positive locations with weights w_i placed at
  /// each of +x_i and -x_i, plus an optional atom at 0. Weights must sum
  /// (2 * sum w_i + zero_weight) to 1 within 1e-12.
  static SymmetricMeasure from_half(std::vector<Atom> positive_half, double zero_weight = 0.0);

  /// 1/2 (delta_v + delta_{-v}).
  static SymmetricMeasure two_point(double v);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double second_moment() const;

 private:
  std::vector<Atom> atoms_;
};

struct TiltedMoment {
  double value = 0.0;
  bool degenerate = false;  ///< all mass at 0
};

/// E[yz] under P(dy dz) ~ exp(beta y z) theta(dy) theta(dz).
TiltedMoment tilted_cross_moment(const SymmetricMeasure& theta, double beta);

/// E[S] under P(ds) ~ exp(beta s) mu(ds) for a symmetric law mu of S.
double tilted_mean(const SymmetricMeasure& mu, double beta);

struct BoundValue {
  double value = 0.0;
  bool certified = true;  ///< beta * V <= 2
};

/// V tanh(beta V).
BoundValue tanh_lower_bound(double v, double beta);

/// p/2 (delta_a + delta_{-a}) + (1-p)/2 (delta_b + delta_{-b}).
struct FourPointMeasure {
  double a = 1.0;
  double b = 1.0;
  double p = 1.0;

  void validate() const;
  double variance() const { return p * a * a + (1.0 - p) * b * b; }
};

/// N/Z with Z = p cosh(beta a) + (1-p) cosh(beta b) and
/// N = p a sinh(beta a) + (1-p) b sinh(beta b).
double four_point_ratio(const FourPointMeasure& m, double beta);

struct FourPointMinimum {
  FourPointMeasure argmin;
  double value = 0.0;
  std::uint64_t feasible_cells = 0;
};

/**
 * Grid search of four_point_ratio over the variance slice
 * p a^2 + (1-p) b^2 = V^2, a <= b, with a on a grid of spacing h over (0, 2V]
 * and p on a grid of spacing h / V over (0, 1). Rows of the grid run on
 * OpenMP threads; ties break towards the lexicographically smallest (a, p).
 */
FourPointMinimum minimize_four_point(double v, double beta, double h);

struct ConvexityReport {
  bool second_differences_positive = false;
  double min_second_difference = 0.0;
  double k_at_v = 0.0;
  bool k_vanishes_at_v = false;
  bool k_second_derivative_positive = false;
  bool pass = false;
};

/// k(x) = x sinh(beta x) - V tanh(V beta) cosh(beta x), phi(t) = k(sqrt t).
double certificate_k(double x, double v, double beta);
double certificate_k_second_derivative(double x, double v, double beta);

/// Checks phi is convex on the (sorted, positive) grid, k(V) = 0 and k'' > 0.
ConvexityReport convexity_certificate(double v, double beta, std::vector<double> t_grid);

struct BlockCovarianceReport {
  int horizon = 0;
  double alpha = 0.0;
  double c = 0.0;
  double cross_moment = 0.0;  ///< E[sigma^1 sigma^2] under the split measure
  double half_variance = 0.0;  ///< V = E[(sigma^1)^2] under the half-size measure
  double beta = 0.0;           ///< alpha / T^c
  double bound = 0.0;          ///< V tanh(beta V)
  double slack = 0.0;
  bool certified = true;  ///< beta V <= 2
  bool pass = false;
};

/// Two-block split measure for W = |z|^gamma / t^{gamma/2 + c}: pairs internal
/// to each half plus the cross term alpha (sigma^1 + sigma^2)^2 / T^c.
GibbsSpec split_measure_spec(int horizon, double alpha, double c, int gamma = 2);

/// Exact E_split[sigma^1 sigma^2] - V tanh((alpha/T^c) V) with d = 1, a = 1.
BlockCovarianceReport block_covariance_check(int horizon, double alpha, double c, int gamma = 2);

struct FalsificationResult {
  double min_margin = 0.0;  ///< min over trials of E_beta[S] - V tanh(beta V)
  std::uint64_t trials = 0;
  std::vector<SymmetricMeasure::Atom> worst;  ///< positive half of the worst measure
};

/// Randomized many-atom search over symmetric laws of S with second moment
/// V^2; guards the four-point reduction against implementation error.
FalsificationResult falsification_search(double v, double beta, int max_atom_pairs, int trials, std::uint64_t seed);

}  // namespace repwalk

#include "repwalk/tilt_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "repwalk/errors.hpp"
#include "repwalk/exact_oracle.hpp"

namespace repwalk {

SymmetricMeasure SymmetricMeasure::from_half(std::vector<Atom> positive_half, double zero_weight) {
  if (!(zero_weight >= 0.0)) throw DomainError("symmetric measure: negative weight at 0");
  double total = zero_weight;
  SymmetricMeasure m;
  for (const auto& a : positive_half) {
    if (!(a.x > 0.0) || !std::isfinite(a.x)) throw DomainError("symmetric measure: half atoms need x > 0");
    if (!(a.w >= 0.0) || !std::isfinite(a.w)) throw DomainError("symmetric measure: weights must be >= 0");
    total += 2.0 * a.w;
    m.atoms_.push_back({a.x, a.w});
    m.atoms_.push_back({-a.x, a.w});
  }
  if (zero_weight > 0.0) m.atoms_.push_back({0.0, zero_weight});
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("symmetric measure: weights sum to " + std::to_string(total));
  return m;
}

SymmetricMeasure SymmetricMeasure::two_point(double v) { return from_half({{v, 0.5}}); }

double SymmetricMeasure::second_moment() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.w * a.x * a.x;
  return s;
}

TiltedMoment tilted_cross_moment(const SymmetricMeasure& theta, double beta) {
  if (!(beta >= 0.0)) throw DomainError("tilted_cross_moment: beta must be >= 0");
  if (theta.second_moment() == 0.0) return {0.0, true};
  const auto& at = theta.atoms();
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& y : at)
    for (const auto& z : at)
      if (y.w > 0.0 && z.w > 0.0) mx = std::max(mx, beta * y.x * z.x);
  double num = 0.0;
  double den = 0.0;
  for (const auto& y : at)
    for (const auto& z : at) {
      const double w = y.w * z.w * std::exp(beta * y.x * z.x - mx);
      num += w * y.x * z.x;
      den += w;
    }
  return {num / den, false};
}

double tilted_mean(const SymmetricMeasure& mu, double beta) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& a : mu.atoms())
    if (a.w > 0.0) mx = std::max(mx, beta * a.x);
  double num = 0.0;
  double den = 0.0;
  for (const auto& a : mu.atoms()) {
    const double w = a.w * std::exp(beta * a.x - mx);
    num += w * a.x;
    den += w;
  }
  return num / den;
}

BoundValue tanh_lower_bound(double v, double beta) {
  if (!(v > 0.0)) throw DomainError("tanh_lower_bound: V must be > 0");
  if (!(beta >= 0.0)) throw DomainError("tanh_lower_bound: beta must be >= 0");
  return {v * std::tanh(beta * v), beta * v <= 2.0};
}

void FourPointMeasure::validate() const {
  if (!(a > 0.0)) throw DomainError("four-point measure: a must be > 0");
  if (!(b >= a)) throw DomainError("four-point measure: b must be >= a");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("four-point measure: p must lie in [0, 1]");
}

double four_point_ratio(const FourPointMeasure& m, double beta) {
  m.validate();
  const double z = m.p * std::cosh(beta * m.a) + (1.0 - m.p) * std::cosh(beta * m.b);
  const double n = m.p * m.a * std::sinh(beta * m.a) + (1.0 - m.p) * m.b * std::sinh(beta * m.b);
  return n / z;
}

FourPointMinimum minimize_four_point(double v, double beta, double h) {
  if (!(v > 0.0)) throw DomainError("minimize_four_point: V must be > 0");
  if (!(beta >= 0.0)) throw DomainError("minimize_four_point: beta must be >= 0");
  if (!(h > 0.0) || h > 1e-3 * v * (1.0 + 1e-12))
    throw DomainError("minimize_four_point: grid resolution must satisfy 0 < h <= 1e-3 V");

  const long m = static_cast<long>(std::ceil(v / h - 1e-9));
  const long rows = 2 * m;  // a = V i / m, i = 1..2m covers (0, 2V]
  const long cols = m;      // p = j / m, j = 1..m-1
  const double v2 = v * v;

  struct RowBest {
    double value = std::numeric_limits<double>::infinity();
    FourPointMeasure arg;
    std::uint64_t feasible = 0;
  };
  std::vector<RowBest> best(static_cast<std::size_t>(rows));

#pragma omp parallel for schedule(static)
  for (long i = 1; i <= rows; ++i) {
    RowBest& rb = best[static_cast<std::size_t>(i - 1)];
    const double a = v * static_cast<double>(i) / static_cast<double>(m);
    for (long j = 1; j < cols; ++j) {
      const double p = static_cast<double>(j) / static_cast<double>(cols);
      const double b2 = (v2 - p * a * a) / (1.0 - p);
      if (b2 < a * a * (1.0 - 1e-12)) continue;
      const double b = std::max(std::sqrt(b2), a);
      ++rb.feasible;
      const double r = four_point_ratio({a, b, p}, beta);
      if (r < rb.value) {
        rb.value = r;
        rb.arg = {a, b, p};
      }
    }
  }

  FourPointMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& rb : best) {
    out.feasible_cells += rb.feasible;
    if (rb.feasible > 0 && rb.value < out.value) {
      out.value = rb.value;
      out.argmin = rb.arg;
    }
  }
  if (out.feasible_cells == 0) throw DomainError("minimize_four_point: empty feasible set");
  return out;
}

double certificate_k(double x, double v, double beta) {
  return x * std::sinh(beta * x) - v * std::tanh(v * beta) * std::cosh(beta * x);
}

double certificate_k_second_derivative(double x, double v, double beta) {
  return beta * beta * x * std::sinh(beta * x) + 2.0 * beta * std::cosh(beta * x) -
         v * std::tanh(v * beta) * beta * beta * std::cosh(beta * x);
}

ConvexityReport convexity_certificate(double v, double beta, std::vector<double> t_grid) {
  if (!(v > 0.0) || !(beta > 0.0)) throw DomainError("convexity_certificate: need V > 0 and beta > 0");
  if (!(beta * v < 2.0)) throw DomainError("convexity_certificate: requires beta V < 2");
  for (double t : t_grid)
    if (!(t > 0.0)) throw DomainError("convexity_certificate: grid points must be > 0");
  if (t_grid.size() < 3) throw DomainError("convexity_certificate: need at least 3 grid points");
  std::sort(t_grid.begin(), t_grid.end());
  t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());

  auto phi = [&](double t) { return certificate_k(std::sqrt(t), v, beta); };
  ConvexityReport rep;
  rep.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
    const double t0 = t_grid[i - 1], t1 = t_grid[i], t2 = t_grid[i + 1];
    const double d = ((phi(t2) - phi(t1)) / (t2 - t1) - (phi(t1) - phi(t0)) / (t1 - t0)) / (0.5 * (t2 - t0));
    rep.min_second_difference = std::min(rep.min_second_difference, d);
  }
  rep.second_differences_positive = rep.min_second_difference > 0.0;
  rep.k_at_v = certificate_k(v, v, beta);
  rep.k_vanishes_at_v = std::abs(rep.k_at_v) <= 1e-10 * std::max(1.0, v * std::cosh(beta * v));
  rep.k_second_derivative_positive = std::all_of(t_grid.begin(), t_grid.end(), [&](double t) {
    return certificate_k_second_derivative(std::sqrt(t), v, beta) > 0.0;
  });
  rep.pass = rep.second_differences_positive && rep.k_vanishes_at_v && rep.k_second_derivative_positive;
  return rep;
}

GibbsSpec split_measure_spec(int horizon, double alpha, double c, int gamma) {
  if (horizon < 2 || horizon % 2 != 0) throw DomainError("split measure: horizon must be even and >= 2");
  if (!(c > 0.0)) throw DomainError("split measure: c must be > 0");
  const int h = horizon / 2;
  GibbsSpec spec;
  spec.dimension = 1;
  spec.horizon = horizon;
  spec.amplitude = 1.0;
  spec.alpha = alpha;
  spec.potential = PairPotential::power_law(gamma, gamma / 2.0 + c);
  std::vector<PairIndex> pairs;
  for (int i = 0; i < horizon; ++i)
    for (int j = i + 1; j <= horizon; ++j)
      if (j <= h || i >= h) pairs.push_back({i, j});
  spec.interaction_set = std::move(pairs);
  const double big_t = horizon;
  const double weight = std::pow(2.0 / big_t, gamma / 2.0) / std::pow(big_t, c);
  spec.window_terms.push_back({0, horizon, weight, gamma});
  return spec;
}

BlockCovarianceReport block_covariance_check(int horizon, double alpha, double c, int gamma) {
  BlockCovarianceReport rep;
  rep.horizon = horizon;
  rep.alpha = alpha;
  rep.c = c;
  const GibbsSpec split = split_measure_spec(horizon, alpha, c, gamma);
  check_enumeration_capacity(split);
  rep.cross_moment = expectation(split, half_block_product(horizon)).value;

  const int h = horizon / 2;
  GibbsSpec half;
  half.dimension = 1;
  half.horizon = h;
  half.alpha = alpha;
  half.potential = split.potential;
  rep.half_variance = expectation(half, EndpointSquare{}).value / h;

  rep.beta = alpha / std::pow(static_cast<double>(horizon), c);
  rep.bound = rep.half_variance * std::tanh(rep.beta * rep.half_variance);
  rep.slack = rep.cross_moment - rep.bound;
  rep.certified = rep.beta * rep.half_variance <= 2.0;
  rep.pass = !rep.certified || rep.slack >= -kSlackTolerance;
  return rep;
}

FalsificationResult falsification_search(double v, double beta, int max_atom_pairs, int trials, std::uint64_t seed) {
  if (!(v > 0.0) || !(beta >= 0.0)) throw DomainError("falsification_search: need V > 0, beta >= 0");
  if (max_atom_pairs < 1 || trials < 1) throw DomainError("falsification_search: need >= 1 atom pair and trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> npairs(1, max_atom_pairs);

  FalsificationResult out;
  out.min_margin = std::numeric_limits<double>::infinity();
  const double bound = v * std::tanh(beta * v);
  for (int trial = 0; trial < trials; ++trial) {
    const int k = npairs(rng);
    std::vector<SymmetricMeasure::Atom> half(static_cast<std::size_t>(k));
    double wsum = 0.0;
    for (auto& a : half) {
      a.x = 0.05 + 3.0 * unit(rng);
      a.w = 0.05 + unit(rng);
      wsum += 2.0 * a.w;
    }
    const double zero = unit(rng) < 0.3 ? 0.5 * unit(rng) : 0.0;
    double m2 = 0.0;
    for (auto& a : half) {
      a.w *= (1.0 - zero) / wsum;
      m2 += 2.0 * a.w * a.x * a.x;
    }
    const double scale = v / std::sqrt(m2);
    for (auto& a : half) a.x *= scale;
    // renormalize the weights exactly so they sum to 1
    double total = zero;
    for (const auto& a : half) total += 2.0 * a.w;
    for (auto& a : half) a.w /= total;
    const auto mu = SymmetricMeasure::from_half(half, zero / total);
    const double margin = tilted_mean(mu, beta) - bound;
    ++out.trials;
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.worst = half;
    }
  }
  return out;
}

}  // namespace repwalk

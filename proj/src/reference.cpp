#include "repwalk/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "repwalk/errors.hpp"

namespace repwalk::reference {

double naive_energy(const SpinPath& path, const GibbsSpec& spec) {
  const int d = spec.dimension;
  std::vector<double> z(static_cast<std::size_t>(d));
  auto displacement = [&](int i, int j) {
    for (int p = 0; p < d; ++p) z[static_cast<std::size_t>(p)] = path.position(j, p) - path.position(i, p);
  };
  const auto pairs = spec.interaction_set ? *spec.interaction_set : all_pairs(spec.horizon);
  double e = 0.0;
  for (const auto& pr : pairs) {
    displacement(pr.i, pr.j);
    e += spec.potential.evaluate(z, pr.j - pr.i);
  }
  for (const auto& w : spec.window_terms) {
    displacement(w.i, w.j);
    double r2 = 0.0;
    for (double v : z) r2 += v * v;
    e += w.weight * std::pow(r2, w.power / 2.0);
  }
  return e;
}

ExactResult expectation(const GibbsSpec& spec, const Observable& obs) {
  spec.validate();
  validate(obs, spec.dimension, spec.horizon);
  const int spins = spec.spin_count();
  if (spins > 20) throw CapacityError("reference enumeration is limited to d*T <= 20");
  const std::uint64_t count = std::uint64_t{1} << spins;

  std::vector<double> log_w(count);
  std::vector<double> values(count);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::uint64_t b = 0; b < count; ++b) {
    const auto path = SpinPath::from_bits(spec.dimension, spec.horizon, spec.amplitude, b);
    log_w[b] = spec.alpha * naive_energy(path, spec);
    values[b] = evaluate(obs, path);
    mx = std::max(mx, log_w[b]);
  }
  double z = 0.0;
  double num = 0.0;
  for (std::uint64_t b = 0; b < count; ++b) {
    const double w = std::exp(log_w[b] - mx);
    z += w;
    num += w * values[b];
  }
  return {num / z, mx + std::log(z) - static_cast<double>(spins) * std::log(2.0), count};
}

FourPointMinimum minimize_four_point(double v, double beta, double h) {
  if (!(v > 0.0) || !(beta >= 0.0) || !(h > 0.0) || h > 1e-3 * v * (1.0 + 1e-12))
    throw DomainError("reference minimize_four_point: bad arguments");
  const long m = static_cast<long>(std::ceil(v / h - 1e-9));
  FourPointMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  for (long i = 1; i <= 2 * m; ++i) {
    const double a = v * static_cast<double>(i) / static_cast<double>(m);
    for (long j = 1; j < m; ++j) {
      const double p = static_cast<double>(j) / static_cast<double>(m);
      const double b2 = (v * v - p * a * a) / (1.0 - p);
      if (b2 < a * a * (1.0 - 1e-12)) continue;
      const FourPointMeasure fm{a, std::max(std::sqrt(b2), a), p};
      ++out.feasible_cells;
      const double r = four_point_ratio(fm, beta);
      if (r < out.value) {
        out.value = r;
        out.argmin = fm;
      }
    }
  }
  if (out.feasible_cells == 0) throw DomainError("reference minimize_four_point: empty feasible set");
  return out;
}

Estimate sample_expectation(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg) {
  cfg.validate();
  std::vector<ChainResult> chains;
  for (int c = 0; c < cfg.chains; ++c) chains.push_back(run_chain(spec, obs, cfg, c));
  return merge_chains(chains, cfg);
}

}  // namespace repwalk::reference

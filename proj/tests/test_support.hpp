#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "repwalk/model.hpp"

namespace repwalk::testing {

inline bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

/// Small random specs covering tables, power laws, masks and window terms.
inline GibbsSpec random_spec(std::mt19937_64& rng, int max_spins) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GibbsSpec s;
  s.dimension = u(rng) < 0.3 ? 2 : 1;
  s.horizon = 2 + static_cast<int>(u(rng) * (max_spins / s.dimension - 1));
  s.amplitude = 0.5 + u(rng);
  s.alpha = u(rng);
  const double kind = u(rng);
  if (kind < 0.3) {
    s.potential = PairPotential::power_law(2 * (1 + static_cast<int>(u(rng) * 2)), 0.5 + 2.0 * u(rng));
  } else {
    CoefficientTable t;
    t.q = 1 + static_cast<int>(u(rng) * 3);
    for (int i = 1; i <= 2; ++i)
      for (int lag = 1; lag <= 4; ++lag)
        if (u(rng) < 0.4) t.coeffs[{i, lag}] = 0.1 + 0.4 * u(rng);
    t.coeffs[{1, 2}] = 0.2 + u(rng);
    s.potential = PairPotential::coefficient_table(t);
  }
  if (u(rng) < 0.3) {
    std::vector<PairIndex> pairs;
    for (const auto& p : all_pairs(s.horizon))
      if (u(rng) < 0.6) pairs.push_back(p);
    s.interaction_set = pairs;
  }
  if (u(rng) < 0.3) s.window_terms.push_back({0, s.horizon, 0.1 + u(rng), 2});
  return s;
}

}  // namespace repwalk::testing

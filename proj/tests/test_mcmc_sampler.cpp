#include <cmath>
#include <random>

#include "doctest.h"
#include "repwalk/errors.hpp"
#include "repwalk/exact_oracle.hpp"
#include "repwalk/mcmc_sampler.hpp"
#include "repwalk/reference.hpp"
#include "repwalk/transfer_matrix.hpp"

using namespace repwalk;

namespace {

SamplerConfig small_config(std::uint64_t seed) {
  SamplerConfig c;
  c.sweeps = 20000;
  c.burnin = 500;
  c.chains = 8;
  c.seed = seed;
  return c;
}

GibbsSpec nearest(int horizon, double alpha) {
  GibbsSpec s;
  s.horizon = horizon;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST_CASE("config validation") {
  SamplerConfig c;
  c.sweeps = 10;
  c.burnin = 10;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.sweeps = 100;
  c.thin = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.thin = 1;
  c.chains = 2;
  CHECK_THROWS_AS(sample_expectation(nearest(4, 0.1), EndpointSquare{}, c), DomainError);
}

TEST_CASE("budgets") {
  CHECK_THROWS_AS(check_sampler_budget(nearest(4097, 0.1), small_config(1)), CapacityError);
  GibbsSpec quartic = nearest(4096, 0.1);
  quartic.potential = PairPotential::power_law(4, 3.0);
  CHECK_THROWS_AS(check_sampler_budget(quartic, small_config(1)), CapacityError);
  GibbsSpec quadratic = quartic;
  quadratic.potential = PairPotential::power_law(2, 3.0);
  CHECK_NOTHROW(check_sampler_budget(quadratic, small_config(1)));
}

TEST_CASE("same seed gives bitwise identical estimates, parallel or serial") {
  GibbsSpec s = nearest(16, 0.01);
  s.potential = PairPotential::power_law(4, 3.0);
  auto cfg = small_config(42);
  cfg.sweeps = 3000;
  const auto a = sample_expectation(s, EndpointSquare{}, cfg);
  const auto b = sample_expectation(s, EndpointSquare{}, cfg);
  const auto r = reference::sample_expectation(s, EndpointSquare{}, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.chain_means == r.chain_means);
  CHECK(a.autocorrelation_time == r.autocorrelation_time);
  cfg.seed = 43;
  CHECK(sample_expectation(s, EndpointSquare{}, cfg).mean != a.mean);
}

TEST_CASE("chain seeds differ") {
  CHECK(chain_seed(1, 0) != chain_seed(1, 1));
  CHECK(chain_seed(1, 0) != chain_seed(2, 0));
  CHECK(chain_seed(7, 3) == chain_seed(7, 3));
}

TEST_CASE("free walk: msd and increment independence") {
  const auto cfg = small_config(3);
  const auto msd = sample_expectation(nearest(32, 0.0), EndpointSquare{}, cfg);
  CHECK(std::abs(msd.mean - 32.0) <= 3.0 * msd.std_error);
  const auto cross = sample_expectation(nearest(32, 0.0), Monomial{{{3, 0, 1}, {9, 0, 1}}}, cfg);
  CHECK(std::abs(cross.mean) <= 3.0 * cross.std_error);
  CHECK(msd.acceptance_rate == 1.0);
}

TEST_CASE("fast and general energy paths agree with exact values") {
  GibbsSpec fast = nearest(10, 0.3);
  GibbsSpec general = fast;
  general.interaction_set = all_pairs(10);  // forces the general delta path
  const double exact = expectation(fast, EndpointSquare{}).value;
  for (const auto& s : {fast, general}) {
    const auto e = sample_expectation(s, EndpointSquare{}, small_config(9));
    CHECK(std::abs(e.mean - exact) <= 3.0 * e.std_error);
  }
}

TEST_CASE("nearest-neighbour chain against the transfer-matrix value") {
  auto cfg = small_config(17);
  cfg.sweeps = 4000;
  const auto e = sample_expectation(nearest(128, 0.25), EndpointSquare{}, cfg);
  CHECK(std::abs(e.mean - finite_chain_msd({0.5}, 128)) <= 3.0 * e.std_error);
}

TEST_CASE("histogram converges to the exact configuration law") {
  GibbsSpec s = nearest(6, 0.3);
  s.potential = PairPotential::power_law(2, 1.5);
  auto cfg = small_config(5);
  cfg.sweeps = 100000;
  const auto q = sample_histogram(s, cfg);
  CHECK(total_variation(q, configuration_probabilities(s)) < 0.01);
}

TEST_CASE("traces are kept on request") {
  auto cfg = small_config(1);
  cfg.sweeps = 110;
  cfg.burnin = 10;
  cfg.thin = 5;
  cfg.chains = 4;
  cfg.keep_traces = true;
  const auto e = sample_expectation(nearest(8, 0.1), EndpointSquare{}, cfg);
  REQUIRE(e.traces.size() == 4);
  CHECK(e.traces[0].size() == 20);
  CHECK(e.n_samples == 80);
}

TEST_CASE("integrated autocorrelation time") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> iid(100000), ar(100000);
  double x = 0.0;
  for (std::size_t i = 0; i < iid.size(); ++i) {
    iid[i] = g(rng);
    x = 0.9 * x + g(rng);
    ar[i] = x;
  }
  CHECK(integrated_autocorrelation_time(iid) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(integrated_autocorrelation_time(ar) == doctest::Approx(19.0).epsilon(0.15));
}

TEST_CASE("total variation") {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  CHECK(total_variation(p, q) == doctest::Approx(0.25));
  CHECK_THROWS_AS(total_variation(p, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("scaling sweep at zero coupling is diffusive") {
  auto cfg = small_config(8);
  cfg.sweeps = 3000;
  const std::vector<int> horizons{8, 16, 32, 64};
  const auto sw = msd_scaling_sweep(PairPotential::power_law(2, 1.5), 0.0, horizons, cfg);
  CHECK(sw.points.size() == 4);
  CHECK(std::abs(sw.slope - 1.0) <= 3.0 * sw.slope_std_error);
  CHECK(sw.label == "DIAGNOSTIC");
  const std::vector<int> bad{8, 12};
  CHECK_THROWS_AS(msd_scaling_sweep(PairPotential::power_law(2, 1.5), 0.0, bad, cfg), DomainError);
}

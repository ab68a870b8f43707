#include <omp.h>

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "repwalk/errors.hpp"
#include "repwalk/exact_oracle.hpp"
#include "repwalk/reference.hpp"
#include "test_support.hpp"

using namespace repwalk;

namespace {

GibbsSpec nearest(int horizon, double alpha) {
  GibbsSpec s;
  s.horizon = horizon;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST_CASE("frozen two- and three-step values") {
  CHECK(expectation(nearest(2, 0.5), EndpointSquare{}).value == doctest::Approx(3.523188311911530).epsilon(1e-13));
  CHECK(pair_equal_prob(nearest(2, 0.5), 1) == doctest::Approx(0.880797077977882).epsilon(1e-13));
  CHECK(window_all_equal_prob(nearest(3, 0.5), 1, 3) == doctest::Approx(0.775803492574376).epsilon(1e-13));
  const auto s4 = nearest(4, 0.25);
  CHECK(expectation(s4, EndpointSquare{}).value == doctest::Approx(7.824284344832781).epsilon(1e-13));
  CHECK(msd_per_step(s4) == doctest::Approx(1.956071086208195).epsilon(1e-13));
}

TEST_CASE("free walk") {
  for (int t : {1, 5, 10}) {
    const auto s = nearest(t, 0.0);
    const auto r = expectation(s, EndpointSquare{});
    CHECK(r.value == doctest::Approx(t).epsilon(1e-14));
    CHECK(r.log_partition == doctest::Approx(0.0));
    CHECK(r.config_count == (std::uint64_t{1} << t));
  }
  CHECK(std::abs(expectation(nearest(6, 0.0), Monomial{{{2, 0, 1}, {5, 0, 1}}}).value) < 1e-15);
}

TEST_CASE("odd observables vanish for even potentials") {
  GibbsSpec s;
  s.horizon = 7;
  s.alpha = 0.8;
  s.potential = PairPotential::power_law(4, 2.0);
  CHECK(std::abs(expectation(s, EndpointCoordinate{0}).value) < 1e-12);
}

TEST_CASE("enumeration matches the serial reference on random specs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto spec = testing::random_spec(rng, 12);
    const std::vector<Observable> obs{EndpointSquare{}, EndpointCoordinate{0}, Monomial{{{1, 0, 1}, {2, 0, 1}}}};
    const auto fast = expectations(spec, obs);
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const auto ref = reference::expectation(spec, obs[i]);
      CHECK(testing::close_rel(fast[i].value, ref.value, 1e-10));
      CHECK(testing::close_rel(fast[i].log_partition, ref.log_partition, 1e-10));
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  GibbsSpec s;
  s.horizon = 14;
  s.alpha = 0.3;
  s.potential = PairPotential::power_law(2, 1.5);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = expectation(s, EndpointSquare{});
  omp_set_num_threads(4);
  const auto four = expectation(s, EndpointSquare{});
  omp_set_num_threads(saved);
  CHECK(one.value == four.value);
  CHECK(one.log_partition == four.log_partition);
}

TEST_CASE("configuration probabilities") {
  GibbsSpec s = nearest(5, 0.4);
  const auto p = configuration_probabilities(s);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const EnergyFunctional f(s);
  const double e0 = f.energy(SpinPath::from_bits(1, 5, 1.0, 0));
  const double e7 = f.energy(SpinPath::from_bits(1, 5, 1.0, 7));
  CHECK(p[7] / p[0] == doctest::Approx(std::exp(0.4 * (e7 - e0))));
}

TEST_CASE("capacity and shape errors") {
  GibbsSpec s = nearest(25, 0.1);
  CHECK_THROWS_AS(expectation(s, EndpointSquare{}), CapacityError);
  CHECK_THROWS_AS(expectation(nearest(4, 0.1), EndpointCoordinate{1}), DomainError);
  CHECK_THROWS_AS(pair_equal_prob(nearest(4, 0.1), 4), DomainError);
}

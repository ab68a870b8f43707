#include <random>

#include "doctest.h"
#include "repwalk/errors.hpp"
#include "repwalk/model.hpp"
#include "repwalk/reference.hpp"
#include "test_support.hpp"

using namespace repwalk;

TEST_CASE("power-law energy of the straight path") {
  GibbsSpec s;
  s.horizon = 3;
  s.potential = PairPotential::power_law(2, 2.0);
  CHECK(energy(SpinPath(1, 3, 1.0), s) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("coefficient table evaluation") {
  CoefficientTable t;
  t.q = 2;
  t.coeffs[{1, 2}] = 1.0;
  t.coeffs[{2, 3}] = 0.5;
  const auto w = PairPotential::coefficient_table(t);
  const double z[2] = {1.0, 2.0};
  CHECK(w.evaluate(z, 2) == doctest::Approx(5.0));
  CHECK(w.evaluate(z, 3) == doctest::Approx(12.5));
  CHECK(w.evaluate(z, 1) == 0.0);
  CHECK(w.range() == 3);
  CHECK(w.is_even());
  CHECK_THROWS_AS(w.evaluate(z, 0), DomainError);
}

TEST_CASE("odd q is not even") {
  CoefficientTable t;
  t.q = 1;
  t.coeffs[{1, 2}] = 1.0;
  CHECK_FALSE(PairPotential::coefficient_table(t).is_even());
}

TEST_CASE("potential construction guards") {
  CoefficientTable t;
  t.coeffs[{1, 2}] = -0.5;
  CHECK_THROWS_AS(PairPotential::coefficient_table(t), DomainError);
  CHECK(PairPotential::coefficient_table(t, true).has_negative_coefficients());
  CHECK_THROWS_AS(PairPotential::power_law(3, 1.0), DomainError);
}

TEST_CASE("quadratic weights") {
  const auto w = PairPotential::nearest_quadratic(0.7).quadratic_weights(4);
  REQUIRE(w);
  CHECK((*w)[2] == 0.7);
  CHECK((*w)[1] == 0.0);
  CoefficientTable quartic;
  quartic.coeffs[{2, 2}] = 1.0;
  CHECK_FALSE(PairPotential::coefficient_table(quartic).quadratic_weights(4));
  CHECK(PairPotential::power_law(2, 1.5).quadratic_weights(4));
  CHECK_FALSE(PairPotential::power_law(4, 1.5).quadratic_weights(4));
}

TEST_CASE("spec validation") {
  GibbsSpec s;
  s.horizon = -1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.horizon = 4;
  s.interaction_set = std::vector<PairIndex>{{0, 5}};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.interaction_set = std::vector<PairIndex>{{0, 4}};
  CHECK_NOTHROW(s.validate());
  s.dimension = kMaxDimension + 1;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("spin path encoding and flips") {
  const auto p = SpinPath::from_bits(2, 3, 0.5, 0b101101);
  CHECK(p.bits() == 0b101101);
  CHECK(p.sign(1, 0) == 1);
  CHECK(p.sign(1, 1) == -1);
  auto q = p;
  q.flip(2, 0);
  CHECK(q.sign(2, 0) == -p.sign(2, 0));
  CHECK(q.position(3, 0) == doctest::Approx(p.position(3, 0) - 2.0 * p.increment(2, 0)));
  CHECK(q.position(1, 0) == p.position(1, 0));
  const auto n = p.negated();
  CHECK(n.position(3, 1) == -p.position(3, 1));
}

TEST_CASE("energy matches the naive pair sum and flip deltas match differences") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = testing::random_spec(rng, 12);
    const EnergyFunctional f(spec);
    const auto bits = rng() & ((std::uint64_t{1} << spec.spin_count()) - 1);
    auto path = SpinPath::from_bits(spec.dimension, spec.horizon, spec.amplitude, bits);
    const double e = f.energy(path);
    CHECK(testing::close_rel(e, reference::naive_energy(path, spec), 1e-12));
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.horizon));
    const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(spec.dimension));
    const double d = f.delta_flip(path, k, p);
    path.flip(k, p);
    CHECK(testing::close_rel(e + d, f.energy(path), 1e-11));
  }
}

TEST_CASE("all pairs") {
  const auto pairs = all_pairs(3);
  CHECK(pairs.size() == 6);
  CHECK(pairs.front() == PairIndex{0, 1});
  CHECK(pairs.back() == PairIndex{2, 3});
}

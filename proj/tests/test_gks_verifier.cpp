#include <cmath>

#include "doctest.h"
#include "repwalk/errors.hpp"
#include "repwalk/gks_verifier.hpp"

using namespace repwalk;

namespace {

GibbsSpec linear(int horizon, double alpha) {
  CoefficientTable t;
  t.q = 1;
  t.coeffs[{1, 2}] = 1.0;
  GibbsSpec s;
  s.horizon = horizon;
  s.alpha = alpha;
  s.potential = PairPotential::coefficient_table(t);
  return s;
}

}  // namespace

TEST_CASE("gks pair certificate") {
  GibbsSpec s;
  s.horizon = 6;
  s.alpha = 0.7;
  s.potential = PairPotential::power_law(2, 1.0);
  const auto c = check_gks_pair(s, Monomial{{{1, 0, 1}, {4, 0, 1}}}, Monomial{{{2, 0, 1}, {6, 0, 1}}});
  CHECK(c.pass);
  CHECK(c.slack > 0.0);
  CHECK(c.spec_hash == spec_hash(s));
  CHECK(c.replay.contains("spec"));
  CHECK(c.replay.contains("f"));
  CHECK(to_json(c).at("check") == "gks_pair");
}

TEST_CASE("randomized suites pass") {
  const auto pairs = run_gks_pair_suite(60, 1);
  CHECK(pairs.certificates.size() == 60);
  CHECK(pairs.pass());
  const auto omit = run_omission_suite(40, 2);
  CHECK(omit.certificates.size() == 40);
  CHECK(omit.pass());
}

TEST_CASE("omission check requires nesting") {
  GibbsSpec big;
  big.horizon = 4;
  big.alpha = 0.5;
  big.interaction_set = std::vector<PairIndex>{{0, 2}, {1, 3}};
  GibbsSpec sub = big;
  sub.interaction_set = std::vector<PairIndex>{{0, 2}};
  const auto c = check_omission_monotonicity(big, sub, EndpointSquare{});
  CHECK(c.pass);
  sub.interaction_set = std::vector<PairIndex>{{2, 4}};
  CHECK_THROWS_AS(check_omission_monotonicity(big, sub, EndpointSquare{}), ContractError);
  sub = big;
  sub.alpha = 0.4;
  CHECK_THROWS_AS(check_omission_monotonicity(big, sub, EndpointSquare{}), ContractError);
}

TEST_CASE("phi expansion is exact") {
  const auto p = expand_phi_power_minus_square(2, 4);
  CHECK(p.terms().size() == 2);
  CHECK(p.coefficient(0) == Rational(1));
  CHECK(p.coefficient(0b11) == Rational(1));
  const auto q = expand_phi_power_minus_square(3, 6);
  CHECK(q.all_coefficients_nonnegative());
  const std::vector<Rational> ones(3, Rational(1));
  CHECK(q.evaluate(ones) == Rational(27 - 3));
  CHECK_THROWS_AS(expand_phi_power_minus_square(13, 4), CapacityError);
  CHECK_THROWS_AS(expand_phi_power_minus_square(4, 5), CapacityError);
}

TEST_CASE("ballistic drift") {
  const auto two = check_ballistic(linear(2, 1.0));
  CHECK(two.mean_endpoint == doctest::Approx(1.523188311911530).epsilon(1e-13));
  const auto eight = check_ballistic(linear(8, 1.0));
  CHECK(eight.per_step == doctest::Approx(0.913419224045804).epsilon(1e-13));
  CHECK(eight.bound == doctest::Approx(std::tanh(1.0)));
  CHECK(eight.pass);
  GibbsSpec even;
  even.horizon = 4;
  CHECK_THROWS_AS(check_ballistic(even), DomainError);
}

TEST_CASE("dimension reduction for a coordinate-separable potential") {
  GibbsSpec s;
  s.dimension = 2;
  s.horizon = 5;
  s.alpha = 0.6;
  const auto c = check_dim_reduction(s);
  CHECK(std::abs(c.slack) < 1e-10);
  CHECK(c.pass);
}

TEST_CASE("signed potentials") {
  CoefficientTable t;
  t.q = 1;
  t.coeffs[{1, 1}] = -1.0;
  t.coeffs[{1, 2}] = 0.2;
  const auto pot = PairPotential::coefficient_table(t, true);
  const auto adm = signed_potential_admissibility(pot, 4, 1.0);
  CHECK_FALSE(adm.admissible);
  CHECK(adm.min_coefficient < 0.0);
  GibbsSpec s;
  s.horizon = 4;
  s.alpha = 0.5;
  s.potential = pot;
  CHECK_THROWS_AS(check_gks_pair(s, Monomial{{{1, 0, 1}}}, Monomial{{{2, 0, 1}}}), ContractError);
  CHECK(signed_potential_admissibility(PairPotential::nearest_quadratic(), 6, 1.0).admissible);
}

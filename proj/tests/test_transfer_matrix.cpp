#include <cmath>

#include "doctest.h"
#include "repwalk/errors.hpp"
#include "repwalk/exact_oracle.hpp"
#include "repwalk/transfer_matrix.hpp"

using namespace repwalk;

TEST_CASE("ising mapping and two-point function") {
  const auto p = ising_params_for_nearest_quadratic(0.25);
  CHECK(p.beta_eff == doctest::Approx(0.5));
  CHECK(ising_two_point(p, 2) == doctest::Approx(std::tanh(0.5) * std::tanh(0.5)));
  CHECK(ising_two_point({0.5}, 0) == 1.0);
  CHECK(finite_chain_msd(p, 4) == doctest::Approx(7.824284344832781).epsilon(1e-14));
}

TEST_CASE("susceptibility equals exp(2 beta)") {
  CHECK(susceptibility({1.0}) == doctest::Approx(7.38905609893065).epsilon(1e-12));
  for (double beta : {0.0, 1.0, 5.0, 12.5, 20.0}) {
    const double chi = susceptibility({beta});
    CHECK(std::isfinite(chi));
    CHECK(chi == doctest::Approx(std::exp(2.0 * beta)).epsilon(1e-12));
  }
}

TEST_CASE("banded operator matches exact enumeration") {
  CoefficientTable t;
  t.q = 1;
  t.coeffs[{1, 1}] = 0.2;
  t.coeffs[{1, 2}] = 0.5;
  t.coeffs[{2, 3}] = 0.3;
  t.coeffs[{1, 4}] = 0.1;
  const PairPotential potentials[] = {PairPotential::nearest_quadratic(), PairPotential::coefficient_table(t)};
  for (const auto& pot : potentials)
    for (int horizon = 1; horizon <= 11; ++horizon) {
      GibbsSpec s;
      s.horizon = horizon;
      s.alpha = 0.4;
      s.amplitude = 0.8;
      s.potential = pot;
      const double exact = expectation(s, EndpointSquare{}).value;
      CHECK(banded_msd(pot, 0.4, horizon, 0.8) == doctest::Approx(exact).epsilon(1e-11));
    }
}

TEST_CASE("banded operator stays finite at long horizons") {
  const double m = banded_msd(PairPotential::nearest_quadratic(), 3.0, 1000000);
  CHECK(std::isfinite(m));
  CHECK(m == doctest::Approx(finite_chain_msd({6.0}, 1000000)).epsilon(1e-8));
}

TEST_CASE("banded operator guards") {
  CoefficientTable wide;
  wide.coeffs[{1, 5}] = 1.0;
  CHECK_THROWS_AS(BandedTransferOperator(PairPotential::coefficient_table(wide), 0.1), CapacityError);
  CHECK_THROWS_AS(BandedTransferOperator(PairPotential::power_law(2, 2.0), 0.1), CapacityError);
  CHECK_THROWS_AS(banded_msd(PairPotential::nearest_quadratic(), 0.1, 0), CapacityError);
}

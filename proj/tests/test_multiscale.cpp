#include <cmath>

#include "doctest.h"
#include "repwalk/errors.hpp"
#include "repwalk/multiscale.hpp"

using namespace repwalk;

TEST_CASE("critical constants") {
  CHECK(c_crit() == doctest::Approx(0.973815189000484).epsilon(1e-14));
  CHECK(c_crit() > 0.0);
  CHECK(c_crit() < 1.0);
  CHECK(theorem2_exponent() == 1.0 + c_crit());
  CHECK(alpha_star(0.5) == doctest::Approx(0.623225240140231).epsilon(1e-13));
  CHECK(alpha_star(0.9) == doctest::Approx(2.457833269702932).epsilon(1e-13));
  CHECK_THROWS_AS(alpha_star(0.0), DomainError);
  CHECK_THROWS_AS(alpha_star(c_crit()), DomainError);
  CHECK(saturated_gain(c_crit()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("recursion values and the rescaled variable") {
  const auto s = iterate_recursion(2.0, 0.5, 10);
  REQUIRE(s.size() == 10);
  CHECK(s[0].n == 1);
  CHECK(s[0].v == 1.0);
  CHECK(s[1].v == doctest::Approx(1.888385561585661).epsilon(1e-14));
  CHECK(s[2].v == doctest::Approx(3.692231926797776).epsilon(1e-14));
  for (const auto& st : s) CHECK(st.y == doctest::Approx(2.0 * std::pow(2.0, -0.5 * st.n) * st.v).epsilon(1e-12));
  CHECK_THROWS_AS(iterate_recursion(2.0, 0.5, 10001), CapacityError);
  CHECK_THROWS_AS(iterate_recursion(-1.0, 0.5, 10), DomainError);
}

TEST_CASE("log domain beyond double range") {
  const auto s = iterate_recursion(5.0, 0.1, 5000);
  CHECK(s.back().log_domain);
  CHECK(std::isfinite(s.back().log_v));
  const double step = (s.back().log_v - s[s.size() - 2].log_v) / std::log(2.0);
  CHECK(step == doctest::Approx(c_crit()).epsilon(1e-12));
}

TEST_CASE("phase classification") {
  const double a = alpha_star(0.5);
  CHECK(classify_phase(1.01 * a, 0.5).classification == Phase::divergent);
  CHECK(classify_phase(0.99 * a, 0.5).classification == Phase::bounded);
  CHECK(classify_phase(a, 0.5).classification == Phase::boundary);
  const auto d = classify_phase(2.0, 0.3);
  CHECK(d.iteration_consistent);
  CHECK(d.ratio == doctest::Approx(c_crit()).epsilon(1e-9));
  CHECK(to_string(Phase::divergent) == "divergent");
}

TEST_CASE("unclamped recursion grows faster") {
  const auto clamped = iterate_recursion(3.0, 0.5, 30, true);
  const auto raw = iterate_recursion(3.0, 0.5, 30, false);
  CHECK(raw.back().log_v >= clamped.back().log_v);
}

TEST_CASE("effective coupling exponent") {
  const auto e = effective_coupling_exponent(2, 4.5);
  CHECK(e.s == doctest::Approx(2.5));
  CHECK(e.xi_c == doctest::Approx(4.0));
  CHECK(e.summable);
  CHECK(e.label == "HEURISTIC");
  CHECK_FALSE(effective_coupling_exponent(2, 1.5).summable);
  CHECK_THROWS_AS(effective_coupling_exponent(3, 2.0), DomainError);
}

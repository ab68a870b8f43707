#include "repwalk/gks_verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

constexpr int kMaxCertifiedSpins = 20;

void require_certifiable(const GibbsSpec& spec) {
  spec.validate();
  if (spec.spin_count() > kMaxCertifiedSpins)
    throw CapacityError("GKS checks need d*T <= " + std::to_string(kMaxCertifiedSpins));
  if (spec.potential.has_negative_coefficients()) {
    if (spec.dimension != 1)
      throw ContractError("signed potentials are only admitted in d = 1 after a coefficient expansion");
    const auto adm = signed_potential_admissibility(spec.potential, spec.horizon, spec.amplitude);
    if (!adm.admissible)
      throw ContractError("signed potential produces a negative p-spin coupling (" +
                          format_double(adm.min_coefficient) + ")");
  }
}

Certificate make_certificate(std::string check, const GibbsSpec& spec, double slack) {
  Certificate c;
  c.check = std::move(check);
  c.spec_hash = spec_hash(spec);
  c.slack = slack;
  c.pass = slack >= -kSlackTolerance;
  c.replay = Json{{"spec", to_json(spec)}};
  return c;
}

std::set<PairIndex> pair_set(const GibbsSpec& s) {
  const auto v = s.interaction_set ? *s.interaction_set : all_pairs(s.horizon);
  return {v.begin(), v.end()};
}

Monomial random_monomial(std::mt19937_64& rng, int dimension, int horizon, int max_degree, bool even_degree) {
  std::uniform_int_distribution<int> step(1, horizon);
  std::uniform_int_distribution<int> coord(0, dimension - 1);
  std::uniform_int_distribution<int> deg(1, max_degree);
  int n = deg(rng);
  if (even_degree && n % 2 != 0) n = n == max_degree ? n - 1 : n + 1;
  if (n < 1) n = 2;
  Monomial m;
  for (int i = 0; i < n; ++i) m.factors.push_back({step(rng), coord(rng), 1});
  return multiply(m, Monomial{});
}

PairPotential random_table(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> qd(1, 3);
  std::uniform_real_distribution<double> cd(0.0, 1.0);
  std::bernoulli_distribution keep(0.5);
  CoefficientTable t;
  t.q = qd(rng);
  t.coeffs[{1, 2}] = 0.05 + 0.95 * cd(rng);
  for (int i = 1; i <= 2; ++i)
    for (int lag = 1; lag <= 4; ++lag)
      if (!(i == 1 && lag == 2) && keep(rng)) t.coeffs[{i, lag}] = cd(rng);
  return PairPotential::coefficient_table(std::move(t));
}

void tally(SuiteReport& rep, Certificate c) {
  if (!c.pass) ++rep.failures;
  rep.min_slack = rep.certificates.empty() ? c.slack : std::min(rep.min_slack, c.slack);
  rep.certificates.push_back(std::move(c));
}

}  // namespace

Json to_json(const Certificate& c) {
  return Json{{"check", c.check}, {"spec_hash", c.spec_hash}, {"slack", c.slack}, {"pass", c.pass}, {"replay", c.replay}};
}

Certificate check_gks_pair(const GibbsSpec& spec, const Monomial& f, const Monomial& g) {
  require_certifiable(spec);
  const std::array<Observable, 3> obs{multiply(f, g), f, g};
  const auto r = expectations(spec, obs);
  auto c = make_certificate("gks_pair", spec, r[0].value - r[1].value * r[2].value);
  c.replay["f"] = to_json(Observable{f});
  c.replay["g"] = to_json(Observable{g});
  return c;
}

Certificate check_omission_monotonicity(const GibbsSpec& spec_m, const GibbsSpec& spec_sub, const Observable& f) {
  require_certifiable(spec_m);
  require_certifiable(spec_sub);
  if (spec_m.dimension != spec_sub.dimension || spec_m.horizon != spec_sub.horizon ||
      spec_m.amplitude != spec_sub.amplitude || spec_m.alpha != spec_sub.alpha ||
      to_json(spec_m.potential) != to_json(spec_sub.potential))
    throw ContractError("omission check: specs must share base walk, coupling and potential");
  const auto big = pair_set(spec_m);
  for (const auto& p : pair_set(spec_sub))
    if (!big.count(p)) throw ContractError("omission check: interaction sets are not nested");
  for (const auto& w : spec_sub.window_terms)
    if (std::find(spec_m.window_terms.begin(), spec_m.window_terms.end(), w) == spec_m.window_terms.end())
      throw ContractError("omission check: window terms are not nested");

  const double em = expectation(spec_m, f).value;
  const double es = expectation(spec_sub, f).value;
  auto c = make_certificate("omission_monotonicity", spec_m, em - es);
  c.replay["spec_sub"] = to_json(spec_sub);
  c.replay["f"] = to_json(f);
  return c;
}

SpinPolynomial<Rational> expand_phi_power_minus_square(int n, int gamma) {
  if (n < 1 || n > 12 || gamma < 2 || gamma > 8 || gamma % 2 != 0)
    throw CapacityError("expand_phi_power_minus_square: budget is N <= 12, even gamma <= 8");
  const auto s = SpinPolynomial<Rational>::spin_sum(n);
  auto phi_gamma = s.pow(gamma);
  Rational scale(1);
  for (int k = 0; k < gamma / 2; ++k) scale /= n;
  phi_gamma *= scale;
  auto phi_sq = s.pow(2);
  phi_sq *= Rational(1, n);
  phi_gamma -= phi_sq;
  return phi_gamma;
}

BallisticReport check_ballistic(const GibbsSpec& spec) {
  require_certifiable(spec);
  if (spec.potential.is_power_law()) throw DomainError("check_ballistic needs a coefficient table with odd q");
  const auto& t = spec.potential.table();
  const bool odd_l = std::any_of(t.coeffs.begin(), t.coeffs.end(), [](const auto& kv) {
    return kv.first.second == 2 && kv.first.first % 2 == 1 && kv.second > 0.0;
  });
  if (t.q % 2 == 0 || !odd_l) throw DomainError("check_ballistic needs odd q and an odd l with c_{l,2} > 0");

  BallisticReport rep;
  rep.mean_endpoint = expectation(spec, EndpointCoordinate{0}).value;
  rep.per_step = rep.mean_endpoint / spec.horizon;
  const bool pure_linear = t.q == 1 && t.coeffs.size() == 1 && t.coeffs.begin()->first == std::pair{1, 2};
  if (pure_linear) {
    const double a = spec.amplitude;
    rep.bound = a * std::tanh(spec.alpha * t.coeffs.begin()->second * a);
    rep.pass = rep.per_step >= rep.bound - kSlackTolerance;
  } else {
    rep.bound = 0.0;
    rep.pass = spec.alpha == 0.0 ? std::abs(rep.per_step) <= kSlackTolerance : rep.per_step > 0.0;
  }
  return rep;
}

Certificate check_dim_reduction(const GibbsSpec& spec_d) {
  require_certifiable(spec_d);
  if (spec_d.dimension < 2) throw DomainError("check_dim_reduction needs d >= 2");
  GibbsSpec one = spec_d;
  one.dimension = 1;
  const double ed = expectation(spec_d, EndpointSquare{}).value;
  const double e1 = expectation(one, EndpointSquare{}).value;
  return make_certificate("dim_reduction", spec_d, ed - spec_d.dimension * e1);
}

SuiteReport run_gks_pair_suite(int instances, std::uint64_t seed, int max_spins) {
  SuiteReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 2);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  for (int n = 0; n < instances; ++n) {
    GibbsSpec spec;
    spec.dimension = dim(rng);
    std::uniform_int_distribution<int> horizon(2, max_spins / spec.dimension);
    spec.horizon = horizon(rng);
    spec.alpha = alpha(rng);
    spec.potential = random_table(rng);
    const auto f = random_monomial(rng, spec.dimension, spec.horizon, 3, false);
    const auto g = random_monomial(rng, spec.dimension, spec.horizon, 3, false);
    tally(rep, check_gks_pair(spec, f, g));
  }
  return rep;
}

SuiteReport run_omission_suite(int instances, std::uint64_t seed, int max_horizon) {
  SuiteReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> horizon(2, max_horizon);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < instances; ++n) {
    GibbsSpec big;
    big.horizon = horizon(rng);
    big.alpha = alpha(rng);
    big.potential = random_table(rng);
    const double keep_big = 0.5 + 0.5 * unit(rng);
    const double keep_sub = unit(rng);
    std::vector<PairIndex> m, msub;
    for (const auto& p : all_pairs(big.horizon)) {
      if (unit(rng) < keep_big) {
        m.push_back(p);
        if (unit(rng) < keep_sub) msub.push_back(p);
      }
    }
    GibbsSpec sub = big;
    big.interaction_set = m;
    sub.interaction_set = msub;
    Observable f = random_monomial(rng, 1, big.horizon, 4, true);
    tally(rep, check_omission_monotonicity(big, sub, f));
  }
  return rep;
}

AdmissibilityReport signed_potential_admissibility(const PairPotential& potential, int horizon, double amplitude) {
  if (potential.is_power_law()) return {true, 0.0, 0};
  if (horizon < 1 || horizon > 12) throw CapacityError("admissibility expansion budget is T <= 12");
  const auto& t = potential.table();
  for (const auto& [key, c] : t.coeffs)
    if (key.first * t.q > 8) throw CapacityError("admissibility expansion budget is q*i <= 8");

  SpinPolynomial<double> total(horizon);
  for (int i = 0; i < horizon; ++i)
    for (int j = i + 1; j <= horizon; ++j) {
      const int lag = j - i;
      SpinPolynomial<double> window(horizon);
      for (int k = i + 1; k <= j; ++k) window.add_term(std::uint32_t{1} << (k - 1), amplitude);
      for (const auto& [key, c] : t.coeffs) {
        if (key.second != lag || c == 0.0) continue;
        auto term = window.pow(t.q * key.first);
        term *= c;
        total += term;
      }
    }
  AdmissibilityReport rep;
  rep.monomials = total.terms().size();
  rep.min_coefficient = total.min_nonconstant_coefficient();
  rep.admissible = rep.min_coefficient >= -1e-12;
  return rep;
}

}  // namespace repwalk

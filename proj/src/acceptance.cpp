#include "repwalk/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "repwalk/errors.hpp"
#include "repwalk/exact_oracle.hpp"
#include "repwalk/gks_verifier.hpp"
#include "repwalk/mcmc_sampler.hpp"
#include "repwalk/multiscale.hpp"
#include "repwalk/tilt_analysis.hpp"
#include "repwalk/transfer_matrix.hpp"

namespace repwalk {
namespace {

constexpr std::uint64_t kSeed = 20240517;

struct Check {
  bool pass = true;
  std::ostringstream detail;
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

GibbsSpec nearest_spec(int horizon, double alpha) {
  GibbsSpec s;
  s.horizon = horizon;
  s.alpha = alpha;
  s.potential = PairPotential::nearest_quadratic();
  return s;
}

Monomial pair_monomial(int i, int j) { return Monomial{{{i, 0, 1}, {j, 0, 1}}}; }

void oracle_closed_forms(Check& c) {
  double worst = 0.0;
  for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
    const std::vector<Observable> obs{EndpointSquare{}, pair_monomial(1, 2), PairEqualIndicator{1, 2, 0}};
    const auto r = expectations(nearest_spec(2, alpha), obs);
    const double t = std::tanh(2.0 * alpha);
    worst = std::max({worst, std::abs(r[0].value - (2.0 + 2.0 * t)), std::abs(r[1].value - t),
                      std::abs(r[2].value - 1.0 / (1.0 + std::exp(-4.0 * alpha)))});
    if (alpha == 0.5) worst = std::max(worst, std::abs(r[0].value - 3.523188311911530));
  }
  c.pass = worst <= 1e-10;
  c.detail << "max abs error " << fmt(worst);
}

void ising_tightness(Check& c) {
  double worst = 0.0;
  for (int ia = 1; ia <= 10; ++ia) {
    const double alpha = 0.1 * ia;
    for (int t = 2; t <= 12; ++t) {
      const double exact = expectation(nearest_spec(t, alpha), EndpointSquare{}).value;
      const double chain = finite_chain_msd(ising_params_for_nearest_quadratic(alpha), t);
      const double banded = banded_msd(PairPotential::nearest_quadratic(), alpha, t);
      worst = std::max({worst, std::abs(chain - exact) / exact, std::abs(banded - exact) / exact});
    }
  }
  double chi_worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double beta = 0.1 * i;
    const double chi = susceptibility({beta});
    chi_worst = std::max(chi_worst, std::abs(chi - std::exp(2.0 * beta)) / std::exp(2.0 * beta));
  }
  c.pass = worst <= 1e-8 && chi_worst <= 1e-12;
  c.detail << "msd rel err " << fmt(worst) << ", chi rel err " << fmt(chi_worst);
}

void short_range_growth(Check& c) {
  const std::int64_t horizon = 100000;
  double min_margin = 1e300;
  for (int i = 0; i <= 8; ++i) {
    const double alpha = 1.0 + 0.25 * i;
    const double per_step = banded_msd(PairPotential::nearest_quadratic(), alpha, horizon) / horizon;
    const double margin = std::log(per_step) - (4.0 * alpha - 2.0);
    min_margin = std::min(min_margin, margin);
  }
  c.pass = min_margin >= 0.0;
  c.detail << "min log-margin " << fmt(min_margin) << " over alpha in [1,3]";
}

void gks_suites(Check& c) {
  const auto pairs = run_gks_pair_suite(500, kSeed, 10);
  const auto omit = run_omission_suite(200, kSeed + 1, 8);
  c.pass = pairs.pass() && omit.pass() && pairs.certificates.size() == 500 && omit.certificates.size() == 200;
  c.detail << "pair min slack " << fmt(pairs.min_slack) << " (" << pairs.failures << " fail), omission min slack "
           << fmt(omit.min_slack) << " (" << omit.failures << " fail)";
}

void ballistic(Check& c) {
  CoefficientTable t;
  t.q = 1;
  t.coeffs[{1, 2}] = 1.0;
  GibbsSpec s;
  s.horizon = 8;
  s.alpha = 1.0;
  s.potential = PairPotential::coefficient_table(t);
  const auto rep = check_ballistic(s);
  c.pass = rep.pass && rep.per_step >= std::tanh(1.0) - 1e-9;
  c.detail << "E[x_T]/T = " << fmt(rep.per_step, 10) << " vs tanh(1) = " << fmt(std::tanh(1.0), 10);
}

void tilt_bound(Check& c) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double min_margin = 1e300;
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(unit(rng) * 6.0) % 6;
    std::vector<SymmetricMeasure::Atom> half(static_cast<std::size_t>(k));
    const double zero = unit(rng) < 0.3 ? 0.5 * unit(rng) : 0.0;
    double wsum = 0.0;
    for (auto& a : half) {
      a.x = 0.05 + 3.0 * unit(rng);
      a.w = 0.05 + unit(rng);
      wsum += 2.0 * a.w;
    }
    for (auto& a : half) a.w *= (1.0 - zero) / wsum;
    double total = zero;
    for (const auto& a : half) total += 2.0 * a.w;
    for (auto& a : half) a.w /= total;
    const auto theta = SymmetricMeasure::from_half(half, zero / total);
    const double v = theta.second_moment();
    const double beta = (2.0 / v) * (1.0 - unit(rng));
    const double margin = tilted_cross_moment(theta, beta).value - v * std::tanh(beta * v);
    min_margin = std::min(min_margin, margin);
    if (margin < -1e-9) ++failures;
  }
  c.pass = failures == 0;
  c.detail << "1000 measures, min margin " << fmt(min_margin) << ", " << failures << " violations";
}

void four_point_extremality(Check& c) {
  double worst_value = 0.0;
  double worst_arg = 0.0;  // in units of the grid resolution
  for (double v : {0.5, 1.0, 1.5})
    for (double beta : {0.5, 1.0, 2.0 / v}) {
      const double h = 1e-3 * v;
      const auto mn = minimize_four_point(v, beta, h);
      worst_value = std::max(worst_value, std::abs(mn.value - v * std::tanh(beta * v)));
      worst_arg = std::max({worst_arg, std::abs(mn.argmin.a - v) / h, std::abs(mn.argmin.b - v) / h});
    }
  c.pass = worst_value <= 1e-4 && worst_arg <= 2.0;
  c.detail << "max |min - V tanh(bV)| " << fmt(worst_value) << ", max argmin offset " << fmt(worst_arg) << " h";
}

void split_measure_chain(Check& c) {
  double min_slack = 1e300;
  bool ok = true;
  for (int horizon : {8, 16})
    for (double alpha : {0.5, 1.0}) {
      const auto rep = block_covariance_check(horizon, alpha, 0.5, 2);
      ok = ok && rep.pass && rep.slack >= -kSlackTolerance;
      min_slack = std::min(min_slack, rep.slack);
    }
  c.pass = ok;
  c.detail << "min slack " << fmt(min_slack) << " over T in {8,16}, alpha in {0.5,1}";
}

void recursion_constants(Check& c) {
  const double cc = c_crit();
  const double as = alpha_star(0.5);
  bool ok = std::abs(cc - 0.973818) <= 1e-5 && std::abs(as - 0.623225) <= 1e-5;
  ok = ok && theorem2_exponent() == 1.0 + cc;

  int wrong = 0;
  int slow = 0;
  int divergent = 0;
  for (int ic = 1; ic <= 20; ++ic) {
    const double cv = cc * ic / 21.0;
    for (int ia = 1; ia <= 20; ++ia) {
      const double alpha = 0.25 * ia;
      const auto pt = classify_phase(alpha, cv);
      const Phase analytic = alpha > alpha_star(cv) ? Phase::divergent : Phase::bounded;
      if (pt.classification != analytic || !pt.iteration_consistent) ++wrong;
      if (analytic != Phase::divergent) continue;
      ++divergent;
      const auto states = iterate_recursion(alpha, cv, 101);
      const double ratio = (states[100].log_v - states[99].log_v) / std::log(2.0);
      if (std::abs(ratio - cc) > 1e-6) ++slow;
    }
  }
  ok = ok && wrong == 0 && slow == 0;
  c.pass = ok;
  c.detail << "c_crit " << fmt(cc, 10) << ", alpha*(0.5) " << fmt(as, 10) << ", " << wrong
           << " misclassified of 400, " << slow << " of " << divergent << " divergent points off c_crit at n=100";
}

void mcmc_validation(Check& c) {
  bool ok = true;
  std::ostringstream& d = c.detail;

  CoefficientTable quartic;
  quartic.q = 2;
  quartic.coeffs[{2, 2}] = 0.2;
  quartic.coeffs[{1, 3}] = 0.3;
  GibbsSpec specs[3] = {nearest_spec(8, 0.25), nearest_spec(8, 0.2), nearest_spec(8, 0.4)};
  specs[1].potential = PairPotential::power_law(2, 1.5);
  specs[2].potential = PairPotential::coefficient_table(quartic);

  SamplerConfig cfg;
  cfg.sweeps = 200000;
  cfg.burnin = 2000;
  cfg.chains = 16;
  cfg.seed = kSeed;
  double worst_z = 0.0;
  for (const auto& s : specs) {
    const double exact = expectation(s, EndpointSquare{}).value;
    const auto est = sample_expectation(s, EndpointSquare{}, cfg);
    const double z = std::abs(est.mean - exact) / est.std_error;
    worst_z = std::max(worst_z, z);
    ok = ok && z <= 3.0;
  }
  d << "T=8 worst |z| " << fmt(worst_z);

  SamplerConfig hist = cfg;
  hist.sweeps = 625000 + 1000;
  hist.burnin = 1000;
  double worst_tv = 0.0;
  for (const auto& s : {specs[0], specs[1]}) {
    const auto emp = sample_histogram(s, hist);
    const double tv = total_variation(emp, configuration_probabilities(s));
    worst_tv = std::max(worst_tv, tv);
    ok = ok && tv <= 0.01;
  }
  d << ", TV " << fmt(worst_tv) << " (1e7 sweeps)";

  SamplerConfig big = cfg;
  big.sweeps = 4000;
  big.burnin = 400;
  const auto free_walk = sample_expectation(nearest_spec(256, 0.0), EndpointSquare{}, big);
  const double z0 = std::abs(free_walk.mean - 256.0) / free_walk.std_error;
  const auto coupled = sample_expectation(nearest_spec(256, 0.25), EndpointSquare{}, big);
  const double ref = finite_chain_msd({0.5}, 256);
  const double z1 = std::abs(coupled.mean - ref) / coupled.std_error;
  ok = ok && z0 <= 3.0 && z1 <= 3.0;
  d << ", T=256 alpha=0 |z| " << fmt(z0) << ", alpha=0.25 |z| " << fmt(z1);
  c.pass = ok;
}

void phi_expansion(Check& c) {
  int bad = 0;
  std::size_t monomials = 0;
  for (int n = 2; n <= 8; ++n)
    for (int gamma : {4, 6}) {
      const auto poly = expand_phi_power_minus_square(n, gamma);
      monomials += poly.terms().size();
      for (const auto& [mask, coeff] : poly.terms())
        if (coeff < Rational(0) || std::popcount(mask) % 2 != 0) ++bad;
    }
  c.pass = bad == 0;
  c.detail << monomials << " monomials checked, " << bad << " negative or odd";
}

struct Entry {
  const char* name;
  double budget;
  std::function<void(Check&)> fn;
};

const std::map<int, Entry>& registry() {
  static const std::map<int, Entry> r{
      {1, {"oracle closed forms", 1.0, oracle_closed_forms}},
      {2, {"ising chain tightness", 10.0, ising_tightness}},
      {3, {"short-range msd growth", 10.0, short_range_growth}},
      {4, {"gks randomized suites", 300.0, gks_suites}},
      {5, {"ballistic lower bound", 1.0, ballistic}},
      {6, {"tilted cross-moment bound", 60.0, tilt_bound}},
      {7, {"four-point extremality", 120.0, four_point_extremality}},
      {8, {"split-measure inequality chain", 120.0, split_measure_chain}},
      {9, {"recursion constants and exponent", 10.0, recursion_constants}},
      {10, {"mcmc validation", 900.0, mcmc_validation}},
      {11, {"phi power expansion certificate", 60.0, phi_expansion}},
  };
  return r;
}

}  // namespace

std::vector<int> select_criteria(const std::string& selector) {
  if (selector.empty() || selector == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  if (selector == "short-range") return {1, 2, 3};
  if (selector == "correlation") return {4, 5};
  if (selector == "long-range") return {6, 7, 8, 9, 11};
  if (selector == "mcmc") return {10};
  std::vector<int> ids;
  std::stringstream ss(selector);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || id < 1 || id > kCriterionCount)
      throw ValidationError("unknown acceptance selector '" + selector + "'");
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  if (ids.empty()) throw ValidationError("unknown acceptance selector '" + selector + "'");
  std::sort(ids.begin(), ids.end());
  return ids;
}

CriterionResult run_criterion(int id) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw ValidationError("no acceptance criterion " + std::to_string(id));
  CriterionResult res;
  res.id = id;
  res.name = it->second.name;
  res.budget_seconds = it->second.budget;
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->second.fn(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail << " error: " << e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.detail = c.detail.str();
  res.pass = c.pass && res.seconds <= res.budget_seconds;
  if (c.pass && !res.pass) res.detail += " (over runtime budget)";
  return res;
}

int run_acceptance(const std::string& selector, std::ostream& out) {
  std::vector<int> ids;
  try {
    ids = select_criteria(selector);
  } catch (const ValidationError& e) {
    out << e.what() << '\n';
    return 2;
  }
  int failed = 0;
  for (int id : ids) {
    const auto r = run_criterion(id);
    if (!r.pass) ++failed;
    char head[128];
    std::snprintf(head, sizeof head, "%s  [%2d] %-34s %8.3fs / %gs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds, r.budget_seconds);
    out << head << r.detail << '\n' << std::flush;
  }
  out << (failed == 0 ? "acceptance: all " : "acceptance: ") << (failed == 0 ? std::to_string(ids.size()) + " passed"
                                                                              : std::to_string(failed) + " of " +
                                                                                    std::to_string(ids.size()) +
                                                                                    " failed")
      << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace repwalk

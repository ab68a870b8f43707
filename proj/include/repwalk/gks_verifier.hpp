#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repwalk/exact_oracle.hpp"
#include "repwalk/model.hpp"
#include "repwalk/observable.hpp"
#include "repwalk/serialization.hpp"
#include "repwalk/spin_polynomial.hpp"

namespace repwalk {

/// One numerically certified inequality instance.
struct Certificate {
  std::string check;
  std::string spec_hash;
  double slack = 0.0;
  bool pass = false;
  /// Spec (and observables) serialized for replay; filled for every instance.
  Json replay;
};

Json to_json(const Certificate& c);

/// E[fg] - E[f] E[g] by exact enumeration (d*T <= 20).
Certificate check_gks_pair(const GibbsSpec& spec, const Monomial& f, const Monomial& g);

/// E^{P_M}[f] - E^{P_M'}[f] for M' = spec_sub's interaction set contained in
/// M = spec_m's. Everything else must coincide; otherwise ContractError.
Certificate check_omission_monotonicity(const GibbsSpec& spec_m, const GibbsSpec& spec_sub, const Observable& f);

/// Exact expansion of Phi^gamma - Phi^2, Phi = N^{-1/2} sum_j phi_j, with
/// phi_j^2 = 1. Budget: N <= 12, gamma <= 8, gamma even.
SpinPolynomial<Rational> expand_phi_power_minus_square(int n, int gamma);

struct BallisticReport {
  double mean_endpoint = 0.0;  ///< E[x_T^0]
  double per_step = 0.0;
  /// a tanh(alpha c a) for the pure linear potential W(z, 2) = c sum_p z^p, else 0.
  double bound = 0.0;
  bool pass = false;
};

/// Requires odd q and an odd l with c_{l,2} > 0.
BallisticReport check_ballistic(const GibbsSpec& spec);

/// E_d|x_T|^2 - d E_1[x_T^2] with the same potential evaluated in d = 1.
Certificate check_dim_reduction(const GibbsSpec& spec_d);

struct SuiteReport {
  std::vector<Certificate> certificates;
  std::size_t failures = 0;
  double min_slack = 0.0;
  bool pass() const { return failures == 0; }
};

/// Random coefficient tables (q in {1,2,3}, c_{i,t} in [0,1]), d*T <= max_spins,
/// and random monomials f, g of degree <= 3.
SuiteReport run_gks_pair_suite(int instances, std::uint64_t seed, int max_spins = 10);

/// Random nested interaction sets on T <= max_horizon with even monomials f.
SuiteReport run_omission_suite(int instances, std::uint64_t seed, int max_horizon = 8);

struct AdmissibilityReport {
  bool admissible = false;
  double min_coefficient = 0.0;
  std::size_t monomials = 0;
};

/// For signed coefficient tables on a fixed-amplitude walk (d = 1): expands
/// the total pair energy in spins and checks every non-constant coefficient
/// is >= 0, which is what GKS needs. Budget: T <= 12, q*i <= 8.
AdmissibilityReport signed_potential_admissibility(const PairPotential& potential, int horizon, double amplitude);

}  // namespace repwalk

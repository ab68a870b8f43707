#pragma once

#include "repwalk/exact_oracle.hpp"
#include "repwalk/mcmc_sampler.hpp"
#include "repwalk/model.hpp"
#include "repwalk/observable.hpp"
#include "repwalk/tilt_analysis.hpp"

// Serial, deliberately naive counterparts of the parallel kernels. Tests and
// the benchmark compare against these.
namespace repwalk::reference {

/// Energy straight from PairPotential::evaluate over the pair list.
double naive_energy(const SpinPath& path, const GibbsSpec& spec);

/// Enumeration in plain binary order with from-scratch energies and a
/// two-pass (max, then sum) log-sum-exp. d*T <= 20.
ExactResult expectation(const GibbsSpec& spec, const Observable& obs);

/// Same grid as minimize_four_point, one thread.
FourPointMinimum minimize_four_point(double v, double beta, double h);

/// Chains one after another on the calling thread.
Estimate sample_expectation(const GibbsSpec& spec, const Observable& obs, const SamplerConfig& cfg);

}  // namespace repwalk::reference

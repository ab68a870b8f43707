// Wall-clock comparison of the OpenMP kernels with their serial references.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "repwalk/exact_oracle.hpp"
#include "repwalk/mcmc_sampler.hpp"
#include "repwalk/reference.hpp"
#include "repwalk/tilt_analysis.hpp"

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double par, double ser, bool same) {
  std::printf("%-28s parallel %9.4fs  serial %9.4fs  speedup %6.2fx  %s\n", name, par, ser, ser / par,
              same ? "results agree" : "RESULTS DIFFER");
}

}  // namespace

int main() {
  using namespace repwalk;
  std::printf("threads: %d\n", omp_get_max_threads());

  GibbsSpec spec;
  spec.horizon = 16;
  spec.alpha = 0.3;
  spec.potential = PairPotential::power_law(2, 1.5);
  ExactResult a, b;
  const double te = seconds([&] { a = expectation(spec, EndpointSquare{}); });
  const double tr = seconds([&] { b = reference::expectation(spec, EndpointSquare{}); });
  report("enumeration T=16 power law", te, tr, std::abs(a.value - b.value) <= 1e-10 * std::abs(b.value));

  FourPointMinimum fa, fb;
  const double tf = seconds([&] { fa = minimize_four_point(1.0, 1.0, 1e-3); });
  const double tfs = seconds([&] { fb = reference::minimize_four_point(1.0, 1.0, 1e-3); });
  report("four-point grid h=1e-3", tf, tfs, fa.value == fb.value);

  GibbsSpec chain = spec;
  chain.horizon = 256;
  SamplerConfig cfg;
  cfg.sweeps = 2000;
  cfg.burnin = 200;
  cfg.chains = 8;
  cfg.seed = 7;
  Estimate ea, eb;
  const double tm = seconds([&] { ea = sample_expectation(chain, EndpointSquare{}, cfg); });
  const double tms = seconds([&] { eb = reference::sample_expectation(chain, EndpointSquare{}, cfg); });
  report("metropolis 8 chains T=256", tm, tms, ea.mean == eb.mean && ea.std_error == eb.std_error);
  return 0;
}

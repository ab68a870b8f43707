#include "repwalk/exact_oracle.hpp"

#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

constexpr int kSegmentBits = 6;
constexpr std::uint64_t kSpotChecks = 1000;

/// Streaming log-sum-exp accumulator with observable moments.
struct Partial {
  double max_log = -std::numeric_limits<double>::infinity();
  double sum_w = 0.0;
  std::vector<double> sum_wf;

  explicit Partial(std::size_t n = 0) : sum_wf(n, 0.0) {}

  void rescale_to(double new_max) {
    if (std::isinf(max_log)) {
      max_log = new_max;
      return;
    }
    const double f = std::exp(max_log - new_max);
    sum_w *= f;
    for (auto& s : sum_wf) s *= f;
    max_log = new_max;
  }

  void merge(const Partial& other) {
    if (other.sum_w == 0.0) return;
    if (other.max_log > max_log) rescale_to(other.max_log);
    const double f = std::exp(other.max_log - max_log);
    sum_w += f * other.sum_w;
    for (std::size_t i = 0; i < sum_wf.size(); ++i) sum_wf[i] += f * other.sum_wf[i];
  }
};

std::uint64_t gray(std::uint64_t n) { return n ^ (n >> 1); }

/**
 * Visits Gray-code indices [begin, end) of a d*T spin system, calling
 * visit(bits, path, energy) at each configuration. Energy is maintained
 * incrementally and re-synchronised at evenly spaced audit points.
 */
template <class Visit>
void walk_segment(const GibbsSpec& spec, const EnergyFunctional& functional, std::uint64_t begin,
                  std::uint64_t end, std::uint64_t audit_stride, Visit&& visit) {
  const int d = spec.dimension;
  SpinPath path = SpinPath::from_bits(d, spec.horizon, spec.amplitude, gray(begin));
  double e = functional.energy(path);
  for (std::uint64_t n = begin; n < end; ++n) {
    if (n != begin && n % audit_stride == 0) {
      const double fresh = functional.energy(path);
      if (std::abs(fresh - e) > 1e-9 * std::max(1.0, std::abs(fresh)))
        throw NumericError("Gray-code energy drifted from recomputation at index " + std::to_string(n));
      e = fresh;
    }
    if (std::isnan(e)) throw NumericError("NaN energy during enumeration");
    visit(gray(n), path, e);
    if (n + 1 < end) {
      const int b = std::countr_zero(n + 1);
      const int k = b / d + 1;
      const int p = b % d;
      e += functional.delta_flip(path, k, p);
      path.flip(k, p);
    }
  }
}

}  // namespace

int enumeration_segments(int spins) { return 1 << std::min(spins, kSegmentBits); }

void check_enumeration_capacity(const GibbsSpec& spec) {
  spec.validate();
  if (spec.spin_count() > kMaxEnumerationSpins)
    throw CapacityError("exact enumeration needs d*T <= " + std::to_string(kMaxEnumerationSpins) + ", got " +
                        std::to_string(spec.spin_count()));
}

std::vector<ExactResult> expectations(const GibbsSpec& spec, std::span<const Observable> observables) {
  check_enumeration_capacity(spec);
  for (const auto& obs : observables) validate(obs, spec.dimension, spec.horizon);

  const int spins = spec.spin_count();
  const std::uint64_t total = std::uint64_t{1} << spins;
  const int segments = enumeration_segments(spins);
  const std::uint64_t seg_len = total / static_cast<std::uint64_t>(segments);
  const std::uint64_t audit_stride = std::max<std::uint64_t>(1, total / kSpotChecks);
  const EnergyFunctional functional(spec);
  const std::size_t nobs = observables.size();

  std::vector<Partial> partials(static_cast<std::size_t>(segments), Partial(nobs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(segments));

#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < segments; ++s) {
    try {
      Partial& acc = partials[static_cast<std::size_t>(s)];
      std::vector<double> f(nobs);
      walk_segment(spec, functional, seg_len * static_cast<std::uint64_t>(s),
                   seg_len * static_cast<std::uint64_t>(s + 1), audit_stride,
                   [&](std::uint64_t, const SpinPath& path, double e) {
                     const double lw = spec.alpha * e;
                     if (lw > acc.max_log) acc.rescale_to(lw);
                     const double w = std::exp(lw - acc.max_log);
                     acc.sum_w += w;
                     for (std::size_t i = 0; i < nobs; ++i) acc.sum_wf[i] += w * evaluate(observables[i], path);
                   });
    } catch (...) {
      errors[static_cast<std::size_t>(s)] = std::current_exception();
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  Partial total_acc(nobs);
  for (const auto& p : partials) total_acc.merge(p);

  const double log_z =
      total_acc.max_log + std::log(total_acc.sum_w) - static_cast<double>(spins) * std::log(2.0);
  if (!std::isfinite(log_z)) throw NumericError("log partition function is not finite");
  std::vector<ExactResult> out(nobs);
  for (std::size_t i = 0; i < nobs; ++i) {
    out[i] = ExactResult{total_acc.sum_wf[i] / total_acc.sum_w, log_z, total};
    if (std::isnan(out[i].value)) throw NumericError("NaN expectation for " + describe(observables[i]));
  }
  return out;
}

ExactResult expectation(const GibbsSpec& spec, const Observable& obs) {
  return expectations(spec, std::span<const Observable>(&obs, 1)).front();
}

double pair_equal_prob(const GibbsSpec& spec, int j) {
  if (spec.dimension != 1) throw DomainError("pair_equal_prob requires d = 1");
  if (j < 1 || j >= spec.horizon) throw DomainError("pair_equal_prob requires 1 <= j < T");
  return expectation(spec, PairEqualIndicator{j, j + 1, 0}).value;
}

double window_all_equal_prob(const GibbsSpec& spec, int i, int w) {
  if (spec.dimension != 1) throw DomainError("window_all_equal_prob requires d = 1");
  if (w < 1 || i < 1 || i + w - 1 > spec.horizon) throw DomainError("window_all_equal_prob requires i + w - 1 <= T");
  return expectation(spec, WindowAllEqualIndicator{i, i + w - 1, 0}).value;
}

double msd_per_step(const GibbsSpec& spec) {
  return expectation(spec, EndpointSquare{}).value / static_cast<double>(spec.spin_count());
}

std::vector<double> configuration_probabilities(const GibbsSpec& spec) {
  spec.validate();
  const int spins = spec.spin_count();
  if (spins > 20) throw CapacityError("configuration_probabilities needs d*T <= 20");
  const std::uint64_t total = std::uint64_t{1} << spins;
  std::vector<double> logw(total);
  const EnergyFunctional functional(spec);
  walk_segment(spec, functional, 0, total, std::max<std::uint64_t>(1, total / kSpotChecks),
               [&](std::uint64_t bits, const SpinPath&, double e) { logw[bits] = spec.alpha * e; });
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logw) mx = std::max(mx, v);
  double z = 0.0;
  for (auto& v : logw) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : logw) v /= z;
  return logw;
}

}  // namespace repwalk

#include "repwalk/multiscale.hpp"

#include <cmath>
#include <limits>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

constexpr double kLinearCeiling = 1e300;
constexpr int kClassificationLevels = 1000;

}  // namespace

double c_crit() { return std::log2(1.0 + std::tanh(2.0)); }

double alpha_star(double c) {
  if (!(c > 0.0) || !(c < c_crit()))
    throw DomainError("alpha_star: c must lie in (0, c_crit) = (0, " + std::to_string(c_crit()) + ")");
  const double two_c = std::exp2(c);
  return two_c * std::atanh(two_c - 1.0);
}

double theorem2_exponent() { return 1.0 + c_crit(); }

double saturated_gain(double c) { return std::exp2(-c) * (1.0 + std::tanh(2.0)); }

std::vector<RecursionState> iterate_recursion(double alpha, double c, int n_max, bool clamped) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("iterate_recursion: alpha must be > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("iterate_recursion: c must be > 0");
  if (n_max < 1 || n_max > 10'000) throw CapacityError("iterate_recursion: n_max must be in 1..10^4");

  std::vector<RecursionState> out;
  out.reserve(static_cast<std::size_t>(n_max));
  const double log_alpha = std::log(alpha);
  const double ln2 = std::log(2.0);

  RecursionState s;
  s.n = 1;
  s.v = 1.0;
  s.log_v = 0.0;
  s.log_y = log_alpha - c * ln2;
  s.y = alpha * std::exp2(-c);
  out.push_back(s);
  for (int n = 1; n < n_max; ++n) {
    const double arg = clamped ? std::min(s.y, 2.0) : s.y;
    const double factor = 1.0 + std::tanh(arg);
    RecursionState next;
    next.n = n + 1;
    next.log_v = s.log_v + std::log(factor);
    next.log_y = log_alpha - c * ln2 * (n + 1) + next.log_v;
    next.log_domain = s.log_domain || s.v * factor > kLinearCeiling;
    if (next.log_domain) {
      next.v = std::numeric_limits<double>::infinity();
      next.y = std::exp(next.log_y);
    } else {
      next.v = s.v * factor;
      next.y = alpha * std::exp2(-c * (n + 1)) * next.v;
    }
    out.push_back(next);
    s = next;
  }
  return out;
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::divergent:
      return "divergent";
    case Phase::bounded:
      return "bounded";
    case Phase::boundary:
      return "boundary";
  }
  return "unknown";
}

PhasePoint classify_phase(double alpha, double c) {
  const double threshold = alpha_star(c);
  PhasePoint pt;
  pt.alpha = alpha;
  pt.c = c;
  if (std::abs(alpha - threshold) <= 1e-12 * threshold) {
    pt.classification = Phase::boundary;
    pt.iteration_consistent = true;
    return pt;
  }
  pt.classification = alpha > threshold ? Phase::divergent : Phase::bounded;

  const auto states = iterate_recursion(alpha, c, kClassificationLevels);
  if (pt.classification == Phase::divergent) {
    pt.iteration_consistent = false;
    for (const auto& st : states) {
      if (st.y > 2.0) {
        pt.n_reached = st.n;
        pt.iteration_consistent = true;
        break;
      }
    }
    if (!pt.iteration_consistent) pt.n_reached = states.back().n;
  } else {
    pt.n_reached = states.back().n;
    for (std::size_t i = 1; i < states.size(); ++i) {
      if (!(states[i].log_y < states[i - 1].log_y)) {
        pt.iteration_consistent = false;
        break;
      }
    }
  }
  const auto& last = states.back();
  const auto& prev = states[states.size() - 2];
  pt.ratio = (last.log_v - prev.log_v) / std::log(2.0);
  return pt;
}

CouplingExponent effective_coupling_exponent(int gamma, double xi) {
  if (gamma <= 0 || gamma % 2 != 0) throw DomainError("effective_coupling_exponent: gamma must be even and > 0");
  CouplingExponent out;
  const double half = gamma / 2.0;
  out.s = xi - half - 1.0;
  out.xi_c = 3.0 + half;
  out.summable = xi > half + 1.0;
  return out;
}

}  // namespace repwalk

#include "repwalk/transfer_matrix.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "repwalk/errors.hpp"

namespace repwalk {

IsingParams ising_params_for_nearest_quadratic(double alpha, double coefficient, double amplitude) {
  return IsingParams{2.0 * alpha * coefficient * amplitude * amplitude};
}

double ising_two_point(IsingParams params, int r) {
  if (r < 0) throw DomainError("ising_two_point: distance must be >= 0");
  if (r == 0) return 1.0;
  return std::pow(std::tanh(params.beta_eff), r);
}

double susceptibility(IsingParams params) {
  const double beta = params.beta_eff;
  if (!std::isfinite(beta)) throw DomainError("susceptibility: beta must be finite");
  const double t = std::tanh(beta);
  const double one_minus_t = 2.0 / (std::exp(2.0 * beta) + 1.0);
  return (1.0 + t) / one_minus_t;
}

double finite_chain_msd(IsingParams params, std::int64_t horizon) {
  if (horizon < 1) throw DomainError("finite_chain_msd: T must be >= 1");
  const double t = std::tanh(params.beta_eff);
  const double big_t = static_cast<double>(horizon);
  double tail = 0.0;
  double tr = 1.0;
  for (std::int64_t r = 1; r < horizon; ++r) {
    tr *= t;
    if (tr == 0.0) break;
    tail += static_cast<double>(horizon - r) * tr;
  }
  return big_t + 2.0 * tail;
}

// ---------------------------------------------------------------------------

BandedTransferOperator::BandedTransferOperator(const PairPotential& potential, double alpha, double amplitude)
    : potential_(potential), alpha_(alpha), amplitude_(amplitude) {
  if (potential.is_power_law()) throw CapacityError("banded transfer operator needs a finite-range coefficient table");
  if (potential.range() > kMaxBandRange)
    throw CapacityError("banded transfer operator supports range <= " + std::to_string(kMaxBandRange) + ", got " +
                        std::to_string(potential.range()));
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  if (!(amplitude > 0.0)) throw DomainError("amplitude must be > 0");
  range_ = std::max(1, potential.range());
}

double BandedTransferOperator::block_sum(std::uint32_t state, int len) const {
  double s = 0.0;
  for (int b = 0; b < len; ++b) s += ((state >> b) & 1U) ? amplitude_ : -amplitude_;
  return s;
}

double BandedTransferOperator::log_weight(std::uint32_t prev, std::uint32_t next, int len, bool first) const {
  // combined sequence: R spins of prev, then len spins of next
  const int r = range_;
  auto spin = [&](int idx) {
    const bool up = idx < r ? ((prev >> idx) & 1U) : ((next >> (idx - r)) & 1U);
    return up ? amplitude_ : -amplitude_;
  };
  double e = 0.0;
  for (int end = r; end < r + len; ++end) {
    double z = 0.0;
    for (int lag = 1; lag <= r; ++lag) {
      const int start = end - lag + 1;
      if (start < 0 || (first && start < r)) break;
      z += spin(start);
      e += potential_.evaluate(std::span<const double>(&z, 1), lag);
    }
  }
  return alpha_ * e;
}

double banded_msd(const PairPotential& potential, double alpha, std::int64_t horizon, double amplitude) {
  if (horizon < 1 || horizon > 1'000'000) throw CapacityError("banded_msd needs 1 <= T <= 10^6");
  const BandedTransferOperator op(potential, alpha, amplitude);
  const int r = op.range();
  const std::int64_t full = horizon / r;
  const int rem = static_cast<int>(horizon % r);

  std::vector<double> z, m1, m2;

  auto step = [&](int len, bool first) {
    const std::uint32_t nnext = 1U << len;
    const std::uint32_t nprev = first ? 1U : (1U << r);
    std::vector<double> logk(static_cast<std::size_t>(nprev) * nnext);
    double kmax = -std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < nprev; ++s)
      for (std::uint32_t t = 0; t < nnext; ++t) {
        const double v = op.log_weight(s, t, len, first);
        logk[s * nnext + t] = v;
        kmax = std::max(kmax, v);
      }
    std::vector<double> nz(nnext, 0.0), n1(nnext, 0.0), n2(nnext, 0.0);
    for (std::uint32_t t = 0; t < nnext; ++t) {
      const double b = op.block_sum(t, len);
      for (std::uint32_t s = 0; s < nprev; ++s) {
        const double k = std::exp(logk[s * nnext + t] - kmax);
        const double zs = first ? 1.0 : z[s];
        const double m1s = first ? 0.0 : m1[s];
        const double m2s = first ? 0.0 : m2[s];
        nz[t] += k * zs;
        n1[t] += k * (m1s + b * zs);
        n2[t] += k * (m2s + 2.0 * b * m1s + b * b * zs);
      }
    }
    const double norm = *std::max_element(nz.begin(), nz.end());
    for (std::uint32_t t = 0; t < nnext; ++t) {
      nz[t] /= norm;
      n1[t] /= norm;
      n2[t] /= norm;
    }
    z.swap(nz);
    m1.swap(n1);
    m2.swap(n2);
  };

  if (full >= 1) step(r, true);
  // full blocks after the first reuse one precomputed matrix
  if (full >= 2) {
    const std::uint32_t n = 1U << r;
    std::vector<double> k(static_cast<std::size_t>(n) * n);
    double kmax = -std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < n; ++s)
      for (std::uint32_t t = 0; t < n; ++t) kmax = std::max(kmax, op.log_weight(s, t, r, false));
    for (std::uint32_t s = 0; s < n; ++s)
      for (std::uint32_t t = 0; t < n; ++t) k[s * n + t] = std::exp(op.log_weight(s, t, r, false) - kmax);
    std::vector<double> b(n);
    for (std::uint32_t t = 0; t < n; ++t) b[t] = op.block_sum(t, r);
    std::vector<double> nz(n), n1(n), n2(n);
    for (std::int64_t blk = 1; blk < full; ++blk) {
      for (std::uint32_t t = 0; t < n; ++t) {
        double az = 0.0, a1 = 0.0, a2 = 0.0;
        for (std::uint32_t s = 0; s < n; ++s) {
          const double kv = k[s * n + t];
          az += kv * z[s];
          a1 += kv * m1[s];
          a2 += kv * m2[s];
        }
        nz[t] = az;
        n1[t] = a1 + b[t] * az;
        n2[t] = a2 + 2.0 * b[t] * a1 + b[t] * b[t] * az;
      }
      const double norm = *std::max_element(nz.begin(), nz.end());
      for (std::uint32_t t = 0; t < n; ++t) {
        z[t] = nz[t] / norm;
        m1[t] = n1[t] / norm;
        m2[t] = n2[t] / norm;
      }
    }
  }
  if (rem > 0) step(rem, full == 0);

  double sz = 0.0, s2 = 0.0;
  for (std::size_t s = 0; s < z.size(); ++s) {
    sz += z[s];
    s2 += m2[s];
  }
  return s2 / sz;
}

}  // namespace repwalk

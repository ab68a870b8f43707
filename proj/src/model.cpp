#include "repwalk/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

PairPotential::PairPotential() : PairPotential(nearest_quadratic(1.0)) {}

PairPotential PairPotential::coefficient_table(CoefficientTable table, bool allow_signed) {
  if (table.q < 1) throw DomainError("coefficient table: q must be a positive integer");
  PairPotential pot{RawTag{}};
  int range = 0;
  for (const auto& [key, c] : table.coeffs) {
    const auto [i, t] = key;
    if (i < 1) throw DomainError("coefficient table: power index i must be >= 1");
    if (t < 1) throw DomainError("coefficient table: time lag t must be >= 1");
    if (!std::isfinite(c)) throw DomainError("coefficient table: non-finite coefficient");
    if (c < 0.0 && !allow_signed)
      throw DomainError("coefficient table: c_{" + std::to_string(i) + "," + std::to_string(t) +
                        "} is negative");
    range = std::max(range, t);
  }
  pot.terms_by_t_.assign(static_cast<std::size_t>(range) + 1, {});
  for (const auto& [key, c] : table.coeffs) {
    if (c != 0.0) pot.terms_by_t_[static_cast<std::size_t>(key.second)].emplace_back(key.first, c);
  }
  for (auto& terms : pot.terms_by_t_) std::sort(terms.begin(), terms.end());
  pot.range_ = range;
  pot.form_ = std::move(table);
  return pot;
}

PairPotential PairPotential::power_law(int gamma, double xi) {
  if (gamma <= 0 || gamma % 2 != 0) throw DomainError("power law: gamma must be an even positive integer");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("power law: xi must be a positive real");
  PairPotential pot{RawTag{}};
  pot.form_ = PowerLaw{gamma, xi};
  pot.terms_by_t_.clear();
  pot.range_ = 0;
  return pot;
}

PairPotential PairPotential::nearest_quadratic(double coefficient) {
  CoefficientTable table;
  table.q = 2;
  table.coeffs[{1, 2}] = coefficient;
  return coefficient_table(std::move(table));
}

const CoefficientTable& PairPotential::table() const {
  if (const auto* t = std::get_if<CoefficientTable>(&form_)) return *t;
  throw DomainError("potential is a power law, not a coefficient table");
}

const PowerLaw& PairPotential::power() const {
  if (const auto* p = std::get_if<PowerLaw>(&form_)) return *p;
  throw DomainError("potential is a coefficient table, not a power law");
}

bool PairPotential::is_even() const {
  if (is_power_law()) return true;
  const auto& t = table();
  if (t.q % 2 == 0) return true;
  return std::all_of(t.coeffs.begin(), t.coeffs.end(),
                     [](const auto& kv) { return kv.second == 0.0 || kv.first.first % 2 == 0; });
}

bool PairPotential::has_negative_coefficients() const {
  if (is_power_law()) return false;
  const auto& c = table().coeffs;
  return std::any_of(c.begin(), c.end(), [](const auto& kv) { return kv.second < 0.0; });
}

double PairPotential::evaluate(std::span<const double> z, int t) const {
  if (t < 1) throw DomainError("evaluate_W: time lag must be >= 1, got " + std::to_string(t));
  if (const auto* p = std::get_if<PowerLaw>(&form_)) {
    double s = 0.0;
    for (double c : z) s += c * c;
    return ipow(s, p->gamma / 2) / std::pow(static_cast<double>(t), p->xi);
  }
  if (t > range_) return 0.0;
  const auto& terms = terms_by_t_[static_cast<std::size_t>(t)];
  if (terms.empty()) return 0.0;
  const int q = std::get<CoefficientTable>(form_).q;
  double s = 0.0;
  for (double c : z) s += ipow(c, q);
  double value = 0.0;
  for (const auto& [i, c] : terms) value += c * ipow(s, i);
  return value;
}

std::optional<std::vector<double>> PairPotential::quadratic_weights(int max_t) const {
  std::vector<double> w(static_cast<std::size_t>(max_t) + 1, 0.0);
  if (const auto* p = std::get_if<PowerLaw>(&form_)) {
    if (p->gamma != 2) return std::nullopt;
    for (int t = 1; t <= max_t; ++t) w[static_cast<std::size_t>(t)] = std::pow(static_cast<double>(t), -p->xi);
    return w;
  }
  const auto& tab = table();
  if (tab.q != 2) return std::nullopt;
  for (const auto& [key, c] : tab.coeffs) {
    if (c == 0.0) continue;
    if (key.first != 1) return std::nullopt;
    if (key.second <= max_t) w[static_cast<std::size_t>(key.second)] = c;
  }
  return w;
}

double evaluate_w(std::span<const double> z, int t, const PairPotential& potential) {
  return potential.evaluate(z, t);
}

void GibbsSpec::validate() const {
  if (dimension < 1 || dimension > kMaxDimension)
    throw DomainError("dimension must be in 1.." + std::to_string(kMaxDimension));
  if (horizon < 1) throw DomainError("horizon T must be >= 1");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw DomainError("step amplitude must be > 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("coupling alpha must be >= 0");
  if (interaction_set) {
    for (const auto& pr : *interaction_set) {
      if (pr.i < 0 || pr.i >= pr.j || pr.j > horizon)
        throw DomainError("interaction pair (" + std::to_string(pr.i) + "," + std::to_string(pr.j) +
                          ") violates 0 <= i < j <= T");
    }
  }
  for (const auto& w : window_terms) {
    if (w.i < 0 || w.i >= w.j || w.j > horizon) throw DomainError("window term outside 0 <= i < j <= T");
    if (w.power < 2 || w.power % 2 != 0) throw DomainError("window term power must be even and >= 2");
    if (!std::isfinite(w.weight)) throw DomainError("window term weight must be finite");
  }
}

std::vector<PairIndex> all_pairs(int horizon) {
  std::vector<PairIndex> out;
  for (int i = 0; i < horizon; ++i)
    for (int j = i + 1; j <= horizon; ++j) out.push_back({i, j});
  return out;
}

// ---------------------------------------------------------------------------
// SpinPath

SpinPath::SpinPath(int dimension, int horizon, double amplitude)
    : d_(dimension), t_(horizon), a_(amplitude) {
  if (dimension < 1 || dimension > kMaxDimension) throw ShapeError("SpinPath: bad dimension");
  if (horizon < 1) throw ShapeError("SpinPath: horizon must be >= 1");
  if (!(amplitude > 0.0)) throw DomainError("SpinPath: amplitude must be > 0");
  signs_.assign(static_cast<std::size_t>(d_ * t_), 1);
  rebuild_positions();
}

SpinPath SpinPath::from_signs(int dimension, int horizon, double amplitude, std::span<const int> signs) {
  SpinPath path(dimension, horizon, amplitude);
  if (signs.size() != path.signs_.size()) throw ShapeError("SpinPath: expected d*T signs");
  for (std::size_t b = 0; b < signs.size(); ++b) {
    if (signs[b] != 1 && signs[b] != -1) throw DomainError("SpinPath: signs must be +1 or -1");
    path.signs_[b] = static_cast<std::int8_t>(signs[b]);
  }
  path.rebuild_positions();
  return path;
}

SpinPath SpinPath::from_bits(int dimension, int horizon, double amplitude, std::uint64_t bits) {
  SpinPath path(dimension, horizon, amplitude);
  if (path.signs_.size() > 64) throw CapacityError("SpinPath: more than 64 spins cannot be bit-encoded");
  for (std::size_t b = 0; b < path.signs_.size(); ++b) path.signs_[b] = ((bits >> b) & 1U) ? 1 : -1;
  path.rebuild_positions();
  return path;
}

void SpinPath::rebuild_positions() {
  x_.assign(static_cast<std::size_t>((t_ + 1) * d_), 0.0);
  for (int k = 1; k <= t_; ++k)
    for (int p = 0; p < d_; ++p)
      x_[static_cast<std::size_t>(k * d_ + p)] = x_[static_cast<std::size_t>((k - 1) * d_ + p)] + increment(k, p);
}

void SpinPath::flip(int k, int p) {
  if (k < 1 || k > t_ || p < 0 || p >= d_) throw DomainError("SpinPath::flip: index out of range");
  auto& s = signs_[static_cast<std::size_t>((k - 1) * d_ + p)];
  s = static_cast<std::int8_t>(-s);
  const double shift = 2.0 * a_ * s;
  for (int j = k; j <= t_; ++j) x_[static_cast<std::size_t>(j * d_ + p)] += shift;
}

SpinPath SpinPath::negated() const {
  SpinPath out = *this;
  for (auto& s : out.signs_) s = static_cast<std::int8_t>(-s);
  for (auto& x : out.x_) x = -x;
  return out;
}

std::uint64_t SpinPath::bits() const {
  if (signs_.size() > 64) throw CapacityError("SpinPath: more than 64 spins cannot be bit-encoded");
  std::uint64_t b = 0;
  for (std::size_t i = 0; i < signs_.size(); ++i)
    if (signs_[i] > 0) b |= std::uint64_t{1} << i;
  return b;
}

// ---------------------------------------------------------------------------
// EnergyFunctional

EnergyFunctional::EnergyFunctional(const GibbsSpec& spec)
    : potential_(spec.potential),
      d_(spec.dimension),
      t_(spec.horizon),
      power_law_(spec.potential.is_power_law()),
      windows_(spec.window_terms) {
  spec.validate();
  span_ = power_law_ ? t_ : std::min(t_, potential_.range());
  if (power_law_) {
    half_gamma_ = potential_.power().gamma / 2;
    inv_t_pow_.assign(static_cast<std::size_t>(t_) + 1, 0.0);
    for (int t = 1; t <= t_; ++t)
      inv_t_pow_[static_cast<std::size_t>(t)] = 1.0 / std::pow(static_cast<double>(t), potential_.power().xi);
  }
  if (spec.interaction_set) {
    mask_.assign(static_cast<std::size_t>((t_ + 1) * (t_ + 1)), 0);
    for (const auto& pr : *spec.interaction_set) mask_[static_cast<std::size_t>(pr.i * (t_ + 1) + pr.j)] = 1;
  }
}

double EnergyFunctional::pair_value(const double* z, int t) const {
  if (power_law_) {
    double s = 0.0;
    for (int p = 0; p < d_; ++p) s += z[p] * z[p];
    return ipow(s, half_gamma_) * inv_t_pow_[static_cast<std::size_t>(t)];
  }
  return potential_.evaluate(std::span<const double>(z, static_cast<std::size_t>(d_)), t);
}

void EnergyFunctional::check_shape(const SpinPath& path) const {
  if (path.horizon() != t_ || path.dimension() != d_)
    throw ShapeError("path shape (d=" + std::to_string(path.dimension()) + ", T=" +
                     std::to_string(path.horizon()) + ") does not match spec (d=" + std::to_string(d_) +
                     ", T=" + std::to_string(t_) + ")");
}

double EnergyFunctional::energy(const SpinPath& path) const {
  check_shape(path);
  std::array<double, kMaxDimension> z{};
  double sum = 0.0;
  for (int i = 0; i < t_; ++i) {
    const int j_max = std::min(t_, i + span_);
    for (int j = i + 1; j <= j_max; ++j) {
      if (!allowed(i, j)) continue;
      for (int p = 0; p < d_; ++p) z[static_cast<std::size_t>(p)] = path.position(j, p) - path.position(i, p);
      sum += pair_value(z.data(), j - i);
    }
  }
  for (const auto& w : windows_) {
    double s = 0.0;
    for (int p = 0; p < d_; ++p) {
      const double c = path.position(w.j, p) - path.position(w.i, p);
      s += c * c;
    }
    sum += w.weight * ipow(s, w.power / 2);
  }
  return sum;
}

double EnergyFunctional::delta_flip(const SpinPath& path, int k, int p) const {
  check_shape(path);
  if (k < 1 || k > t_ || p < 0 || p >= d_) throw DomainError("delta_flip: index out of range");
  const double shift = -2.0 * path.increment(k, p);
  std::array<double, kMaxDimension> z{};
  double delta = 0.0;
  for (int i = std::max(0, k - span_); i < k; ++i) {
    const int j_max = std::min(t_, i + span_);
    for (int j = k; j <= j_max; ++j) {
      if (!allowed(i, j)) continue;
      for (int q = 0; q < d_; ++q) z[static_cast<std::size_t>(q)] = path.position(j, q) - path.position(i, q);
      const double before = pair_value(z.data(), j - i);
      z[static_cast<std::size_t>(p)] += shift;
      delta += pair_value(z.data(), j - i) - before;
    }
  }
  for (const auto& w : windows_) {
    if (!(w.i < k && k <= w.j)) continue;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int q = 0; q < d_; ++q) {
      const double c = path.position(w.j, q) - path.position(w.i, q);
      const double c1 = q == p ? c + shift : c;
      s0 += c * c;
      s1 += c1 * c1;
    }
    delta += w.weight * (ipow(s1, w.power / 2) - ipow(s0, w.power / 2));
  }
  return delta;
}

double energy(const SpinPath& path, const GibbsSpec& spec) { return EnergyFunctional(spec).energy(path); }

double delta_energy_flip(const SpinPath& path, int k, int p, const GibbsSpec& spec) {
  return EnergyFunctional(spec).delta_flip(path, k, p);
}

}  // namespace repwalk

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace repwalk {

/// Largest supported spatial dimension (displacements live in fixed-size buffers).
inline constexpr int kMaxDimension = 8;

/**
 * Polynomial pair potential
 *
 *   W(z, t) = sum_i c_{i,t} * ( sum_p (z^p)^q )^i .
 *
 * Entries are keyed by (i, t). A missing t means W(., t) = 0, so the t = 1
 * term is absent unless configured explicitly.
 */
struct CoefficientTable {
  int q = 2;
  std::map<std::pair<int, int>, double> coeffs;
};

/// W(z, t) = |z|^gamma / t^xi with gamma even.
struct PowerLaw {
  int gamma = 2;
  double xi = 1.0;
};

class PairPotential {
 public:
  /// Nearest-neighbour quadratic potential W(z, 2) = |z|^2.
  PairPotential();

  static PairPotential coefficient_table(CoefficientTable table, bool allow_signed = false);
  static PairPotential power_law(int gamma, double xi);
  static PairPotential nearest_quadratic(double coefficient = 1.0);

  bool is_power_law() const { return std::holds_alternative<PowerLaw>(form_); }
  const CoefficientTable& table() const;
  const PowerLaw& power() const;

  /// True when W(-z, t) = W(z, t) for all z, t.
  bool is_even() const;
  bool has_negative_coefficients() const;

  /// Largest t with a configured term; 0 means unbounded (power law).
  int range() const { return range_; }

  double evaluate(std::span<const double> z, int t) const;

  /// When W(z, t) = w(t) |z|^2 for every t, returns w indexed by t (entry 0
  /// unused) up to max_t. Used by the quadratic MCMC fast path.
  std::optional<std::vector<double>> quadratic_weights(int max_t) const;

 private:
  struct RawTag {};
  explicit PairPotential(RawTag) {}

  std::variant<CoefficientTable, PowerLaw> form_;
  // terms_by_t_[t] = [(i, c_{i,t}), ...] sorted by i
  std::vector<std::vector<std::pair<int, double>>> terms_by_t_;
  int range_ = 0;
};

/// evaluate_W from the operation list; same as potential.evaluate(z, t).
double evaluate_w(std::span<const double> z, int t, const PairPotential& potential);

/// Pair (i, j) of path indices, 0 <= i < j <= T.
struct PairIndex {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

/// Explicit block Hamiltonian weight * |x_j - x_i|^power added to the energy.
struct WindowTerm {
  int i = 0;
  int j = 0;
  double weight = 0.0;
  int power = 2;
  friend bool operator==(const WindowTerm&, const WindowTerm&) = default;
};

/**
 * Base walk (dimension, horizon, Rademacher amplitude) + potential + coupling.
 *
 * interaction_set restricts the pair sum; when empty (std::nullopt) every pair
 * 0 <= i < j <= T interacts. window_terms are additional interactions
 * outside the pair potential (used for the two-block split measure).
 */
struct GibbsSpec {
  int dimension = 1;
  int horizon = 1;
  double amplitude = 1.0;
  double alpha = 0.0;
  PairPotential potential;
  std::optional<std::vector<PairIndex>> interaction_set;
  std::vector<WindowTerm> window_terms;

  /// Throws DomainError when an invariant is broken.
  void validate() const;
  int spin_count() const { return dimension * horizon; }
};

/// dT signed increments of amplitude a with cached partial sums.
/// Steps are 1-based (x_k = x_{k-1} + phi_k); coordinates are 0-based.
class SpinPath {
 public:
  /// All increments +a.
  SpinPath(int dimension, int horizon, double amplitude);

  /// signs[(k-1)*d + p] in {-1, +1}.
  static SpinPath from_signs(int dimension, int horizon, double amplitude,
                             std::span<const int> signs);
  /// Bit b set means spin b is +a; spin b is (step b/d + 1, coordinate b%d).
  static SpinPath from_bits(int dimension, int horizon, double amplitude, std::uint64_t bits);

  int dimension() const { return d_; }
  int horizon() const { return t_; }
  double amplitude() const { return a_; }

  int sign(int k, int p) const { return signs_[static_cast<std::size_t>((k - 1) * d_ + p)]; }
  double increment(int k, int p) const { return a_ * sign(k, p); }
  double position(int j, int p) const { return x_[static_cast<std::size_t>(j * d_ + p)]; }
  std::span<const double> position(int j) const {
    return {x_.data() + static_cast<std::size_t>(j * d_), static_cast<std::size_t>(d_)};
  }

  /// Negates phi_k^p and shifts x_j^p for j >= k.
  void flip(int k, int p);
  SpinPath negated() const;
  std::uint64_t bits() const;

 private:
  void rebuild_positions();

  int d_;
  int t_;
  double a_;
  std::vector<std::int8_t> signs_;
  std::vector<double> x_;
};

/**
 * Energy evaluator compiled from a spec: caches t^-xi, the pair mask and
 * the interaction range so that energy() and delta_flip() run in tight loops.
 */
class EnergyFunctional {
 public:
  explicit EnergyFunctional(const GibbsSpec& spec);

  /// Sum over allowed pairs of W(x_j - x_i, j - i) plus window terms,
  /// without the alpha prefactor. Pairs accumulate in (i, j) lexicographic order.
  double energy(const SpinPath& path) const;

  /// energy(path with phi_k^p negated) - energy(path).
  double delta_flip(const SpinPath& path, int k, int p) const;

  int horizon() const { return t_; }
  int dimension() const { return d_; }

 private:
  bool allowed(int i, int j) const {
    return mask_.empty() || mask_[static_cast<std::size_t>(i * (t_ + 1) + j)] != 0;
  }
  double pair_value(const double* z, int t) const;
  void check_shape(const SpinPath& path) const;

  PairPotential potential_;
  int d_;
  int t_;
  int span_;  // largest j - i that can contribute
  bool power_law_;
  int half_gamma_ = 1;
  std::vector<double> inv_t_pow_;
  std::vector<std::uint8_t> mask_;
  std::vector<WindowTerm> windows_;
};

double energy(const SpinPath& path, const GibbsSpec& spec);
double delta_energy_flip(const SpinPath& path, int k, int p, const GibbsSpec& spec);

/// Every pair 0 <= i < j <= T.
std::vector<PairIndex> all_pairs(int horizon);

}  // namespace repwalk

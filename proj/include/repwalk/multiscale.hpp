#pragma once

#include <string>
#include <vector>

namespace repwalk {

/// log2(1 + tanh 2): saturation growth rate of the clamped variance recursion.
double c_crit();

/// 2^c * arctanh(2^c - 1), the coupling above which the recursion diverges.
/// Requires 0 < c < c_crit().
double alpha_star(double c);

/// 1 + c_crit(): the superdiffusive exponent delivered by the recursion.
double theorem2_exponent();

/**
 * One level of V_{n+1} = (1 + tanh(min(alpha 2^{-cn} V_n, 2))) V_n.
 *
 * V and y are carried in both linear and log form. Once V passes 1e300 the
 * linear fields become +inf and only log_v / log_y remain meaningful.
 */
struct RecursionState {
  int n = 1;
  double v = 1.0;
  double y = 0.0;
  double log_v = 0.0;
  double log_y = 0.0;
  bool log_domain = false;
};

/// States n = 1..n_max starting from V_1 = 1. The unclamped variant drops the
/// min(., 2) and is exploratory only.
std::vector<RecursionState> iterate_recursion(double alpha, double c, int n_max, bool clamped = true);

enum class Phase { divergent, bounded, boundary };

std::string to_string(Phase phase);

struct PhasePoint {
  double alpha = 0.0;
  double c = 0.0;
  Phase classification = Phase::bounded;
  /// log2(V_{n+1} / V_n) at the last iterated level.
  double ratio = 0.0;
  /// Level at which y_n first exceeded 2 (divergent) or the last level iterated.
  int n_reached = 0;
  /// Iteration agrees with the analytic threshold.
  bool iteration_consistent = true;
};

/// Divergent iff alpha > alpha_star(c), cross-checked by iterating up to
/// 1000 levels. Points within relative 1e-12 of the threshold are flagged boundary.
PhasePoint classify_phase(double alpha, double c);

/// 2^{-c}(1 + tanh 2): multiplier of y_n once saturated.
double saturated_gain(double c);

struct CouplingExponent {
  double s = 0.0;     ///< decay exponent of the induced two-spin coupling r^{-s}
  double xi_c = 0.0;  ///< heuristic superdiffusion threshold 3 + gamma/2
  bool summable = true;  ///< false when xi <= gamma/2 + 1 (tail sum diverges)
  std::string label = "HEURISTIC";
};

CouplingExponent effective_coupling_exponent(int gamma, double xi);

}  // namespace repwalk

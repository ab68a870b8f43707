#pragma once

#include <string>
#include <variant>
#include <vector>

#include "repwalk/model.hpp"

namespace repwalk {

/// |x_T|^2
struct EndpointSquare {};

/// x_T^coord
struct EndpointCoordinate {
  int coord = 0;
};

/// One factor (phi_step^coord)^exponent of a monomial.
struct MonomialFactor {
  int step = 1;
  int coord = 0;
  int exponent = 1;
  friend auto operator<=>(const MonomialFactor&, const MonomialFactor&) = default;
};

/// Product of increment powers. An empty factor list is the constant 1.
struct Monomial {
  std::vector<MonomialFactor> factors;
};

/// 1{phi_i^coord = phi_j^coord}
struct PairEqualIndicator {
  int i = 1;
  int j = 2;
  int coord = 0;
};

/// 1{phi_first = ... = phi_last} in one coordinate.
struct WindowAllEqualIndicator {
  int first = 1;
  int last = 1;
  int coord = 0;
};

/// (a_scale * sum_{k in A} phi_k^coord) * (b_scale * sum_{k in B} phi_k^coord),
/// A = [a_first, a_last], B = [b_first, b_last]. With a_scale = b_scale =
/// 1/sqrt(T/2) and the two halves of the path this is sigma^1 * sigma^2.
struct BlockProduct {
  int a_first = 1;
  int a_last = 1;
  int b_first = 1;
  int b_last = 1;
  int coord = 0;
  double a_scale = 1.0;
  double b_scale = 1.0;
};

using Observable = std::variant<EndpointSquare, EndpointCoordinate, Monomial, PairEqualIndicator,
                                WindowAllEqualIndicator, BlockProduct>;

double evaluate(const Observable& obs, const SpinPath& path);

/// Throws DomainError when an index falls outside 1..T or 0..d-1.
void validate(const Observable& obs, int dimension, int horizon);

/// Factor-wise product; exponents of repeated (step, coord) add.
Monomial multiply(const Monomial& f, const Monomial& g);

/// Sum of exponents.
int degree(const Monomial& m);

/// True when some increment appears with odd total exponent.
bool has_odd_factor(const Monomial& m);

/// Short human-readable label such as "monomial[1.0^1*2.0^1]".
std::string describe(const Observable& obs);

/// sigma^1_{T/2} * sigma^2_{T/2} for an even horizon, coordinate 0.
BlockProduct half_block_product(int horizon);

}  // namespace repwalk

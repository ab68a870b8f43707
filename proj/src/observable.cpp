#include "repwalk/observable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_step(int k, int horizon, const char* what) {
  if (k < 1 || k > horizon)
    throw DomainError(std::string(what) + ": step " + std::to_string(k) + " outside 1.." + std::to_string(horizon));
}

void check_coord(int p, int dimension, const char* what) {
  if (p < 0 || p >= dimension)
    throw DomainError(std::string(what) + ": coordinate " + std::to_string(p) + " outside 0.." +
                      std::to_string(dimension - 1));
}

double block_sum(const SpinPath& path, int first, int last, int coord) {
  return path.position(last, coord) - path.position(first - 1, coord);
}

}  // namespace

double evaluate(const Observable& obs, const SpinPath& path) {
  return std::visit(
      overloaded{
          [&](const EndpointSquare&) {
            double s = 0.0;
            for (double c : path.position(path.horizon())) s += c * c;
            return s;
          },
          [&](const EndpointCoordinate& e) { return path.position(path.horizon(), e.coord); },
          [&](const Monomial& m) {
            double v = 1.0;
            for (const auto& f : m.factors) {
              const double phi = path.increment(f.step, f.coord);
              for (int e = 0; e < f.exponent; ++e) v *= phi;
            }
            return v;
          },
          [&](const PairEqualIndicator& e) {
            return path.sign(e.i, e.coord) == path.sign(e.j, e.coord) ? 1.0 : 0.0;
          },
          [&](const WindowAllEqualIndicator& w) {
            const int s = path.sign(w.first, w.coord);
            for (int k = w.first + 1; k <= w.last; ++k)
              if (path.sign(k, w.coord) != s) return 0.0;
            return 1.0;
          },
          [&](const BlockProduct& b) {
            return b.a_scale * block_sum(path, b.a_first, b.a_last, b.coord) * b.b_scale *
                   block_sum(path, b.b_first, b.b_last, b.coord);
          },
      },
      obs);
}

void validate(const Observable& obs, int dimension, int horizon) {
  std::visit(overloaded{
                 [](const EndpointSquare&) {},
                 [&](const EndpointCoordinate& e) { check_coord(e.coord, dimension, "endpoint coordinate"); },
                 [&](const Monomial& m) {
                   for (const auto& f : m.factors) {
                     check_step(f.step, horizon, "monomial");
                     check_coord(f.coord, dimension, "monomial");
                     if (f.exponent < 1) throw DomainError("monomial: exponents must be >= 1");
                   }
                 },
                 [&](const PairEqualIndicator& e) {
                   check_step(e.i, horizon, "pair indicator");
                   check_step(e.j, horizon, "pair indicator");
                   check_coord(e.coord, dimension, "pair indicator");
                 },
                 [&](const WindowAllEqualIndicator& w) {
                   check_step(w.first, horizon, "window indicator");
                   check_step(w.last, horizon, "window indicator");
                   if (w.last < w.first) throw DomainError("window indicator: last < first");
                   check_coord(w.coord, dimension, "window indicator");
                 },
                 [&](const BlockProduct& b) {
                   check_step(b.a_first, horizon, "block product");
                   check_step(b.a_last, horizon, "block product");
                   check_step(b.b_first, horizon, "block product");
                   check_step(b.b_last, horizon, "block product");
                   if (b.a_last < b.a_first || b.b_last < b.b_first) throw DomainError("block product: empty block");
                   check_coord(b.coord, dimension, "block product");
                   if (!std::isfinite(b.a_scale) || !std::isfinite(b.b_scale))
                     throw DomainError("block product: non-finite normalization");
                 },
             },
             obs);
}

Monomial multiply(const Monomial& f, const Monomial& g) {
  std::map<std::pair<int, int>, int> exps;
  for (const auto& x : f.factors) exps[{x.step, x.coord}] += x.exponent;
  for (const auto& x : g.factors) exps[{x.step, x.coord}] += x.exponent;
  Monomial out;
  for (const auto& [key, e] : exps) out.factors.push_back({key.first, key.second, e});
  return out;
}

int degree(const Monomial& m) {
  int d = 0;
  for (const auto& f : m.factors) d += f.exponent;
  return d;
}

bool has_odd_factor(const Monomial& m) {
  std::map<std::pair<int, int>, int> exps;
  for (const auto& x : m.factors) exps[{x.step, x.coord}] += x.exponent;
  return std::any_of(exps.begin(), exps.end(), [](const auto& kv) { return kv.second % 2 != 0; });
}

std::string describe(const Observable& obs) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const EndpointSquare&) { os << "endpoint_square"; },
                 [&](const EndpointCoordinate& e) { os << "endpoint_coordinate[" << e.coord << "]"; },
                 [&](const Monomial& m) {
                   os << "monomial[";
                   for (std::size_t i = 0; i < m.factors.size(); ++i) {
                     if (i) os << '*';
                     os << m.factors[i].step << '.' << m.factors[i].coord << '^' << m.factors[i].exponent;
                   }
                   os << ']';
                 },
                 [&](const PairEqualIndicator& e) { os << "pair_equal[" << e.i << ',' << e.j << ']'; },
                 [&](const WindowAllEqualIndicator& w) {
                   os << "window_all_equal[" << w.first << ".." << w.last << ']';
                 },
                 [&](const BlockProduct& b) {
                   os << "block_product[" << b.a_first << ".." << b.a_last << 'x' << b.b_first << ".." << b.b_last
                      << ']';
                 },
             },
             obs);
  return os.str();
}

BlockProduct half_block_product(int horizon) {
  if (horizon < 2 || horizon % 2 != 0) throw DomainError("half_block_product: horizon must be even");
  const int h = horizon / 2;
  const double s = 1.0 / std::sqrt(static_cast<double>(h));
  return BlockProduct{1, h, h + 1, horizon, 0, s, s};
}

}  // namespace repwalk

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>

#include <boost/rational.hpp>

namespace repwalk {

using Rational = boost::rational<std::int64_t>;

/**
 * Polynomial in spins phi_1..phi_N reduced with phi_j^2 = m (m = a^2).
 * Each monomial is a set of distinct indices, stored as a bitmask where bit
 * j-1 stands for phi_j. The empty set is the constant term.
 */
template <class Coeff>
class SpinPolynomial {
 public:
  using Terms = std::map<std::uint32_t, Coeff>;

  explicit SpinPolynomial(int n, Coeff modulus = Coeff(1)) : n_(n), modulus_(modulus) {
    if (n < 0 || n > 31) throw std::invalid_argument("SpinPolynomial supports at most 31 spins");
  }

  static SpinPolynomial constant(int n, Coeff c, Coeff modulus = Coeff(1)) {
    SpinPolynomial p(n, modulus);
    p.add_term(0, c);
    return p;
  }

  /// sum_j phi_j
  static SpinPolynomial spin_sum(int n, Coeff modulus = Coeff(1)) {
    SpinPolynomial p(n, modulus);
    for (int j = 0; j < n; ++j) p.add_term(std::uint32_t{1} << j, Coeff(1));
    return p;
  }

  int spins() const { return n_; }
  const Coeff& modulus() const { return modulus_; }
  const Terms& terms() const { return terms_; }

  Coeff coefficient(std::uint32_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(std::uint32_t mask, const Coeff& c) {
    if (c == Coeff(0)) return;
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff(0)) terms_.erase(it);
    }
  }

  SpinPolynomial& operator+=(const SpinPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  SpinPolynomial& operator-=(const SpinPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  SpinPolynomial& operator*=(const Coeff& s) {
    if (s == Coeff(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend SpinPolynomial operator*(const SpinPolynomial& x, const SpinPolynomial& y) {
    SpinPolynomial out(x.n_, x.modulus_);
    for (const auto& [mx, cx] : x.terms_)
      for (const auto& [my, cy] : y.terms_) {
        Coeff c = cx * cy;
        // every shared spin contributes phi_j^2 = modulus
        for (std::uint32_t shared = mx & my; shared != 0; shared &= shared - 1) c *= x.modulus_;
        out.add_term(mx ^ my, c);
      }
    return out;
  }

  SpinPolynomial pow(int e) const {
    SpinPolynomial out = constant(n_, Coeff(1), modulus_);
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
  }

  /// Value at spins[j] (each +/- sqrt(modulus) in intended use).
  Coeff evaluate(std::span<const Coeff> spins) const {
    Coeff total(0);
    for (const auto& [m, c] : terms_) {
      Coeff v = c;
      for (int j = 0; j < n_; ++j)
        if ((m >> j) & 1U) v *= spins[static_cast<std::size_t>(j)];
      total += v;
    }
    return total;
  }

  /// Smallest coefficient among non-constant monomials (0 when none).
  Coeff min_nonconstant_coefficient() const {
    Coeff mn(0);
    bool any = false;
    for (const auto& [m, c] : terms_) {
      if (m == 0) continue;
      if (!any || c < mn) mn = c;
      any = true;
    }
    return any ? mn : Coeff(0);
  }

  bool all_coefficients_nonnegative() const {
    for (const auto& [m, c] : terms_)
      if (c < Coeff(0)) return false;
    return true;
  }

  bool is_zero() const { return terms_.empty(); }

 private:
  int n_;
  Coeff modulus_;
  Terms terms_;
};

}  // namespace repwalk

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "accomp/term.hpp"

namespace accomp {

/// Multivariate polynomial with integer coefficients over variable ids.
class Polynomial {
 public:
  /// Monomial: sorted (variable, exponent) pairs, exponents >= 1.
  using Monomial = std::vector<std::pair<Var, int>>;

  Polynomial() = default;
  static Polynomial constant(long long c);
  static Polynomial variable(Var v);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(long long k) const;

  bool is_zero() const { return terms_.empty(); }
  bool operator==(const Polynomial& other) const { return terms_ == other.terms_; }
  long long coefficient(const Monomial& m) const;
  long long constant_term() const { return coefficient({}); }

  /// Replaces variables by polynomials; unmapped variables stay themselves.
  Polynomial substitute(const std::map<Var, Polynomial>& env) const;
  /// Every variable replaced by itself + 1.
  Polynomial shift_all_by_one() const;

  std::set<Var> variables() const;
  long long eval(const std::map<Var, long long>& point) const;
  const std::map<Monomial, long long>& terms() const { return terms_; }

  /// Rendering like "2*x1*x2 + x1^2 + 1" with variables named x<id+1>.
  std::string to_string() const;

 private:
  std::map<Monomial, long long> terms_;  // no zero coefficients stored
  void add_term(Monomial m, long long c);
};

/// All coefficients nonnegative and positive constant term after shifting
/// every variable by one: a sound strict-positivity test over inputs >= 1.
bool absolutely_positive_after_shift(const Polynomial& p);

}  // namespace accomp

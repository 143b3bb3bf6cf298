#include "accomp/polynomial.hpp"

#include <algorithm>

namespace accomp {

void Polynomial::add_term(Monomial m, long long c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Polynomial Polynomial::constant(long long c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(Var v) {
  Polynomial p;
  p.add_term({{v, 1}}, 1);
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out = *this;
  for (auto& [m, c] : other.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial out = *this;
  for (auto& [m, c] : other.terms_) out.add_term(m, -c);
  return out;
}

namespace {
Polynomial::Monomial merge(const Polynomial::Monomial& a,
                           const Polynomial::Monomial& b) {
  Polynomial::Monomial out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
      out.push_back(a[i++]);
    else if (i == a.size() || b[j].first < a[i].first)
      out.push_back(b[j++]);
    else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    }
  }
  return out;
}
}  // namespace

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out;
  for (auto& [m1, c1] : terms_)
    for (auto& [m2, c2] : other.terms_) out.add_term(merge(m1, m2), c1 * c2);
  return out;
}

Polynomial Polynomial::scaled(long long k) const {
  Polynomial out;
  for (auto& [m, c] : terms_) out.add_term(m, c * k);
  return out;
}

long long Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

Polynomial Polynomial::substitute(const std::map<Var, Polynomial>& env) const {
  Polynomial out;
  for (auto& [m, c] : terms_) {
    Polynomial t = Polynomial::constant(c);
    for (auto& [v, e] : m) {
      auto it = env.find(v);
      Polynomial base = it == env.end() ? Polynomial::variable(v) : it->second;
      for (int k = 0; k < e; ++k) t = t * base;
    }
    out = out + t;
  }
  return out;
}

Polynomial Polynomial::shift_all_by_one() const {
  std::map<Var, Polynomial> env;
  for (Var v : variables())
    env.emplace(v, Polynomial::variable(v) + Polynomial::constant(1));
  return substitute(env);
}

std::set<Var> Polynomial::variables() const {
  std::set<Var> out;
  for (auto& [m, _] : terms_)
    for (auto& [v, __] : m) out.insert(v);
  return out;
}

long long Polynomial::eval(const std::map<Var, long long>& point) const {
  long long sum = 0;
  for (auto& [m, c] : terms_) {
    long long t = c;
    for (auto& [v, e] : m) {
      long long x = point.at(v);
      for (int k = 0; k < e; ++k) t *= x;
    }
    sum += t;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  // largest monomials first reads more naturally
  std::vector<std::pair<Monomial, long long>> ordered(terms_.begin(), terms_.end());
  std::reverse(ordered.begin(), ordered.end());
  std::string out;
  for (auto& [m, c] : ordered) {
    if (!out.empty()) out += c >= 0 ? " + " : " - ";
    else if (c < 0) out += "-";
    long long a = c < 0 ? -c : c;
    bool printed = false;
    if (a != 1 || m.empty()) {
      out += std::to_string(a);
      printed = true;
    }
    for (auto& [v, e] : m) {
      if (printed) out += "*";
      out += "x" + std::to_string(v + 1);
      if (e > 1) out += "^" + std::to_string(e);
      printed = true;
    }
  }
  return out;
}

bool absolutely_positive_after_shift(const Polynomial& p) {
  Polynomial s = p.shift_all_by_one();
  if (s.constant_term() <= 0) return false;
  for (auto& [m, c] : s.terms())
    if (c < 0) return false;
  return true;
}

}  // namespace accomp

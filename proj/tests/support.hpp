#pragma once

// Shared fixtures for the test suites: a tiny signature helper, seeded random
// generators for terms / substitutions / rule sets, and the brute-force
// oracles the property suites compare against.

#include <random>

#include "accomp/ac.hpp"
#include "accomp/term.hpp"
#include "accomp/wst.hpp"

namespace accomp::testing {

/// Signature fixture: declare variables first, then parse terms with t().
struct Sig {
  SymbolTable syms;
  VarPool vars;

  Sig(std::initializer_list<std::string> var_names = {"x", "y", "z", "w"}) {
    for (const std::string& n : var_names) vars.intern(n);
  }

  Symbol fun(const std::string& name, int arity, Theory th = Theory::none) {
    return syms.intern(name, arity, th);
  }
  Term v(const std::string& name) { return Term::variable(vars.intern(name)); }
  Term t(const std::string& text) { return parse_term_text(text, syms, vars); }
  Rule rule(const std::string& l, const std::string& r) {
    return Rule(t(l), t(r));
  }
  Equation eq(const std::string& l, const std::string& r) {
    return Equation{t(l), t(r)};
  }
};

/// Random terms over a fixed signature, sized and seeded for repeatability.
struct Gen {
  std::mt19937 rng;
  std::vector<Symbol> symbols;
  std::vector<Var> variables;

  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term term(int budget) {
    if (budget <= 1 && !variables.empty() && pick(2) == 0)
      return Term::variable(variables[static_cast<size_t>(pick(
          static_cast<int>(variables.size())))]);
    // choose a symbol that fits the budget, retrying a few times
    for (int attempt = 0; attempt < 8; ++attempt) {
      Symbol f = symbols[static_cast<size_t>(pick(static_cast<int>(symbols.size())))];
      if (f->arity >= budget && f->arity > 0) continue;
      std::vector<Term> args;
      int rest = budget - 1;
      for (int i = 0; i < f->arity; ++i) {
        int share = f->arity == 0 ? 0 : std::max(1, rest / (f->arity - i));
        args.push_back(term(std::min(share, rest)));
        rest -= args.back().size();
      }
      return Term::app(f, std::move(args));
    }
    if (!variables.empty())
      return Term::variable(variables[static_cast<size_t>(pick(
          static_cast<int>(variables.size())))]);
    for (Symbol f : symbols)
      if (f->arity == 0) return Term::app(f);
    throw std::logic_error("generator signature has no constants");
  }

  Term ground_term(int budget) {
    std::vector<Var> saved;
    saved.swap(variables);
    Term out = term(budget);
    saved.swap(variables);
    return out;
  }

  Substitution subst(int max_terms_size) {
    Substitution s;
    for (Var v : variables)
      if (pick(2) == 0) s.bind(v, term(max_terms_size));
    return s;
  }
};

/// True iff sigma is an instance of tau on sigma's domain is wrong way round:
/// checks there is a delta with tau = sigma . delta, i.e. sigma is more
/// general, by matching the instantiated tuple.
inline bool more_general_than(const Substitution& sigma, const Substitution& tau,
                              const Term& scope) {
  Term lhs = sigma.apply(scope);
  Term rhs = tau.apply(scope);
  return match(lhs, rhs).has_value();
}

/// Set equality of equation collections modulo variable renaming; with
/// `modulo_symmetry` an equation also matches its mirror image.
inline bool same_equations(const std::vector<Equation>& found,
                           const std::vector<Equation>& expected,
                           bool modulo_symmetry = false) {
  auto matches = [&](const Equation& a, const Equation& b) {
    if (is_pair_variant(a.lhs, a.rhs, b.lhs, b.rhs)) return true;
    return modulo_symmetry && is_pair_variant(a.lhs, a.rhs, b.rhs, b.lhs);
  };
  for (const Equation& e : found) {
    bool ok = false;
    for (const Equation& x : expected)
      if (matches(e, x)) ok = true;
    if (!ok) return false;
  }
  for (const Equation& x : expected) {
    bool ok = false;
    for (const Equation& e : found)
      if (matches(e, x)) ok = true;
    if (!ok) return false;
  }
  return true;
}

/// Same-rule-set check up to renaming (literal similarity).
inline bool same_rules(const Trs& found, const Trs& expected) {
  auto covered = [](const Rule& r, const Trs& in) {
    for (const Rule& q : in)
      if (is_rule_variant(r, q)) return true;
    return false;
  };
  for (const Rule& r : found)
    if (!covered(r, expected)) return false;
  for (const Rule& r : expected)
    if (!covered(r, found)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// property drivers, shared between the unit suites and the acceptance suite;
// each returns the first counterexample found, or nothing

/// ac_equal agrees with membership in the brute-force equivalence class.
inline std::optional<std::string> prop_ac_equal_vs_enumeration(Gen& g,
                                                               int cases) {
  for (int i = 0; i < cases; ++i) {
    Term s = g.term(7);
    Term t = g.term(7);
    std::vector<Term> cls = ac_class_enumerate(s);
    bool in_class = false;
    for (const Term& m : cls)
      if (m == t) in_class = true;
    if (ac_equal(s, t) != in_class)
      return "ac_equal mismatch: " + print_term(s) + " vs " + print_term(t);
    for (const Term& m : cls)
      if (!ac_equal(s, m))
        return "class member not ac_equal: " + print_term(s) + " vs " +
               print_term(m);
  }
  return std::nullopt;
}

/// ac_match is sound and complete against syntactic matching over the
/// enumerated class of the subject.
inline std::optional<std::string> prop_ac_match_vs_enumeration(Gen& g,
                                                               int cases) {
  for (int i = 0; i < cases; ++i) {
    Term pattern = g.term(5);
    Term subject = g.ground_term(6);
    std::vector<Substitution> found = ac_match(pattern, subject);
    for (const Substitution& sigma : found)
      if (!ac_equal(sigma.apply(pattern), subject))
        return "unsound ac_match solution for " + print_term(pattern) +
               " against " + print_term(subject);
    // completeness: every syntactic match of a class member is covered
    for (const Term& m : ac_class_enumerate(subject)) {
      auto sigma = match(pattern, m);
      if (!sigma) continue;
      bool covered = false;
      for (const Substitution& have : found) {
        bool same = true;
        for (auto& [v, t] : *sigma) {
          const Term* ht = have.lookup(v);
          if (!ht || !ac_equal(*ht, t)) same = false;
        }
        if (same && have.size() == sigma->size()) covered = true;
      }
      if (!covered)
        return "ac_match missed a solution: " + print_term(pattern) +
               " against " + print_term(subject) + " via " + print_term(m);
    }
  }
  return std::nullopt;
}

/// n-step reachability modulo the theory agrees between rewriting anywhere
/// in the class and the extended-system relation (sets of canonical forms).
inline std::optional<std::string> prop_step_set_equivalence(Gen& g,
                                                            const Trs& rules,
                                                            int cases,
                                                            int max_n = 3) {
  for (int i = 0; i < cases; ++i) {
    Term t0 = g.ground_term(6);
    // relation one: enumerate the class, plain step, close under the class
    std::set<Term, TermLess> slow{canonical_term(t0)};
    // relation two: theory-matching steps over the extended system
    std::set<Term, TermLess> reached{t0};
    for (int n = 0; n < max_n; ++n) {
      std::set<Term, TermLess> slow_next;
      for (const Term& c : slow)
        for (const Term& member : ac_class_enumerate(c))
          for (const RewriteStep& st :
               rewrite_steps(member, rules, RelationKind::plain))
            slow_next.insert(canonical_term(st.result));
      std::set<Term, TermLess> fast_next;
      for (const Term& u : reached)
        for (const RewriteStep& st :
             rewrite_steps(u, rules, RelationKind::modulo))
          fast_next.insert(st.result);
      std::set<Term, TermLess> fast_canon;
      for (const Term& u : fast_next) fast_canon.insert(canonical_term(u));
      if (slow_next != fast_canon)
        return "step sets differ at n=" + std::to_string(n + 1) + " from " +
               print_term(t0);
      slow = std::move(slow_next);
      reached = std::move(fast_next);
      if (slow.empty()) break;
    }
  }
  return std::nullopt;
}

/// Replaces up to |pool| distinct subterms by fresh variables, recording the
/// inverse bindings; the result generalizes the input.
inline Term abstract_term(const Term& w, Gen& g, std::vector<Var>& pool,
                          Substitution& inverse) {
  if (!pool.empty() && w.size() > 1 && g.pick(4) == 0) {
    Var v = pool.back();
    pool.pop_back();
    inverse.bind(v, w);
    return Term::variable(v);
  }
  if (w.is_var()) return w;
  std::vector<Term> args;
  for (const Term& a : w.args()) args.push_back(abstract_term(a, g, pool, inverse));
  return Term::app(w.sym(), std::move(args));
}

/// Soundness, idempotence and generality of the most general unifier on
/// constructed unifiable pairs (two generalizations of a shared witness).
inline std::optional<std::string> prop_mgu(Gen& g, VarPool& vars, Symbol pair_sym,
                                           int cases) {
  for (int i = 0; i < cases; ++i) {
    Term w = g.ground_term(8);
    Substitution tau;
    std::vector<Var> pool_p{vars.intern("mx"), vars.intern("my"),
                            vars.intern("mz")};
    std::vector<Var> pool_q{vars.intern("nx"), vars.intern("ny"),
                            vars.intern("nz")};
    Term p = abstract_term(w, g, pool_p, tau);
    Term q = abstract_term(w, g, pool_q, tau);
    auto mgu = unify(p, q);
    if (!mgu) return "missed unifier for " + print_term(p) + " and " + print_term(q);
    if (mgu->apply(p) != mgu->apply(q))
      return "mgu does not unify " + print_term(p) + " and " + print_term(q);
    if (mgu->apply(mgu->apply(p)) != mgu->apply(p))
      return "mgu is not idempotent on " + print_term(p);
    Term scope = Term::app(pair_sym, {p, q});
    if (!more_general_than(*mgu, tau, scope))
      return "mgu not most general for " + print_term(p) + " and " +
             print_term(q);
  }
  return std::nullopt;
}

/// Strict coherence: every member of a class reaches the same canonical
/// reducts under the extended-system relation.
inline std::optional<std::string> prop_strict_coherence(Gen& g, const Trs& rules,
                                                        int cases) {
  for (int i = 0; i < cases; ++i) {
    Term t = g.ground_term(6);
    std::optional<std::set<Term, TermLess>> expected;
    for (const Term& member : ac_class_enumerate(t)) {
      std::set<Term, TermLess> reducts;
      for (const RewriteStep& st :
           rewrite_steps(member, rules, RelationKind::modulo))
        reducts.insert(canonical_term(st.result));
      if (!expected) expected = std::move(reducts);
      else if (*expected != reducts)
        return "canonical reduct sets differ within the class of " +
               print_term(t);
    }
  }
  return std::nullopt;
}

/// All terms reachable from t in up to `depth` conversion steps with the
/// given equations (both directions) and the theory axioms: the brute-force
/// validity oracle.
inline bool convertible_within(const Term& s, const Term& t,
                               const std::vector<Equation>& es, int depth,
                               std::size_t cap = 50000) {
  Trs steps;
  Var floor = std::max(max_var(s), max_var(t));
  for (const Equation& e : es) {
    floor = std::max({floor, max_var(e.lhs), max_var(e.rhs)});
  }
  for (const Equation& e : es) {
    if (auto r = Rule::try_make(e.lhs, e.rhs)) steps.push_back(*r);
    if (auto r = Rule::try_make(e.rhs, e.lhs)) steps.push_back(*r);
  }
  std::set<Symbol> symset;
  std::function<void(const Term&)> collect = [&](const Term& u) {
    if (u.is_var()) return;
    symset.insert(u.sym());
    for (const Term& a : u.args()) collect(a);
  };
  collect(s);
  collect(t);
  for (const Equation& e : es) {
    collect(e.lhs);
    collect(e.rhs);
  }
  std::vector<Symbol> symv(symset.begin(), symset.end());
  for (const Rule& ax : theory_axioms(symv, floor)) steps.push_back(ax);

  std::set<Term, TermLess> seen{s};
  std::vector<Term> frontier{s};
  if (s == t) return true;
  for (int d = 0; d < depth; ++d) {
    std::vector<Term> next;
    for (const Term& u : frontier)
      for (const RewriteStep& st : rewrite_steps(u, steps, RelationKind::plain)) {
        if (st.result == t) return true;
        if (seen.size() >= cap) return false;
        if (seen.insert(st.result).second) next.push_back(st.result);
      }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return false;
}

}  // namespace accomp::testing

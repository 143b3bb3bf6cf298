#include "accomp/ac.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace accomp {

// ---------------------------------------------------------------------------
// CanonTerm

namespace {
inline std::size_t mixc(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

CanonTerm CanonTerm::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->var = v;
  n->hash = mixc(0xc5c5, static_cast<std::size_t>(v));
  CanonTerm t;
  t.node_ = std::move(n);
  return t;
}

CanonTerm CanonTerm::app(Symbol f, std::vector<CanonTerm> args) {
  std::vector<CanonTerm> out;
  if (f->is_ac()) {
    out.reserve(args.size());
    for (CanonTerm& a : args) {
      if (!a.is_var() && a.sym() == f)
        out.insert(out.end(), a.args().begin(), a.args().end());
      else
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), CanonTermLess{});
  } else if (f->theory == Theory::comm) {
    out = std::move(args);
    std::sort(out.begin(), out.end(), CanonTermLess{});
  } else {
    out = std::move(args);
  }
  auto n = std::make_shared<Node>();
  n->sym = f;
  std::size_t h = std::hash<std::string>{}(f->name);
  int sz = 1;
  for (const CanonTerm& a : out) {
    h = mixc(h, a.hash());
    sz += a.size();
  }
  n->hash = h;
  n->size = sz;
  n->args = std::move(out);
  CanonTerm t;
  t.node_ = std::move(n);
  return t;
}

bool CanonTerm::operator==(const CanonTerm& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash) return false;
  if (is_var() != other.is_var()) return false;
  if (is_var()) return var() == other.var();
  if (sym() != other.sym() || args().size() != other.args().size()) return false;
  for (size_t i = 0; i < args().size(); ++i)
    if (node_->args[i] != other.node_->args[i]) return false;
  return true;
}

int compare(const CanonTerm& a, const CanonTerm& b) {
  if (a.is_var()) {
    if (!b.is_var()) return -1;
    return a.var() < b.var() ? -1 : a.var() == b.var() ? 0 : 1;
  }
  if (b.is_var()) return 1;
  if (a.sym() != b.sym()) return a.sym()->name < b.sym()->name ? -1 : 1;
  size_t n = std::min(a.args().size(), b.args().size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.args()[i], b.args()[i]);
    if (c != 0) return c;
  }
  if (a.args().size() != b.args().size())
    return a.args().size() < b.args().size() ? -1 : 1;
  return 0;
}

CanonTerm flatten_canonical(const Term& t) {
  if (t.is_var()) return CanonTerm::variable(t.var());
  std::vector<CanonTerm> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(flatten_canonical(a));
  return CanonTerm::app(t.sym(), std::move(args));
}

Term unflatten(const CanonTerm& c) {
  if (c.is_var()) return Term::variable(c.var());
  std::vector<Term> args;
  args.reserve(c.args().size());
  for (const CanonTerm& a : c.args()) args.push_back(unflatten(a));
  if (c.sym()->is_ac() && args.size() > 2) {
    Term acc = args.back();
    for (size_t i = args.size() - 1; i-- > 1;)
      acc = Term::app(c.sym(), {args[i], acc});
    return Term::app(c.sym(), {args[0], acc});
  }
  return Term::app(c.sym(), std::move(args));
}

Term canonical_term(const Term& t) { return unflatten(flatten_canonical(t)); }

bool ac_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  return flatten_canonical(a) == flatten_canonical(b);
}

bool ac_equal(const Equation& e) { return ac_equal(e.lhs, e.rhs); }

// ---------------------------------------------------------------------------
// AC matching

namespace {

using Binding = std::map<Var, CanonTerm>;

// The multiset of f-arguments a bound value contributes.
std::vector<CanonTerm> decompose(const CanonTerm& value, Symbol f) {
  if (!value.is_var() && value.sym() == f)
    return {value.args().begin(), value.args().end()};
  return {value};
}

CanonTerm rebuild(Symbol f, std::vector<CanonTerm> items) {
  if (items.size() == 1) return items[0];
  return CanonTerm::app(f, std::move(items));
}

struct Matcher {
  const std::function<bool(const Binding&)>& emit;
  Binding binding;
  bool stopped = false;

  void found() {
    if (!emit(binding)) stopped = true;
  }

  // Matches pattern against subject under the current binding, invoking
  // `next` for every consistent extension.
  void match(const CanonTerm& pattern, const CanonTerm& subject,
             const std::function<void()>& next) {
    if (stopped) return;
    if (pattern.is_var()) {
      auto it = binding.find(pattern.var());
      if (it != binding.end()) {
        if (it->second == subject) next();
        return;
      }
      binding.emplace(pattern.var(), subject);
      next();
      binding.erase(pattern.var());
      return;
    }
    if (subject.is_var() || pattern.sym() != subject.sym()) return;
    Symbol f = pattern.sym();
    if (f->is_ac()) {
      match_ac(f, pattern, subject, next);
      return;
    }
    if (f->theory == Theory::comm) {
      // both argument orders; identical arguments need only one
      match_seq(pattern, {subject.args()[0], subject.args()[1]}, 0, next);
      if (stopped) return;
      if (subject.args()[0] != subject.args()[1])
        match_seq(pattern, {subject.args()[1], subject.args()[0]}, 0, next);
      return;
    }
    std::vector<CanonTerm> subj(subject.args().begin(), subject.args().end());
    match_seq(pattern, std::move(subj), 0, next);
  }

  void match_seq(const CanonTerm& pattern, std::vector<CanonTerm> subj, size_t i,
                 const std::function<void()>& next) {
    if (stopped) return;
    if (i == subj.size()) {
      next();
      return;
    }
    match(pattern.args()[i], subj[i],
          [&] { match_seq(pattern, subj, i + 1, next); });
  }

  struct AcState {
    Symbol f;
    std::vector<CanonTerm> items;  // distinct subject arguments, sorted
    std::vector<int> avail;        // remaining multiplicities
    std::vector<CanonTerm> pats;   // pattern arguments, non-variables first
  };

  void match_ac(Symbol f, const CanonTerm& pattern, const CanonTerm& subject,
                const std::function<void()>& next) {
    AcState st;
    st.f = f;
    for (const CanonTerm& s : subject.args()) {
      if (!st.items.empty() && st.items.back() == s)
        ++st.avail.back();
      else {
        st.items.push_back(s);
        st.avail.push_back(1);
      }
    }
    // order: applications first (most constrained), variables last;
    // each group keeps the canonical order for determinism
    for (const CanonTerm& p : pattern.args())
      if (!p.is_var()) st.pats.push_back(p);
    for (const CanonTerm& p : pattern.args())
      if (p.is_var()) st.pats.push_back(p);
    if (st.pats.size() > subject.args().size()) return;
    match_ac_rec(st, 0, next);
  }

  bool take(AcState& st, const std::vector<CanonTerm>& needed) {
    // consume a multiset if fully available; undo handled by caller via put
    std::vector<int> need(st.items.size(), 0);
    for (const CanonTerm& n : needed) {
      auto it = std::lower_bound(st.items.begin(), st.items.end(), n,
                                 CanonTermLess{});
      if (it == st.items.end() || *it != n) return false;
      size_t idx = static_cast<size_t>(it - st.items.begin());
      if (++need[idx] > st.avail[idx]) return false;
    }
    for (size_t i = 0; i < need.size(); ++i) st.avail[i] -= need[i];
    return true;
  }

  void put(AcState& st, const std::vector<CanonTerm>& needed) {
    for (const CanonTerm& n : needed) {
      auto it = std::lower_bound(st.items.begin(), st.items.end(), n,
                                 CanonTermLess{});
      ++st.avail[static_cast<size_t>(it - st.items.begin())];
    }
  }

  void match_ac_rec(AcState& st, size_t i, const std::function<void()>& next) {
    if (stopped) return;
    if (i == st.pats.size()) {
      for (int a : st.avail)
        if (a != 0) return;  // exact match required
      next();
      return;
    }
    const CanonTerm& p = st.pats[i];
    if (p.is_var()) {
      auto bound = binding.find(p.var());
      if (bound != binding.end()) {
        std::vector<CanonTerm> needed = decompose(bound->second, st.f);
        if (take(st, needed)) {
          match_ac_rec(st, i + 1, next);
          put(st, needed);
        }
        return;
      }
      // unbound variable: assign a nonempty sub-multiset of the remainder;
      // the final pattern argument must absorb everything left
      bool last = (i + 1 == st.pats.size());
      if (last) {
        std::vector<CanonTerm> all;
        for (size_t j = 0; j < st.items.size(); ++j)
          for (int c = 0; c < st.avail[j]; ++c) all.push_back(st.items[j]);
        if (all.empty()) return;
        std::vector<int> taken = st.avail;
        for (auto& a : st.avail) a = 0;
        binding.emplace(p.var(), rebuild(st.f, std::move(all)));
        match_ac_rec(st, i + 1, next);
        binding.erase(p.var());
        st.avail = std::move(taken);
        return;
      }
      std::vector<int> sel(st.items.size(), 0);
      enumerate_selection(st, p.var(), sel, 0, false, i, next);
      return;
    }
    // application pattern argument: consumes exactly one subject argument
    for (size_t j = 0; j < st.items.size(); ++j) {
      if (stopped) return;
      if (st.avail[j] == 0 || st.items[j].is_var()) continue;
      st.avail[j]--;
      match(p, st.items[j], [&] { match_ac_rec(st, i + 1, next); });
      st.avail[j]++;
    }
  }

  // Deterministic enumeration of nonempty selections sel <= avail; larger
  // counts first so the leading solution keeps items in place.
  void enumerate_selection(AcState& st, Var v, std::vector<int>& sel, size_t j,
                           bool nonempty, size_t i,
                           const std::function<void()>& next) {
    if (stopped) return;
    if (j == st.items.size()) {
      if (!nonempty) return;
      std::vector<CanonTerm> chosen;
      for (size_t k = 0; k < sel.size(); ++k)
        for (int c = 0; c < sel[k]; ++c) chosen.push_back(st.items[k]);
      for (size_t k = 0; k < sel.size(); ++k) st.avail[k] -= sel[k];
      binding.emplace(v, rebuild(st.f, std::move(chosen)));
      match_ac_rec(st, i + 1, next);
      binding.erase(v);
      for (size_t k = 0; k < sel.size(); ++k) st.avail[k] += sel[k];
      return;
    }
    for (int c = st.avail[j]; c >= 0; --c) {
      sel[j] = c;
      enumerate_selection(st, v, sel, j + 1, nonempty || c > 0, i, next);
      if (stopped) break;
    }
    sel[j] = 0;
  }
};

}  // namespace

namespace {
struct BindingKeyLess {
  bool operator()(const std::vector<std::pair<Var, CanonTerm>>& a,
                  const std::vector<std::pair<Var, CanonTerm>>& b) const {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
      if (a[i].first != b[i].first) return a[i].first < b[i].first;
      int c = compare(a[i].second, b[i].second);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};
}  // namespace

void ac_match_each(const Term& pattern, const Term& subject,
                   const std::function<bool(const Substitution&)>& emit) {
  CanonTerm p = flatten_canonical(pattern);
  CanonTerm s = flatten_canonical(subject);
  // solutions already arrive with canonical bindings; the set guards
  // against duplicates from different search paths
  std::set<std::vector<std::pair<Var, CanonTerm>>, BindingKeyLess> seen;
  std::function<bool(const Binding&)> sink = [&](const Binding& b) {
    std::vector<std::pair<Var, CanonTerm>> key(b.begin(), b.end());
    if (!seen.insert(std::move(key)).second) return true;
    Substitution out;
    for (auto& [v, c] : b) out.bind(v, unflatten(c));
    return emit(out);
  };
  Matcher m{sink};
  m.match(p, s, [&] { m.found(); });
}

std::vector<Substitution> ac_match(const Term& pattern, const Term& subject) {
  std::vector<Substitution> out;
  ac_match_each(pattern, subject, [&](const Substitution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::optional<Substitution> ac_match_first(const Term& pattern,
                                           const Term& subject) {
  std::optional<Substitution> out;
  ac_match_each(pattern, subject, [&](const Substitution& s) {
    out = s;
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// extended rules

ExtendedSystem extend_rules(const Trs& r) {
  ExtendedSystem ext;
  ext.rules = r;
  for (size_t i = 0; i < r.size(); ++i) {
    const Rule& rule = r[i];
    Symbol f = rule.lhs().sym();
    if (!f->is_ac()) continue;
    Term x = Term::variable(max_var(rule) + 1);
    Rule e(Term::app(f, {rule.lhs(), x}), Term::app(f, {rule.rhs(), x}));
    ext.extensions.push_back({std::move(e), static_cast<int>(i)});
  }
  return ext;
}

std::vector<const Rule*> ExtendedSystem::all() const {
  std::vector<const Rule*> out;
  out.reserve(rules.size() + extensions.size());
  for (const Rule& r : rules) out.push_back(&r);
  for (const Extension& e : extensions) out.push_back(&e.rule);
  return out;
}

// ---------------------------------------------------------------------------
// rewriting

namespace {

// One redex search at a fixed position; returns false if the enumeration
// was stopped by the callback.
bool steps_at(const Term& whole, const Term& sub, const Position& pos,
              std::span<const Rule* const> rules, bool theory_match,
              bool fill_canonical,
              const std::function<bool(const RewriteStep&)>& emit) {
  for (const Rule* rule : rules) {
    if (theory_match) {
      bool keep = true;
      ac_match_each(rule->lhs(), sub, [&](const Substitution& sigma) {
        RewriteStep st{pos, *rule, sigma,
                       replace_at(whole, pos, sigma.apply(rule->rhs())),
                       std::nullopt};
        if (fill_canonical) st.result_canonical = canonical_term(st.result);
        keep = emit(st);
        return keep;
      });
      if (!keep) return false;
    } else {
      auto sigma = match(rule->lhs(), sub);
      if (!sigma) continue;
      RewriteStep st{pos, *rule, *sigma,
                     replace_at(whole, pos, sigma->apply(rule->rhs())),
                     std::nullopt};
      if (!emit(st)) return false;
    }
  }
  return true;
}

bool steps_rec(const Term& whole, const Term& sub, Position& pos,
               std::span<const Rule* const> rules, bool theory_match,
               bool fill_canonical,
               const std::function<bool(const RewriteStep&)>& emit) {
  if (sub.is_var()) return true;
  if (!steps_at(whole, sub, pos, rules, theory_match, fill_canonical, emit))
    return false;
  for (size_t i = 0; i < sub.args().size(); ++i) {
    pos.push_back(static_cast<int>(i) + 1);
    bool cont = steps_rec(whole, sub.arg(i), pos, rules, theory_match,
                          fill_canonical, emit);
    pos.pop_back();
    if (!cont) return false;
  }
  return true;
}

}  // namespace

void rewrite_step_each(const Term& t, const Trs& r, RelationKind kind,
                       const std::function<bool(const RewriteStep&)>& emit) {
  Position pos;
  if (kind == RelationKind::modulo) {
    ExtendedSystem ext = extend_rules(r);
    std::vector<const Rule*> listing = ext.all();
    steps_rec(t, t, pos, listing, true, true, emit);
    return;
  }
  std::vector<const Rule*> listing;
  listing.reserve(r.size());
  for (const Rule& rule : r) listing.push_back(&rule);
  steps_rec(t, t, pos, listing, kind == RelationKind::ps, false, emit);
}

std::vector<RewriteStep> rewrite_steps(const Term& t, const Trs& r,
                                       RelationKind kind) {
  std::vector<RewriteStep> out;
  rewrite_step_each(t, r, kind, [&](const RewriteStep& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::optional<RewriteStep> first_rewrite_step(const Term& t, const Trs& r,
                                              RelationKind kind) {
  std::optional<RewriteStep> out;
  rewrite_step_each(t, r, kind, [&](const RewriteStep& s) {
    out = s;
    return false;
  });
  return out;
}

bool is_reducible(const Term& t, const Trs& r, RelationKind kind) {
  return first_rewrite_step(t, r, kind).has_value();
}

// ---------------------------------------------------------------------------
// normal forms

namespace {

struct NfCtx {
  std::vector<const Rule*> rules;
  bool theory_match = false;
  long fuel = 0;
  std::unordered_set<Term, TermHash> normal;
};

std::optional<Term> root_step(const Term& t, NfCtx& ctx) {
  for (const Rule* rule : ctx.rules) {
    if (ctx.theory_match) {
      auto sigma = ac_match_first(rule->lhs(), t);
      if (sigma) return sigma->apply(rule->rhs());
    } else {
      auto sigma = match(rule->lhs(), t);
      if (sigma) return sigma->apply(rule->rhs());
    }
  }
  return std::nullopt;
}

Term nf(Term t, NfCtx& ctx) {
  for (;;) {
    if (ctx.normal.count(t)) return t;
    if (t.is_var()) {
      ctx.normal.insert(t);
      return t;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const Term& a : t.args()) {
      args.push_back(nf(a, ctx));
      if (args.back() != a) changed = true;
    }
    if (changed) t = Term::app(t.sym(), std::move(args));
    std::optional<Term> next = root_step(t, ctx);
    if (!next) {
      ctx.normal.insert(t);
      return t;
    }
    if (--ctx.fuel < 0)
      throw FuelExceeded("rewrite step budget exhausted while normalizing");
    t = *next;
  }
}

}  // namespace

Term normal_form(const Term& t, const Trs& r, RelationKind kind, long fuel) {
  NfCtx ctx;
  ctx.fuel = fuel;
  ExtendedSystem ext;
  if (kind == RelationKind::modulo) {
    ext = extend_rules(r);
    ctx.rules = ext.all();
    ctx.theory_match = true;
  } else {
    for (const Rule& rule : r) ctx.rules.push_back(&rule);
    ctx.theory_match = (kind == RelationKind::ps);
  }
  return nf(t, ctx);
}

bool joinable_mod_ac(const Term& s, const Term& t, const Trs& r, long fuel) {
  if (ac_equal(s, t)) return true;
  Term snf = normal_form(s, r, RelationKind::plain, fuel);
  Term tnf = normal_form(t, r, RelationKind::plain, fuel);
  return ac_equal(snf, tnf);
}

// ---------------------------------------------------------------------------
// the class oracle and the theory axioms

Trs theory_axioms(std::span<const Symbol> symbols, Var floor) {
  Term x = Term::variable(floor + 1);
  Term y = Term::variable(floor + 2);
  Term z = Term::variable(floor + 3);
  Trs out;
  std::vector<Symbol> sorted(symbols.begin(), symbols.end());
  std::sort(sorted.begin(), sorted.end(), symbol_less);
  for (Symbol f : sorted) {
    if (f->theory == Theory::none) continue;
    auto mk = [&](const Term& a, const Term& b) { return Term::app(f, {a, b}); };
    if (f->is_ac()) {
      out.emplace_back(mk(mk(x, y), z), mk(x, mk(y, z)));
      out.emplace_back(mk(x, mk(y, z)), mk(mk(x, y), z));
    }
    out.emplace_back(mk(x, y), mk(y, x));
  }
  return out;
}

std::vector<Term> ac_class_enumerate(const Term& t, std::size_t bound) {
  std::set<Symbol> syms;
  std::function<void(const Term&)> collect = [&](const Term& u) {
    if (u.is_var()) return;
    syms.insert(u.sym());
    for (const Term& a : u.args()) collect(a);
  };
  collect(t);
  std::vector<Symbol> symv(syms.begin(), syms.end());
  Trs axioms = theory_axioms(symv, max_var(t));

  std::set<Term, TermLess> seen{t};
  std::deque<Term> queue{t};
  while (!queue.empty()) {
    Term u = queue.front();
    queue.pop_front();
    for (const RewriteStep& st : rewrite_steps(u, axioms, RelationKind::plain)) {
      if (seen.insert(st.result).second) {
        if (seen.size() > bound)
          throw std::length_error("equivalence class exceeds bound");
        queue.push_back(st.result);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace accomp

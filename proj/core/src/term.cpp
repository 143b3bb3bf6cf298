#include "accomp/term.hpp"

#include <algorithm>

namespace accomp {

// ---------------------------------------------------------------------------
// SymbolTable

Symbol SymbolTable::intern(const std::string& name, int arity, Theory theory) {
  if (theory != Theory::none && arity != 2)
    throw std::invalid_argument("theory symbol " + name + " must be binary");
  auto it = index_.find(name);
  if (it != index_.end()) {
    SymbolInfo* s = it->second;
    if (s->arity != arity)
      throw std::invalid_argument("arity clash for symbol " + name + ": " +
                                  std::to_string(s->arity) + " vs " +
                                  std::to_string(arity));
    if (theory != Theory::none && s->theory == Theory::none) s->theory = theory;
    else if (theory != Theory::none && s->theory != theory)
      throw std::invalid_argument("theory clash for symbol " + name);
    return s;
  }
  pool_.push_back(SymbolInfo{name, arity, theory});
  SymbolInfo* s = &pool_.back();
  index_[name] = s;
  return s;
}

Symbol SymbolTable::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : it->second;
}

std::vector<Symbol> SymbolTable::symbols() const {
  std::vector<Symbol> out;
  out.reserve(index_.size());
  for (auto& [_, s] : index_) out.push_back(s);
  return out;  // map iteration is already name-sorted
}

// ---------------------------------------------------------------------------
// VarPool

Var VarPool::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  Var v = static_cast<Var>(names_.size());
  names_.push_back(name);
  index_[name] = v;
  return v;
}

std::optional<Var> VarPool::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Var VarPool::fresh() {
  for (;;) {
    std::string cand = "v" + std::to_string(fresh_counter_++);
    if (!index_.count(cand)) return intern(cand);
  }
}

std::string VarPool::name(Var v) const {
  if (v >= 0 && v < static_cast<Var>(names_.size())) return names_[v];
  std::string cand = "_v" + std::to_string(v);
  while (index_.count(cand)) cand += "_";
  return cand;
}

// ---------------------------------------------------------------------------
// Term

namespace {
inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

Term Term::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->var = v;
  n->hash = mix(0x5a5a, static_cast<std::size_t>(v));
  n->size = 1;
  Term t;
  t.node_ = std::move(n);
  return t;
}

Term Term::app(Symbol f, std::vector<Term> args) {
  if (static_cast<int>(args.size()) != f->arity)
    throw std::invalid_argument("symbol " + f->name + " expects " +
                                std::to_string(f->arity) + " arguments, got " +
                                std::to_string(args.size()));
  auto n = std::make_shared<Node>();
  n->sym = f;
  std::size_t h = std::hash<std::string>{}(f->name);
  int sz = 1;
  for (const Term& a : args) {
    h = mix(h, a.hash());
    sz += a.size();
  }
  n->hash = h;
  n->size = sz;
  n->args = std::move(args);
  Term t;
  t.node_ = std::move(n);
  return t;
}

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash) return false;
  if (is_var() != other.is_var()) return false;
  if (is_var()) return var() == other.var();
  if (sym() != other.sym()) return false;
  for (size_t i = 0; i < node_->args.size(); ++i)
    if (node_->args[i] != other.node_->args[i]) return false;
  return true;
}

int compare(const Term& a, const Term& b) {
  if (a.is_var()) {
    if (!b.is_var()) return -1;
    return a.var() < b.var() ? -1 : a.var() == b.var() ? 0 : 1;
  }
  if (b.is_var()) return 1;
  if (a.sym() != b.sym()) return a.sym()->name < b.sym()->name ? -1 : 1;
  for (size_t i = 0; i < a.args().size(); ++i) {
    int c = compare(a.arg(i), b.arg(i));
    if (c != 0) return c;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// positions

static void collect_positions(const Term& t, Position& here,
                              std::vector<std::pair<Position, PosKind>>& out) {
  out.emplace_back(here, t.is_var() ? PosKind::variable : PosKind::function);
  if (t.is_var()) return;
  for (size_t i = 0; i < t.args().size(); ++i) {
    here.push_back(static_cast<int>(i) + 1);
    collect_positions(t.arg(i), here, out);
    here.pop_back();
  }
}

std::vector<std::pair<Position, PosKind>> positions(const Term& t) {
  std::vector<std::pair<Position, PosKind>> out;
  Position here;
  collect_positions(t, here, out);
  return out;
}

std::vector<Position> function_positions(const Term& t) {
  std::vector<Position> out;
  for (auto& [p, k] : positions(t))
    if (k == PosKind::function) out.push_back(p);
  return out;
}

const Term* subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (int i : p) {
    if (cur->is_var() || i < 1 || i > static_cast<int>(cur->args().size()))
      return nullptr;
    cur = &cur->arg(i - 1);
  }
  return cur;
}

static Term replace_rec(const Term& t, const Position& p, size_t depth,
                        const Term& u) {
  if (depth == p.size()) return u;
  int i = p[depth];
  if (t.is_var() || i < 1 || i > static_cast<int>(t.args().size()))
    throw std::out_of_range("invalid position in replace_at");
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[i - 1] = replace_rec(args[i - 1], p, depth + 1, u);
  return Term::app(t.sym(), std::move(args));
}

Term replace_at(const Term& t, const Position& p, const Term& u) {
  return replace_rec(t, p, 0, u);
}

// ---------------------------------------------------------------------------
// Substitution

void Substitution::bind(Var v, const Term& t) {
  if (t.is_var() && t.var() == v) {
    map_.erase(v);
    return;
  }
  map_[v] = t;
}

const Term* Substitution::lookup(Var v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty()) return t;
  if (t.is_var()) {
    const Term* b = lookup(t.var());
    return b ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(apply(a));
    if (args.back() != a) changed = true;
  }
  if (!changed) return t;
  return Term::app(t.sym(), std::move(args));
}

Substitution Substitution::compose(const Substitution& other) const {
  Substitution out;
  for (auto& [v, t] : map_) out.bind(v, other.apply(t));
  for (auto& [v, t] : other.map_)
    if (!map_.count(v)) out.bind(v, t);
  return out;
}

Substitution Substitution::restricted_to(const std::set<Var>& dom) const {
  Substitution out;
  for (auto& [v, t] : map_)
    if (dom.count(v)) out.bind(v, t);
  return out;
}

// ---------------------------------------------------------------------------
// Rule

Rule::Rule(Term lhs, Term rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
  if (lhs_.is_var()) throw std::invalid_argument("rule left-hand side is a variable");
  std::set<Var> lv = var_set(lhs_), rv = var_set(rhs_);
  for (Var v : rv)
    if (!lv.count(v))
      throw std::invalid_argument("rule right-hand side has extra variables");
}

std::optional<Rule> Rule::try_make(Term lhs, Term rhs) {
  if (lhs.is_var()) return std::nullopt;
  std::set<Var> lv = var_set(lhs);
  for (Var v : var_set(rhs))
    if (!lv.count(v)) return std::nullopt;
  return Rule(std::move(lhs), std::move(rhs));
}

// ---------------------------------------------------------------------------
// operations

void collect_vars(const Term& t, std::set<Var>& out) {
  if (t.is_var()) {
    out.insert(t.var());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

std::set<Var> var_set(const Term& t) {
  std::set<Var> out;
  collect_vars(t, out);
  return out;
}

static void collect_syms(const Term& t, std::set<Symbol>& out) {
  if (t.is_var()) return;
  out.insert(t.sym());
  for (const Term& a : t.args()) collect_syms(a, out);
}

std::vector<Symbol> symbols_of(const Trs& r) {
  std::set<Symbol> set;
  for (const Rule& rule : r) {
    collect_syms(rule.lhs(), set);
    collect_syms(rule.rhs(), set);
  }
  std::vector<Symbol> out(set.begin(), set.end());
  std::sort(out.begin(), out.end(), symbol_less);
  return out;
}

static bool linear_rec(const Term& t, std::set<Var>& seen) {
  if (t.is_var()) return seen.insert(t.var()).second;
  for (const Term& a : t.args())
    if (!linear_rec(a, seen)) return false;
  return true;
}

bool is_linear(const Term& t) {
  std::set<Var> seen;
  return linear_rec(t, seen);
}

bool is_left_linear(const Trs& r) {
  for (const Rule& rule : r)
    if (!is_linear(rule.lhs())) return false;
  return true;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const Term& a : t.args())
    if (!is_ground(a)) return false;
  return true;
}

namespace {

// Bindings tracked in a plain map so identity bindings still pin the variable.
bool match_rec(const Term& pattern, const Term& subject,
               std::map<Var, Term>& bind) {
  if (pattern.is_var()) {
    auto [it, fresh] = bind.emplace(pattern.var(), subject);
    return fresh || it->second == subject;
  }
  if (subject.is_var() || pattern.sym() != subject.sym()) return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_rec(pattern.arg(i), subject.arg(i), bind)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  std::map<Var, Term> bind;
  if (!match_rec(pattern, subject, bind)) return std::nullopt;
  Substitution s;
  for (auto& [v, t] : bind) s.bind(v, t);
  return s;
}

namespace {

bool occurs(Var v, const Term& t) {
  if (t.is_var()) return t.var() == v;
  for (const Term& a : t.args())
    if (occurs(v, a)) return true;
  return false;
}

// Binds v -> t in sigma, substituting into existing bindings so the result
// stays idempotent.
void solve_bind(Substitution& sigma, Var v, const Term& t) {
  Substitution single;
  single.bind(v, t);
  Substitution updated;
  for (auto& [w, u] : sigma) updated.bind(w, single.apply(u));
  updated.bind(v, t);
  sigma = std::move(updated);
}

}  // namespace

std::optional<Substitution> unify(const Term& s0, const Term& t0) {
  Substitution sigma;
  std::vector<std::pair<Term, Term>> work{{s0, t0}};
  while (!work.empty()) {
    auto [s, t] = work.back();
    work.pop_back();
    s = sigma.apply(s);
    t = sigma.apply(t);
    if (s == t) continue;
    if (s.is_var()) {
      if (occurs(s.var(), t)) return std::nullopt;
      solve_bind(sigma, s.var(), t);
      continue;
    }
    if (t.is_var()) {
      if (occurs(t.var(), s)) return std::nullopt;
      solve_bind(sigma, t.var(), s);
      continue;
    }
    if (s.sym() != t.sym()) return std::nullopt;
    for (size_t i = 0; i < s.args().size(); ++i)
      work.emplace_back(s.arg(i), t.arg(i));
  }
  return sigma;
}

Rule rename_apart(const Rule& r, VarPool& pool) {
  Substitution ren;
  for (Var v : var_set(r.lhs())) ren.bind(v, Term::variable(pool.fresh()));
  return Rule(ren.apply(r.lhs()), ren.apply(r.rhs()));
}

Rule rename_above(const Rule& r, Var floor) {
  Substitution ren;
  Var next = floor + 1;
  for (Var v : var_set(r.lhs())) ren.bind(v, Term::variable(next++));
  return Rule(ren.apply(r.lhs()), ren.apply(r.rhs()));
}

namespace {

// Matching restricted to injective variable-to-variable bindings.
bool renaming_into(const Term& s, const Term& t, std::map<Var, Var>& fwd,
                   std::map<Var, Var>& inv) {
  if (s.is_var()) {
    if (!t.is_var()) return false;
    auto [itf, freshf] = fwd.emplace(s.var(), t.var());
    if (!freshf) return itf->second == t.var();
    auto [iti, freshi] = inv.emplace(t.var(), s.var());
    if (!freshi && iti->second != s.var()) return false;
    return true;
  }
  if (t.is_var() || s.sym() != t.sym()) return false;
  for (size_t i = 0; i < s.args().size(); ++i)
    if (!renaming_into(s.arg(i), t.arg(i), fwd, inv)) return false;
  return true;
}

Substitution to_subst(const std::map<Var, Var>& fwd) {
  Substitution out;
  for (auto& [v, w] : fwd) out.bind(v, Term::variable(w));
  return out;
}

}  // namespace

bool is_variant(const Term& s, const Term& t) {
  if (s.size() != t.size()) return false;
  std::map<Var, Var> fwd, inv;
  return renaming_into(s, t, fwd, inv);
}

std::optional<Substitution> variant_renaming(const Term& s, const Term& t) {
  if (s.size() != t.size()) return std::nullopt;
  std::map<Var, Var> fwd, inv;
  if (!renaming_into(s, t, fwd, inv)) return std::nullopt;
  return to_subst(fwd);
}

bool is_rule_variant(const Rule& a, const Rule& b) {
  return is_pair_variant(a.lhs(), a.rhs(), b.lhs(), b.rhs());
}

bool is_pair_variant(const Term& l1, const Term& r1, const Term& l2,
                     const Term& r2) {
  if (l1.size() != l2.size() || r1.size() != r2.size()) return false;
  std::map<Var, Var> fwd, inv;
  return renaming_into(l1, l2, fwd, inv) && renaming_into(r1, r2, fwd, inv);
}

bool encompasses(const Term& s, const Term& t) {
  if (match(t, s)) return true;
  if (s.is_var()) return false;
  for (const Term& a : s.args())
    if (encompasses(a, t)) return true;
  return false;
}

Var max_var(const Term& t) {
  if (t.is_var()) return t.var();
  Var m = -1;
  for (const Term& a : t.args()) m = std::max(m, max_var(a));
  return m;
}

Var max_var(const Rule& r) { return std::max(max_var(r.lhs()), max_var(r.rhs())); }

Var max_var(const Trs& r) {
  Var m = -1;
  for (const Rule& rule : r) m = std::max(m, max_var(rule));
  return m;
}

}  // namespace accomp

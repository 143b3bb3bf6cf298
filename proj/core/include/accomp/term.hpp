#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace accomp {

/// Equational attribute of a binary function symbol. Symbols flagged `ac`
/// are associative and commutative, `comm` symbols are commutative only.
enum class Theory { none, comm, ac };

struct SymbolInfo {
  std::string name;
  int arity = 0;
  Theory theory = Theory::none;

  bool is_ac() const { return theory == Theory::ac; }
  bool has_theory() const { return theory != Theory::none; }
};

/// Symbols are interned; identity comparison is pointer comparison, the
/// total order used everywhere is by name (unique within a table).
using Symbol = const SymbolInfo*;

inline bool symbol_less(Symbol a, Symbol b) { return a->name < b->name; }

class SymbolTable {
 public:
  /// Returns the existing symbol of this name or creates one. Throws on
  /// arity or theory mismatch with a previous use.
  Symbol intern(const std::string& name, int arity, Theory theory = Theory::none);
  Symbol find(const std::string& name) const;  // nullptr if absent
  std::vector<Symbol> symbols() const;         // sorted by name

 private:
  std::deque<SymbolInfo> pool_;
  std::map<std::string, SymbolInfo*> index_;
};

/// Variables are interned identifiers. Names live in a VarPool; fresh
/// variables are generated from a counter so runs are replayable.
using Var = std::int32_t;

class VarPool {
 public:
  Var intern(const std::string& name);
  std::optional<Var> find(const std::string& name) const;
  Var fresh();
  /// Name for display; ids the pool has never seen get a synthetic name
  /// that cannot collide with interned ones.
  std::string name(Var v) const;
  Var max_id() const { return static_cast<Var>(names_.size()) - 1; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, Var> index_;
  int fresh_counter_ = 0;
};

/// First-order terms: a variable or an application of a symbol to exactly
/// arity many arguments. Immutable and cheap to copy.
class Term {
 public:
  Term() = default;

  static Term variable(Var v);
  static Term app(Symbol f, std::vector<Term> args = {});

  bool ok() const { return node_ != nullptr; }
  bool is_var() const { return node_->sym == nullptr; }
  Var var() const { return node_->var; }
  Symbol sym() const { return node_->sym; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(size_t i) const { return node_->args[i]; }

  std::size_t hash() const { return node_->hash; }
  int size() const { return node_->size; }  // symbol and variable occurrences

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }

 private:
  struct Node {
    Symbol sym = nullptr;  // nullptr for variables
    Var var = -1;
    std::vector<Term> args;
    std::size_t hash = 0;
    int size = 1;
  };
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Total order on terms: variables before applications, variables by id,
/// applications by symbol name, then lexicographically by arguments.
int compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// positions

using Position = std::vector<int>;  // 1-based path, empty = root

enum class PosKind { function, variable };

std::vector<std::pair<Position, PosKind>> positions(const Term& t);
std::vector<Position> function_positions(const Term& t);

/// Subterm at p, or nullptr when p does not address one.
const Term* subterm_at(const Term& t, const Position& p);

/// t with the subterm at p replaced by u. Throws std::out_of_range for
/// invalid positions.
Term replace_at(const Term& t, const Position& p, const Term& u);

// ---------------------------------------------------------------------------
// substitutions

class Substitution {
 public:
  /// Binds v; the identity binding v -> v is dropped.
  void bind(Var v, const Term& t);
  const Term* lookup(Var v) const;
  Term apply(const Term& t) const;
  /// Applies `other` to every binding and adds its remaining bindings.
  Substitution compose(const Substitution& other) const;
  Substitution restricted_to(const std::set<Var>& dom) const;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }
  bool operator==(const Substitution& other) const { return map_ == other.map_; }

 private:
  std::map<Var, Term> map_;
};

// ---------------------------------------------------------------------------
// equations and rules

struct Equation {
  Term lhs, rhs;
  bool operator==(const Equation& other) const {
    return lhs == other.lhs && rhs == other.rhs;
  }
  int size() const { return lhs.size() + rhs.size(); }
};

/// A directed pair with the usual well-formedness conditions: the left-hand
/// side is not a variable and covers the variables of the right-hand side.
class Rule {
 public:
  Rule(Term lhs, Term rhs);  // throws std::invalid_argument
  static std::optional<Rule> try_make(Term lhs, Term rhs);

  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }
  Equation as_equation() const { return {lhs_, rhs_}; }
  int size() const { return lhs_.size() + rhs_.size(); }
  bool operator==(const Rule& other) const {
    return lhs_ == other.lhs_ && rhs_ == other.rhs_;
  }

 private:
  Term lhs_, rhs_;
};

using Trs = std::vector<Rule>;

// ---------------------------------------------------------------------------
// operations

std::set<Var> var_set(const Term& t);
void collect_vars(const Term& t, std::set<Var>& out);
std::vector<Symbol> symbols_of(const Trs& r);  // sorted by name, deduplicated
bool is_linear(const Term& t);
bool is_left_linear(const Trs& r);
bool is_ground(const Term& t);

/// Syntactic matching: the unique minimal sigma with pattern*sigma = subject,
/// if one exists.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// Most general unifier, idempotent, with occurs check.
std::optional<Substitution> unify(const Term& s, const Term& t);

/// Variant of r whose variables are fresh in the pool (disjoint from all
/// previously interned or generated variables).
Rule rename_apart(const Rule& r, VarPool& pool);
/// Variant of r with variables renamed to ids above `floor`.
Rule rename_above(const Rule& r, Var floor);

bool is_variant(const Term& s, const Term& t);
/// The injective variable renaming sigma with s*sigma = t, if one exists.
std::optional<Substitution> variant_renaming(const Term& s, const Term& t);
bool is_rule_variant(const Rule& a, const Rule& b);
/// One renaming relating both components: (l1,r1)*sigma = (l2,r2).
bool is_pair_variant(const Term& l1, const Term& r1, const Term& l2,
                     const Term& r2);

/// s encompasses t: some subterm of s is an instance of t.
bool encompasses(const Term& s, const Term& t);

Var max_var(const Term& t);  // -1 when ground
Var max_var(const Rule& r);
Var max_var(const Trs& r);

}  // namespace accomp

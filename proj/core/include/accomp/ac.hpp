#pragma once

#include <functional>
#include <optional>

#include "accomp/term.hpp"

namespace accomp {

/// Canonical form for comparison modulo the symbol theories: nested
/// applications of an AC symbol are flattened into one variadic application,
/// the argument lists of AC and commutative applications are sorted by the
/// canonical term order. Two terms are theory-equal iff their canonical
/// forms are identical.
class CanonTerm {
 public:
  CanonTerm() = default;
  static CanonTerm variable(Var v);
  /// `args` must already be canonical; flattening/sorting is applied here.
  static CanonTerm app(Symbol f, std::vector<CanonTerm> args);

  bool ok() const { return node_ != nullptr; }
  bool is_var() const { return node_->sym == nullptr; }
  Var var() const { return node_->var; }
  Symbol sym() const { return node_->sym; }
  std::span<const CanonTerm> args() const { return node_->args; }
  std::size_t hash() const { return node_->hash; }
  int size() const { return node_->size; }

  bool operator==(const CanonTerm& other) const;
  bool operator!=(const CanonTerm& other) const { return !(*this == other); }

 private:
  struct Node {
    Symbol sym = nullptr;
    Var var = -1;
    std::vector<CanonTerm> args;
    std::size_t hash = 0;
    int size = 1;
  };
  std::shared_ptr<const Node> node_;
};

int compare(const CanonTerm& a, const CanonTerm& b);

struct CanonTermLess {
  bool operator()(const CanonTerm& a, const CanonTerm& b) const {
    return compare(a, b) < 0;
  }
};
struct CanonTermHash {
  std::size_t operator()(const CanonTerm& t) const { return t.hash(); }
};

CanonTerm flatten_canonical(const Term& t);
/// Binary reconstruction: variadic AC applications are rebuilt
/// right-associatively, arguments stay in sorted order.
Term unflatten(const CanonTerm& c);
/// Shorthand for unflatten(flatten_canonical(t)).
Term canonical_term(const Term& t);

bool ac_equal(const Term& a, const Term& b);
bool ac_equal(const Equation& e);

// ---------------------------------------------------------------------------
// AC matching

/// Emits every substitution sigma with pattern*sigma ~AC subject, without
/// duplicates modulo ~AC on bindings, in a deterministic order. The callback
/// returns false to stop the enumeration early.
void ac_match_each(const Term& pattern, const Term& subject,
                   const std::function<bool(const Substitution&)>& emit);
std::vector<Substitution> ac_match(const Term& pattern, const Term& subject);
std::optional<Substitution> ac_match_first(const Term& pattern, const Term& subject);

// ---------------------------------------------------------------------------
// extended rules and rewriting

/// R together with one extension f(f(u,v),x) -> f(r,x) per rule
/// f(u,v) -> r whose root is an AC symbol; x is fresh for the parent.
struct ExtendedSystem {
  struct Extension {
    Rule rule;
    int parent;  // index into rules
  };
  Trs rules;
  std::vector<Extension> extensions;

  /// Parent rules first, extensions after, in input order.
  std::vector<const Rule*> all() const;
};

ExtendedSystem extend_rules(const Trs& r);

/// The three rewrite relations. `plain` matches syntactically, `ps` matches
/// modulo the theory at the redex, `modulo` is ps over the extended system
/// (which simulates rewriting anywhere in the equivalence class).
enum class RelationKind { plain, ps, modulo };

struct RewriteStep {
  Position pos;
  Rule rule;
  Substitution subst;
  Term result;
  std::optional<Term> result_canonical;  // filled for `modulo`
};

/// All steps from t, deterministically ordered (position pre-order, rules in
/// system order, match solutions in search order).
std::vector<RewriteStep> rewrite_steps(const Term& t, const Trs& r, RelationKind kind);
/// Early-exit enumeration; callback returns false to stop.
void rewrite_step_each(const Term& t, const Trs& r, RelationKind kind,
                       const std::function<bool(const RewriteStep&)>& emit);
std::optional<RewriteStep> first_rewrite_step(const Term& t, const Trs& r,
                                              RelationKind kind);
bool is_reducible(const Term& t, const Trs& r, RelationKind kind);

class FuelExceeded : public std::runtime_error {
 public:
  explicit FuelExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr long kDefaultFuel = 1'000'000;

/// Innermost normalization with normal-form marking; throws FuelExceeded
/// after `fuel` rewrite steps instead of looping.
Term normal_form(const Term& t, const Trs& r, RelationKind kind,
                 long fuel = kDefaultFuel);

/// Plain normal forms of both terms compared modulo the theory. Sound and
/// complete on complete systems, otherwise a sound approximation.
bool joinable_mod_ac(const Term& s, const Term& t, const Trs& r,
                     long fuel = kDefaultFuel);

/// Brute-force equivalence class of t under the theory axioms (test oracle).
/// Throws std::length_error when the class exceeds `bound`.
std::vector<Term> ac_class_enumerate(const Term& t, std::size_t bound = 10000);

/// The theory axioms usable as rules for overlap computation: both
/// orientations of associativity plus commutativity per AC symbol,
/// commutativity alone for commutative-only symbols. Variables are renamed
/// above `floor`.
Trs theory_axioms(std::span<const Symbol> symbols, Var floor = -1);

}  // namespace accomp

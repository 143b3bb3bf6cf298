#pragma once

#include <chrono>
#include <memory>
#include <optional>

#include "accomp/polynomial.hpp"
#include "accomp/term.hpp"

namespace accomp {

enum class Verdict { yes, maybe, no, timeout, error };
std::string to_string(Verdict v);

struct VerdictResult {
  Verdict verdict = Verdict::error;
  std::string diagnostics;
};

/// Per-symbol polynomials over the argument placeholders 0..arity-1,
/// keyed by symbol name.
struct PolyInterp {
  std::map<std::string, Polynomial> by_symbol;

  const Polynomial* find(Symbol f) const {
    auto it = by_symbol.find(f->name);
    return it == by_symbol.end() ? nullptr : &it->second;
  }
};

/// Homomorphic evaluation of t; the result is a polynomial in the variables
/// of t. Throws std::out_of_range for uninterpreted symbols.
Polynomial poly_value(const PolyInterp& interp, const Term& t);

/// Strict decrease of the rule under the interpretation (absolute positivity
/// of the shifted difference).
bool poly_orients(const PolyInterp& interp, const Rule& r);

/// Polynomial-identity check of the theory axioms for every AC or
/// commutative symbol in `symbols`.
bool poly_check_ac_compatible(const PolyInterp& interp,
                              std::span<const Symbol> symbols);

// Search effort is measured in monomial operations, not candidate counts:
// interpreting deeply nested terms can make single checks expensive.
inline constexpr long kSearchBudget = 200'000'000;

/// Depth-first search over per-symbol coefficient templates with
/// coefficients bounded by `coeff_bound`; returns the first interpretation
/// that is theory-compatible, strictly monotone and orients every rule.
/// Symbols covered by `fixed` keep their given interpretation. The search
/// gives up (as if no interpretation existed) after `budget` rule checks.
std::optional<PolyInterp> poly_search(const Trs& constraints, int coeff_bound,
                                      long budget = kSearchBudget,
                                      const PolyInterp* fixed = nullptr);

/// Parses "f: x1^2 + 2*x1*x2 + 1" lines ('#' starts a comment).
PolyInterp parse_poly_interp(const std::string& text);

/// Monotone accumulator of all orientations performed during a run.
class ConstraintSystem {
 public:
  /// Adds unless a variant is already present.
  void add(const Rule& r);
  const Trs& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

 private:
  Trs rules_;
};

class TerminationOracle {
 public:
  virtual ~TerminationOracle() = default;
  virtual VerdictResult check(const Trs& constraints) = 0;
  long queries() const { return queries_; }

 protected:
  long queries_ = 0;
};

/// Built-in oracle: searches polynomial interpretations, keeping the last
/// successful one as a warm start.
class PolySearchOracle : public TerminationOracle {
 public:
  explicit PolySearchOracle(int coeff_bound = 2) : bound_(coeff_bound) {}
  VerdictResult check(const Trs& constraints) override;
  const std::optional<PolyInterp>& last_interpretation() const { return cache_; }

 private:
  int bound_;
  std::optional<PolyInterp> cache_;
};

/// Fixed interpretation, e.g. read from a file: YES iff it is
/// theory-compatible and orients every constraint, MAYBE otherwise.
class FixedInterpOracle : public TerminationOracle {
 public:
  explicit FixedInterpOracle(PolyInterp interp) : interp_(std::move(interp)) {}
  VerdictResult check(const Trs& constraints) override;
  const PolyInterp& interpretation() const { return interp_; }

 private:
  PolyInterp interp_;
};

enum class ProverMode { oneshot, interactive };

struct ProverConfig {
  std::string command;
  ProverMode mode = ProverMode::oneshot;
  std::chrono::milliseconds timeout{5000};
};

/// Client for an external prover whose output starts with YES, MAYBE, NO or
/// TIMEOUT; anything else is an error. In interactive mode one process is
/// kept alive, problems separated by a line containing exactly "(RUN)".
class ExternalProverOracle : public TerminationOracle {
 public:
  ExternalProverOracle(ProverConfig cfg, const VarPool* names);
  ~ExternalProverOracle() override;
  VerdictResult check(const Trs& constraints) override;

 private:
  VerdictResult run_oneshot(const std::string& problem);
  VerdictResult run_interactive(const std::string& problem);
  void kill_session();

  ProverConfig cfg_;
  const VarPool* names_;
  std::map<std::string, VerdictResult> cache_;
  int session_pid_ = -1;
  int session_in_ = -1;   // our write end
  int session_out_ = -1;  // our read end
};

/// Termination problem text: (VAR ...) (THEORY ...) (RULES l -> r ...).
std::string serialize_constraints_wst(const Trs& constraints,
                                      const VarPool* names);

}  // namespace accomp

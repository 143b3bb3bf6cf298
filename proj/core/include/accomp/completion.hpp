#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>

#include "accomp/ac.hpp"
#include "accomp/critical_pairs.hpp"
#include "accomp/termination.hpp"

namespace accomp {

/// Engine `a` deduces local cliffs as pending rules and may simplify and
/// compose with the configured relation; engine `b` deduces cliffs as
/// equations and is restricted to plain rewriting.
enum class EngineKind { a, b };

enum class Preference { l2r, r2l };

struct EngineConfig {
  EngineKind engine = EngineKind::a;
  bool prime_only = false;
  RelationKind simp_relation = RelationKind::plain;
  Preference preference = Preference::l2r;
  int max_iterations = 2500;
  std::chrono::milliseconds wall_timeout{60000};
  long fuel = kDefaultFuel;
  std::ostream* trace = nullptr;  // per-iteration log when set
};

struct RunStats {
  long iterations = 0;
  long oracle_queries = 0;
  long critical_pairs = 0;
  long cliff_rules = 0;
  long oriented = 0;
  long simplified = 0;
  long deleted = 0;
  long composed = 0;
  long collapsed = 0;
};

/// Complete history of a run: every equation that was ever in E and every
/// rule that was ever in R or P, in insertion order.
struct Ledger {
  std::vector<Equation> equations;
  std::vector<Rule> rules;

  bool has_equation(const Equation& e) const;  // modulo renaming, either side
  bool has_rule_pair(const Equation& e) const;
};

/// A cliff-deduced rule whose critical pairs are deferred; carries its
/// justification (source rewrites to rule.rhs at pos, source is
/// theory-equal to rule.lhs).
struct PendingRule {
  Rule rule;
  long age;
  Term source;
  Position pos;
};

struct AgedEquation {
  Equation eq;
  long age;
};

struct CompletionState {
  std::vector<AgedEquation> equations;  // E
  std::vector<PendingRule> pending;     // P
  Trs rules;                            // R
  ConstraintSystem constraints;         // C
  Ledger ledger;
  long iteration = 0;
};

struct Outcome {
  enum class Kind { completed, failed, exhausted };
  enum class FailReason {
    none,
    no_orientable_equation,
    nonlinear_lhs_only,
    oracle_rejects_all,
  };

  Kind kind = Kind::failed;
  FailReason reason = FailReason::none;
  std::string bound;  // which bound was hit when exhausted
  Trs rules;
  Trs constraints;
  std::vector<Equation> leftover_equations;  // E at the end of the run
  Trs leftover_pending;                      // P at the end of the run
  RunStats stats;
};

std::string to_string(Outcome::Kind k);
std::string to_string(Outcome::FailReason r);

class CompletionEngine {
 public:
  CompletionEngine(EngineConfig cfg, TerminationOracle& oracle);

  Outcome run(const std::vector<Equation>& e0);

  // The individual inference steps, usable directly in tests.
  void load(const std::vector<Equation>& e0);
  void simplify_all();
  void delete_trivial();
  /// Chooses the smallest element of E and P; pending rules activate as-is,
  /// equations are oriented against the oracle. nullopt when nothing can be
  /// oriented (inspect fail_reason()).
  std::optional<Rule> orient_smallest();
  /// Peak conclusions of rho with the active rules into E; cliff conclusions
  /// with the theory axioms into P (engine b: into E).
  void deduce(const Rule& rho);
  void compose_all();
  void collapse_with(const Rule& rho);

  const CompletionState& state() const { return state_; }
  Outcome::FailReason fail_reason() const { return fail_reason_; }
  const RunStats& stats() const { return stats_; }
  const EngineConfig& config() const { return cfg_; }

  /// Cooperative cancellation, checked at iteration boundaries.
  void request_cancel() { cancelled_.store(true, std::memory_order_relaxed); }

 private:
  struct Candidate;
  struct DeadlineReached {};
  bool try_orient(const Equation& eq, Preference pref, std::optional<Rule>* out);
  void add_equation(const Equation& eq);
  void add_pending(const Rule& rule, const Term& source, const Position& pos);
  Trs simp_rules() const;  // R followed by P
  void check_deadline() const;

  EngineConfig cfg_;
  TerminationOracle& oracle_;
  CompletionState state_;
  RunStats stats_;
  Outcome::FailReason fail_reason_ = Outcome::FailReason::none;
  std::atomic<bool> cancelled_{false};
  long next_age_ = 0;
  std::chrono::steady_clock::time_point deadline_ =
      std::chrono::steady_clock::time_point::max();
};

/// Fairness postcondition of a finished run: every prime critical pair of
/// the final system joins modulo the theory or was considered before (as an
/// equation for peaks, as a rule for cliffs; engine b: as an equation in
/// both cases). Membership is checked modulo renaming.
bool fairness_check(const Trs& final_rules, const Ledger& ledger,
                    EngineKind engine, long fuel = kDefaultFuel);

struct RaceOutcome {
  Outcome outcome;
  Preference winner = Preference::l2r;
  std::optional<Outcome> other;  // the second thread's result if it finished
};

/// Runs one worker per orientation preference concurrently; the first
/// completed result wins and the other worker is cancelled. If neither
/// completes, both failure outcomes are reported.
RaceOutcome race_preferences(
    const std::vector<Equation>& e0, const EngineConfig& base,
    const std::function<std::unique_ptr<TerminationOracle>()>& oracle_factory);

}  // namespace accomp

#pragma once

#include "accomp/ac.hpp"
#include "accomp/critical_pairs.hpp"
#include "accomp/termination.hpp"

namespace accomp {

struct CrVerdict {
  enum class Kind { yes, no, indeterminate };
  Kind kind = Kind::indeterminate;
  std::optional<Equation> witness;  // a non-joinable (prime) critical pair
  std::string reason;
};

/// Church-Rosser modulo the theory for left-linear, terminating systems:
/// checks joinability of all (prime) critical pairs of r and of r with the
/// theory axioms. Refuses non-left-linear input and non-YES oracle verdicts.
CrVerdict church_rosser_mod_ac(const Trs& r, TerminationOracle& oracle,
                               bool prime_only, long fuel = kDefaultFuel);

struct GoalResult {
  bool valid = false;
  Term lhs_nf, rhs_nf;
  Term lhs_canonical, rhs_canonical;
};

/// Validity on a complete system: plain normal forms of both sides compared
/// modulo the theory.
GoalResult decide_validity(const Trs& r, const Term& s, const Term& t,
                           long fuel = kDefaultFuel);

/// A cycle t ->+ u (theory-matching steps) with u theory-equal to t.
struct AcLoop {
  Term start;
  std::vector<RewriteStep> steps;
};

/// Bounded breadth-first search for such a cycle starting from the rules'
/// left-hand sides: a witness that r is not terminating modulo the theory.
std::optional<AcLoop> find_ac_loop(const Trs& r, int depth,
                                   std::size_t node_limit = 20000);

}  // namespace accomp

#pragma once

#include "accomp/ac.hpp"
#include "accomp/termination.hpp"

namespace accomp {

/// Rules equal up to a renaming on the left and theory-equality on the right.
bool right_b_variant(const Rule& a, const Rule& b);

/// Mutual simulation up to right-theory-equivalent variants: every rule of
/// r1 has a right-theory-equivalent variant in r2 and vice versa.
bool llrbsim(const Trs& r1, const Trs& r2);

/// Each right-hand side replaced by a normal form of the extended-system
/// relation, then one representative kept per class of
/// right-theory-equivalent variants. Requires the oracle to certify r;
/// throws std::runtime_error otherwise, FuelExceeded on fuel exhaustion.
Trs right_reduce(const Trs& r, TerminationOracle& oracle,
                 long fuel = kDefaultFuel);

/// right_reduce, then drop every rule whose left-hand side is reducible by
/// the remaining rules. On complete inputs the result is canonical.
Trs canonicalize(const Trs& r, TerminationOracle& oracle,
                 long fuel = kDefaultFuel);

struct CanonicityVerdict {
  enum class Kind { yes, no, indeterminate };
  Kind kind = Kind::indeterminate;
  std::string detail;
};

/// Canonicity check: termination (oracle), Church-Rosser modulo the theory,
/// left-reduced, and right-hand sides irreducible in the extended system.
CanonicityVerdict is_canonical(const Trs& r, TerminationOracle& oracle,
                               long fuel = kDefaultFuel);

}  // namespace accomp

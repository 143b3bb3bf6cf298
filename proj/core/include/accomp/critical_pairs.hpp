#pragma once

#include "accomp/ac.hpp"
#include "accomp/term.hpp"

namespace accomp {

/// An overlap of a (renamed-apart) inner rule into a function position of an
/// outer rule's left-hand side. Root overlaps of rule variants are excluded.
struct Overlap {
  Rule inner;
  Position pos;
  Rule outer;
  Substitution mgu;
};

/// Where the two rules of a peak came from: both from R, R overlapped by a
/// theory axiom, or a theory axiom overlapped by R.
enum class CpOrigin { rr, rb, br };

/// source rewrites to `left` at `pos` with the inner rule and to `right` at
/// the root with the outer rule. `prime` holds iff all proper subterms of
/// source|pos are plain normal forms of the reference system.
struct CriticalPeak {
  Term left;
  Position pos;
  Term source;
  Term right;
  bool prime = false;
  CpOrigin origin = CpOrigin::rr;

  Equation pair() const { return {left, right}; }
};

struct CriticalPair {
  Equation eq;
  CpOrigin origin = CpOrigin::rr;
  bool prime = false;
};

/// All overlaps of rules of r1 into left-hand sides of rules of r2.
std::vector<Overlap> overlaps(const Trs& r1, const Trs& r2);

/// Peaks from overlaps(r1, r2); primality is judged against `prime_ref`.
std::vector<CriticalPeak> critical_peaks(const Trs& r1, const Trs& r2,
                                         const Trs& prime_ref, CpOrigin origin);

/// CP(r): all critical pairs of r with itself.
std::vector<CriticalPair> critical_pairs(const Trs& r);

/// The pairs of r with the theory axioms of its AC/C symbols, in both
/// orders. Primality is judged against r.
std::vector<CriticalPair> cp_pm(const Trs& r);

/// Keeps exactly the prime peaks (recomputing primality against r).
std::vector<CriticalPeak> prime_filter(std::vector<CriticalPeak> peaks,
                                       const Trs& r);

/// Prime critical pairs: CP(r) restricted to prime peaks.
std::vector<CriticalPair> prime_critical_pairs(const Trs& r);
/// Prime pairs of r with the theory axioms (primality w.r.t. r).
std::vector<CriticalPair> prime_cp_pm(const Trs& r);

bool peak_is_prime(const Term& source, const Position& pos, const Trs& r);

}  // namespace accomp

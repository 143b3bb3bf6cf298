#include "accomp/critical_pairs.hpp"

namespace accomp {

std::vector<Overlap> overlaps(const Trs& r1, const Trs& r2) {
  std::vector<Overlap> out;
  for (const Rule& outer : r2) {
    Var floor = max_var(outer);
    for (const Rule& orig_inner : r1) {
      Rule inner = rename_above(orig_inner, floor);
      for (const Position& p : function_positions(outer.lhs())) {
        const Term* sub = subterm_at(outer.lhs(), p);
        auto sigma = unify(inner.lhs(), *sub);
        if (!sigma) continue;
        if (p.empty() && is_rule_variant(inner, outer)) continue;
        out.push_back({inner, p, outer, *sigma});
      }
    }
  }
  return out;
}

bool peak_is_prime(const Term& source, const Position& pos, const Trs& r) {
  const Term* redex = subterm_at(source, pos);
  if (redex->is_var()) return true;
  for (const Term& a : redex->args())
    if (is_reducible(a, r, RelationKind::plain)) return false;
  return true;
}

std::vector<CriticalPeak> critical_peaks(const Trs& r1, const Trs& r2,
                                         const Trs& prime_ref, CpOrigin origin) {
  std::vector<CriticalPeak> out;
  for (const Overlap& o : overlaps(r1, r2)) {
    Term source = o.mgu.apply(o.outer.lhs());
    Term inner_reduct = o.mgu.apply(o.inner.rhs());
    CriticalPeak peak;
    peak.left = replace_at(source, o.pos, inner_reduct);
    peak.pos = o.pos;
    peak.source = source;
    peak.right = o.mgu.apply(o.outer.rhs());
    peak.origin = origin;
    peak.prime = peak_is_prime(source, o.pos, prime_ref);
    out.push_back(std::move(peak));
  }
  return out;
}

std::vector<CriticalPair> critical_pairs(const Trs& r) {
  std::vector<CriticalPair> out;
  for (const CriticalPeak& p : critical_peaks(r, r, r, CpOrigin::rr))
    out.push_back({p.pair(), p.origin, p.prime});
  return out;
}

std::vector<CriticalPair> cp_pm(const Trs& r) {
  Trs axioms = theory_axioms(symbols_of(r), max_var(r));
  std::vector<CriticalPair> out;
  for (const CriticalPeak& p : critical_peaks(r, axioms, r, CpOrigin::rb))
    out.push_back({p.pair(), p.origin, p.prime});
  for (const CriticalPeak& p : critical_peaks(axioms, r, r, CpOrigin::br))
    out.push_back({p.pair(), p.origin, p.prime});
  return out;
}

std::vector<CriticalPeak> prime_filter(std::vector<CriticalPeak> peaks,
                                       const Trs& r) {
  std::vector<CriticalPeak> out;
  for (CriticalPeak& p : peaks) {
    p.prime = peak_is_prime(p.source, p.pos, r);
    if (p.prime) out.push_back(std::move(p));
  }
  return out;
}

std::vector<CriticalPair> prime_critical_pairs(const Trs& r) {
  std::vector<CriticalPair> out;
  for (CriticalPair& c : critical_pairs(r))
    if (c.prime) out.push_back(std::move(c));
  return out;
}

std::vector<CriticalPair> prime_cp_pm(const Trs& r) {
  std::vector<CriticalPair> out;
  for (CriticalPair& c : cp_pm(r))
    if (c.prime) out.push_back(std::move(c));
  return out;
}

}  // namespace accomp

#include "accomp/canonicity.hpp"

#include <algorithm>

#include "accomp/decision.hpp"

namespace accomp {

bool right_b_variant(const Rule& a, const Rule& b) {
  auto ren = variant_renaming(a.lhs(), b.lhs());
  if (!ren) return false;
  return ac_equal(ren->apply(a.rhs()), b.rhs());
}

bool llrbsim(const Trs& r1, const Trs& r2) {
  auto covered = [](const Rule& rule, const Trs& in) {
    for (const Rule& q : in)
      if (right_b_variant(rule, q)) return true;
    return false;
  };
  for (const Rule& rule : r1)
    if (!covered(rule, r2)) return false;
  for (const Rule& rule : r2)
    if (!covered(rule, r1)) return false;
  return true;
}

namespace {

void serialize_canon(const CanonTerm& t, const std::map<Var, int>& names,
                     std::string& out) {
  if (t.is_var()) {
    out += "V" + std::to_string(names.at(t.var()));
    return;
  }
  out += t.sym()->name;
  out += "(";
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    serialize_canon(t.args()[i], names, out);
  }
  out += ")";
}

// Pool-independent key: variables numbered by first occurrence, both sides
// in canonical form.
std::string rule_key(const Rule& r) {
  std::map<Var, int> names;
  std::function<void(const Term&)> number = [&](const Term& t) {
    if (t.is_var()) {
      names.emplace(t.var(), static_cast<int>(names.size()));
      return;
    }
    for (const Term& a : t.args()) number(a);
  };
  number(r.lhs());
  number(r.rhs());
  std::string out;
  serialize_canon(flatten_canonical(r.lhs()), names, out);
  out += "->";
  serialize_canon(flatten_canonical(r.rhs()), names, out);
  return out;
}

}  // namespace

Trs right_reduce(const Trs& r, TerminationOracle& oracle, long fuel) {
  VerdictResult v = oracle.check(r);
  if (v.verdict != Verdict::yes)
    throw std::runtime_error("input not certified terminating: " + v.diagnostics);
  Trs reduced;
  reduced.reserve(r.size());
  for (const Rule& rule : r)
    reduced.emplace_back(rule.lhs(),
                         normal_form(rule.rhs(), r, RelationKind::modulo, fuel));
  // one representative per class of right-theory-equivalent variants:
  // the rule with the smallest canonical serialization
  Trs out;
  std::vector<bool> taken(reduced.size(), false);
  for (size_t i = 0; i < reduced.size(); ++i) {
    if (taken[i]) continue;
    size_t best = i;
    std::string best_key = rule_key(reduced[i]);
    for (size_t j = i + 1; j < reduced.size(); ++j) {
      if (taken[j] || !right_b_variant(reduced[i], reduced[j])) continue;
      taken[j] = true;
      std::string key = rule_key(reduced[j]);
      if (key < best_key) {
        best = j;
        best_key = key;
      }
    }
    out.push_back(reduced[best]);
  }
  return out;
}

Trs canonicalize(const Trs& r, TerminationOracle& oracle, long fuel) {
  Trs reduced = right_reduce(r, oracle, fuel);
  Trs out;
  for (size_t i = 0; i < reduced.size(); ++i) {
    Trs others;
    for (size_t j = 0; j < reduced.size(); ++j)
      if (j != i) others.push_back(reduced[j]);
    if (!is_reducible(reduced[i].lhs(), others, RelationKind::plain))
      out.push_back(reduced[i]);
  }
  return out;
}

CanonicityVerdict is_canonical(const Trs& r, TerminationOracle& oracle,
                               long fuel) {
  VerdictResult v = oracle.check(r);
  if (v.verdict != Verdict::yes)
    return {CanonicityVerdict::Kind::indeterminate,
            "termination not established: " + to_string(v.verdict) + " (" +
                v.diagnostics + ")"};
  CrVerdict cr = church_rosser_mod_ac(r, oracle, /*prime_only=*/true, fuel);
  if (cr.kind == CrVerdict::Kind::indeterminate)
    return {CanonicityVerdict::Kind::indeterminate, cr.reason};
  if (cr.kind == CrVerdict::Kind::no)
    return {CanonicityVerdict::Kind::no, "not Church-Rosser modulo the theory"};
  for (size_t i = 0; i < r.size(); ++i) {
    Trs others;
    for (size_t j = 0; j < r.size(); ++j)
      if (j != i) others.push_back(r[j]);
    if (is_reducible(r[i].lhs(), others, RelationKind::plain))
      return {CanonicityVerdict::Kind::no,
              "left-hand side of rule " + std::to_string(i + 1) + " is reducible"};
  }
  for (size_t i = 0; i < r.size(); ++i) {
    if (is_reducible(r[i].rhs(), r, RelationKind::modulo))
      return {CanonicityVerdict::Kind::no,
              "right-hand side of rule " + std::to_string(i + 1) +
                  " is reducible modulo the theory"};
  }
  return {CanonicityVerdict::Kind::yes, ""};
}

}  // namespace accomp

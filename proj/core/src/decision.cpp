#include "accomp/decision.hpp"

#include <algorithm>
#include <deque>

namespace accomp {

CrVerdict church_rosser_mod_ac(const Trs& r, TerminationOracle& oracle,
                               bool prime_only, long fuel) {
  if (!is_left_linear(r))
    return {CrVerdict::Kind::indeterminate, std::nullopt,
            "system is not left-linear"};
  VerdictResult v = oracle.check(r);
  if (v.verdict != Verdict::yes)
    return {CrVerdict::Kind::indeterminate, std::nullopt,
            "termination modulo the theory not established: " +
                to_string(v.verdict)};
  std::vector<CriticalPair> pairs =
      prime_only ? prime_critical_pairs(r) : critical_pairs(r);
  std::vector<CriticalPair> theory_pairs = prime_only ? prime_cp_pm(r) : cp_pm(r);
  pairs.insert(pairs.end(), theory_pairs.begin(), theory_pairs.end());
  for (const CriticalPair& cp : pairs) {
    if (!joinable_mod_ac(cp.eq.lhs, cp.eq.rhs, r, fuel))
      return {CrVerdict::Kind::no, cp.eq, "non-joinable critical pair"};
  }
  return {CrVerdict::Kind::yes, std::nullopt, ""};
}

GoalResult decide_validity(const Trs& r, const Term& s, const Term& t,
                           long fuel) {
  GoalResult out;
  out.lhs_nf = normal_form(s, r, RelationKind::plain, fuel);
  out.rhs_nf = normal_form(t, r, RelationKind::plain, fuel);
  out.lhs_canonical = canonical_term(out.lhs_nf);
  out.rhs_canonical = canonical_term(out.rhs_nf);
  out.valid = out.lhs_canonical == out.rhs_canonical;
  return out;
}

std::optional<AcLoop> find_ac_loop(const Trs& r, int depth,
                                   std::size_t node_limit) {
  struct Node {
    Term term;
    int parent;  // index into nodes, -1 for the root
    std::optional<RewriteStep> step;
  };
  for (const Rule& rule : r) {
    Term start = rule.lhs();
    std::vector<Node> nodes{{start, -1, std::nullopt}};
    std::deque<std::pair<size_t, int>> queue{{0, 0}};  // node index, depth
    std::set<Term, TermLess> seen{start};
    bool capped = false;
    while (!queue.empty() && !capped) {
      auto [idx, d] = queue.front();
      queue.pop_front();
      if (d >= depth) continue;
      Term current = nodes[idx].term;
      for (const RewriteStep& st : rewrite_steps(current, r, RelationKind::ps)) {
        if (ac_equal(st.result, start)) {
          AcLoop loop;
          loop.start = start;
          std::vector<RewriteStep> path{st};
          for (int at = static_cast<int>(idx); at > 0; at = nodes[at].parent)
            path.push_back(*nodes[at].step);
          std::reverse(path.begin(), path.end());
          loop.steps = std::move(path);
          return loop;
        }
        if (!seen.insert(st.result).second) continue;
        if (nodes.size() >= node_limit) {
          capped = true;
          break;
        }
        nodes.push_back({st.result, static_cast<int>(idx), st});
        queue.emplace_back(nodes.size() - 1, d + 1);
      }
    }
  }
  return std::nullopt;
}

}  // namespace accomp

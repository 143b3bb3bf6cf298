#include "accomp/completion.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "accomp/wst.hpp"

namespace accomp {

namespace {
std::string trace_rule(const Rule& r) { return print_rule(r, nullptr); }
}  // namespace

std::string to_string(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::completed: return "completed";
    case Outcome::Kind::failed: return "failed";
    case Outcome::Kind::exhausted: return "exhausted";
  }
  return "failed";
}

std::string to_string(Outcome::FailReason r) {
  switch (r) {
    case Outcome::FailReason::none: return "none";
    case Outcome::FailReason::no_orientable_equation:
      return "no-orientable-equation";
    case Outcome::FailReason::nonlinear_lhs_only: return "nonlinear-lhs-only";
    case Outcome::FailReason::oracle_rejects_all: return "oracle-rejects-all";
  }
  return "none";
}

// ---------------------------------------------------------------------------
// ledger

bool Ledger::has_equation(const Equation& e) const {
  for (const Equation& have : equations)
    if (is_pair_variant(e.lhs, e.rhs, have.lhs, have.rhs) ||
        is_pair_variant(e.lhs, e.rhs, have.rhs, have.lhs))
      return true;
  return false;
}

bool Ledger::has_rule_pair(const Equation& e) const {
  for (const Rule& have : rules)
    if (is_pair_variant(e.lhs, e.rhs, have.lhs(), have.rhs()) ||
        is_pair_variant(e.lhs, e.rhs, have.rhs(), have.lhs()))
      return true;
  return false;
}

// ---------------------------------------------------------------------------
// engine

CompletionEngine::CompletionEngine(EngineConfig cfg, TerminationOracle& oracle)
    : cfg_(cfg), oracle_(oracle) {
  if (cfg_.engine == EngineKind::b) cfg_.simp_relation = RelationKind::plain;
}

void CompletionEngine::add_equation(const Equation& eq) {
  state_.equations.push_back({eq, next_age_++});
  state_.ledger.equations.push_back(eq);
}

void CompletionEngine::add_pending(const Rule& rule, const Term& source,
                                   const Position& pos) {
  state_.ledger.rules.push_back(rule);
  for (const Rule& have : state_.rules)
    if (is_rule_variant(have, rule)) return;
  for (const PendingRule& have : state_.pending)
    if (is_rule_variant(have.rule, rule)) return;
  if (!is_linear(rule.lhs()))
    throw std::logic_error("cliff deduced a rule with nonlinear left-hand side");
  state_.pending.push_back({rule, next_age_++, source, pos});
}

void CompletionEngine::load(const std::vector<Equation>& e0) {
  for (const Equation& eq : e0) add_equation(eq);
}

Trs CompletionEngine::simp_rules() const {
  Trs out = state_.rules;
  for (const PendingRule& p : state_.pending) out.push_back(p.rule);
  return out;
}

void CompletionEngine::check_deadline() const {
  if (std::chrono::steady_clock::now() >= deadline_) throw DeadlineReached{};
}

void CompletionEngine::simplify_all() {
  Trs rules = simp_rules();
  if (rules.empty()) return;
  for (AgedEquation& ae : state_.equations) {
    check_deadline();
    Term l = normal_form(ae.eq.lhs, rules, cfg_.simp_relation, cfg_.fuel);
    Term r = normal_form(ae.eq.rhs, rules, cfg_.simp_relation, cfg_.fuel);
    if (l != ae.eq.lhs || r != ae.eq.rhs) {
      ae.eq = {l, r};
      state_.ledger.equations.push_back(ae.eq);
      ++stats_.simplified;
    }
  }
}

void CompletionEngine::delete_trivial() {
  auto& eqs = state_.equations;
  auto it = std::remove_if(eqs.begin(), eqs.end(), [&](const AgedEquation& ae) {
    return ac_equal(ae.eq);
  });
  stats_.deleted += eqs.end() - it;
  eqs.erase(it, eqs.end());
}

bool CompletionEngine::try_orient(const Equation& eq, Preference pref,
                                  std::optional<Rule>* out) {
  std::pair<Term, Term> dirs[2];
  if (pref == Preference::l2r) {
    dirs[0] = {eq.lhs, eq.rhs};
    dirs[1] = {eq.rhs, eq.lhs};
  } else {
    dirs[0] = {eq.rhs, eq.lhs};
    dirs[1] = {eq.lhs, eq.rhs};
  }
  bool saw_nonlinear = false, saw_reject = false;
  for (auto& [l, r] : dirs) {
    auto candidate = Rule::try_make(l, r);
    if (!candidate) continue;
    if (!is_linear(candidate->lhs())) {
      saw_nonlinear = true;
      continue;
    }
    Trs query = state_.constraints.rules();
    query.push_back(*candidate);
    VerdictResult v = oracle_.check(query);
    if (v.verdict == Verdict::yes) {
      *out = *candidate;
      return true;
    }
    saw_reject = true;
  }
  if (saw_reject)
    fail_reason_ = Outcome::FailReason::oracle_rejects_all;
  else if (saw_nonlinear && fail_reason_ == Outcome::FailReason::none)
    fail_reason_ = Outcome::FailReason::nonlinear_lhs_only;
  return false;
}

struct CompletionEngine::Candidate {
  int size;
  long age;
  bool pending;
  size_t index;
};

std::optional<Rule> CompletionEngine::orient_smallest() {
  std::vector<Candidate> cands;
  for (size_t i = 0; i < state_.equations.size(); ++i)
    cands.push_back({state_.equations[i].eq.size(), state_.equations[i].age,
                     false, i});
  for (size_t i = 0; i < state_.pending.size(); ++i)
    cands.push_back({state_.pending[i].rule.size(), state_.pending[i].age,
                     true, i});
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.age < b.age;
  });
  fail_reason_ = Outcome::FailReason::none;
  for (const Candidate& c : cands) {
    check_deadline();
    if (c.pending) {
      Rule rho = state_.pending[c.index].rule;
      state_.pending.erase(state_.pending.begin() + c.index);
      state_.rules.push_back(rho);
      state_.constraints.add(rho);
      return rho;
    }
    Equation eq = state_.equations[c.index].eq;
    std::optional<Rule> rho;
    if (try_orient(eq, cfg_.preference, &rho)) {
      state_.equations.erase(state_.equations.begin() + c.index);
      state_.rules.push_back(*rho);
      state_.constraints.add(*rho);
      ++stats_.oriented;
      return rho;
    }
  }
  if (fail_reason_ == Outcome::FailReason::none)
    fail_reason_ = Outcome::FailReason::no_orientable_equation;
  return std::nullopt;
}

void CompletionEngine::deduce(const Rule& rho) {
  const Trs& r = state_.rules;  // includes rho
  Trs others;
  bool skipped_self = false;
  for (const Rule& q : r) {
    if (!skipped_self && q == rho) {
      skipped_self = true;
      continue;
    }
    others.push_back(q);
  }

  // peak conclusions -> equations
  std::vector<CriticalPeak> peaks = critical_peaks({rho}, r, r, CpOrigin::rr);
  for (CriticalPeak& p : critical_peaks(others, {rho}, r, CpOrigin::rr))
    peaks.push_back(std::move(p));
  for (const CriticalPeak& p : peaks) {
    if (cfg_.prime_only && !p.prime) continue;
    add_equation(p.pair());
    ++stats_.critical_pairs;
  }

  // cliff conclusions -> pending rules (engine a) or equations (engine b)
  Trs axioms = theory_axioms(symbols_of(r), std::max(max_var(r), max_var(rho)));
  std::vector<CriticalPeak> cliffs =
      critical_peaks(axioms, {rho}, r, CpOrigin::br);
  for (CriticalPeak& p : critical_peaks({rho}, axioms, r, CpOrigin::rb))
    cliffs.push_back(std::move(p));
  for (const CriticalPeak& p : cliffs) {
    if (cfg_.prime_only && !p.prime) continue;
    ++stats_.cliff_rules;
    if (cfg_.engine == EngineKind::b) {
      add_equation(p.pair());
      continue;
    }
    // the conclusion rewrites the theory-equal side to the rewrite reduct
    Term bside = p.origin == CpOrigin::br ? p.left : p.right;
    Term reduct = p.origin == CpOrigin::br ? p.right : p.left;
    auto rule = Rule::try_make(bside, reduct);
    if (!rule)
      throw std::logic_error("cliff conclusion is not a well-formed rule");
    add_pending(*rule, p.source, p.pos);
  }
}

void CompletionEngine::compose_all() {
  bool changed = true;
  while (changed) {
    changed = false;
    Trs rules = simp_rules();
    for (size_t i = 0; i < state_.rules.size(); ++i) {
      check_deadline();
      const Rule& q = state_.rules[i];
      Term nf = normal_form(q.rhs(), rules, cfg_.simp_relation, cfg_.fuel);
      if (nf != q.rhs()) {
        Rule updated(q.lhs(), nf);
        state_.rules[i] = updated;
        state_.constraints.add(updated);
        state_.ledger.rules.push_back(updated);
        ++stats_.composed;
        changed = true;
      }
    }
    for (size_t i = 0; i < state_.pending.size(); ++i) {
      PendingRule& q = state_.pending[i];
      Term nf = normal_form(q.rule.rhs(), rules, cfg_.simp_relation, cfg_.fuel);
      if (nf != q.rule.rhs()) {
        q.rule = Rule(q.rule.lhs(), nf);
        state_.constraints.add(q.rule);
        state_.ledger.rules.push_back(q.rule);
        ++stats_.composed;
        changed = true;
      }
    }
  }
}

void CompletionEngine::collapse_with(const Rule& rho) {
  Trs just_rho{rho};
  bool skipped_self = false;
  for (size_t i = 0; i < state_.rules.size();) {
    const Rule& q = state_.rules[i];
    if (!skipped_self && q == rho) {
      skipped_self = true;
      ++i;
      continue;
    }
    auto step = first_rewrite_step(q.lhs(), just_rho, RelationKind::plain);
    if (step) {
      add_equation({step->result, q.rhs()});
      state_.rules.erase(state_.rules.begin() + i);
      ++stats_.collapsed;
    } else {
      ++i;
    }
  }
  for (size_t i = 0; i < state_.pending.size();) {
    const PendingRule& q = state_.pending[i];
    auto step = first_rewrite_step(q.rule.lhs(), state_.rules, RelationKind::plain);
    if (step) {
      add_equation({step->result, q.rule.rhs()});
      state_.pending.erase(state_.pending.begin() + i);
      ++stats_.collapsed;
    } else {
      ++i;
    }
  }
}

Outcome CompletionEngine::run(const std::vector<Equation>& e0) {
  deadline_ = std::chrono::steady_clock::now() + cfg_.wall_timeout;
  load(e0);
  Outcome out;
  out.stats = stats_;
  try {
    for (;;) {
      if (cancelled_.load(std::memory_order_relaxed)) {
        out.kind = Outcome::Kind::exhausted;
        out.bound = "cancelled";
        break;
      }
      if (state_.iteration >= cfg_.max_iterations) {
        out.kind = Outcome::Kind::exhausted;
        out.bound = "iteration limit " + std::to_string(cfg_.max_iterations);
        break;
      }
      if (std::chrono::steady_clock::now() >= deadline_) {
        out.kind = Outcome::Kind::exhausted;
        out.bound = "wall timeout";
        break;
      }
      ++state_.iteration;

      simplify_all();
      delete_trivial();
      if (cfg_.trace) {
        *cfg_.trace << "iter " << state_.iteration
                    << ": |E|=" << state_.equations.size()
                    << " |P|=" << state_.pending.size()
                    << " |R|=" << state_.rules.size()
                    << " |C|=" << state_.constraints.size() << "\n";
      }
      if (state_.equations.empty() && state_.pending.empty()) {
        if (!fairness_check(state_.rules, state_.ledger, cfg_.engine, cfg_.fuel))
          throw std::logic_error(
              "completion claims success but the fairness postcondition fails");
        out.kind = Outcome::Kind::completed;
        break;
      }
      std::optional<Rule> rho = orient_smallest();
      if (!rho) {
        out.kind = Outcome::Kind::failed;
        out.reason = fail_reason_;
        break;
      }
      if (cfg_.trace) *cfg_.trace << "  active: " << trace_rule(*rho) << "\n";
      deduce(*rho);
      compose_all();
      collapse_with(*rho);
    }
  } catch (const FuelExceeded& e) {
    out.kind = Outcome::Kind::exhausted;
    out.bound = std::string("rewrite fuel: ") + e.what();
  } catch (const DeadlineReached&) {
    out.kind = Outcome::Kind::exhausted;
    out.bound = "wall timeout";
  }
  stats_.iterations = state_.iteration;
  stats_.oracle_queries = oracle_.queries();
  out.rules = state_.rules;
  out.constraints = state_.constraints.rules();
  for (const AgedEquation& ae : state_.equations)
    out.leftover_equations.push_back(ae.eq);
  for (const PendingRule& p : state_.pending)
    out.leftover_pending.push_back(p.rule);
  out.stats = stats_;
  return out;
}

// ---------------------------------------------------------------------------
// fairness

bool fairness_check(const Trs& final_rules, const Ledger& ledger,
                    EngineKind engine, long fuel) {
  for (const CriticalPair& cp : prime_critical_pairs(final_rules)) {
    if (joinable_mod_ac(cp.eq.lhs, cp.eq.rhs, final_rules, fuel)) continue;
    if (engine == EngineKind::a &&
        (ledger.has_equation(cp.eq) || ledger.has_rule_pair(cp.eq)))
      continue;
    if (engine == EngineKind::b && ledger.has_equation(cp.eq)) continue;
    return false;
  }
  for (const CriticalPair& cp : prime_cp_pm(final_rules)) {
    if (joinable_mod_ac(cp.eq.lhs, cp.eq.rhs, final_rules, fuel)) continue;
    if (engine == EngineKind::a && ledger.has_rule_pair(cp.eq)) continue;
    if (engine == EngineKind::b && ledger.has_equation(cp.eq)) continue;
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// preference racing

RaceOutcome race_preferences(
    const std::vector<Equation>& e0, const EngineConfig& base,
    const std::function<std::unique_ptr<TerminationOracle>()>& oracle_factory) {
  EngineConfig l2r_cfg = base, r2l_cfg = base;
  l2r_cfg.preference = Preference::l2r;
  r2l_cfg.preference = Preference::r2l;

  auto l2r_oracle = oracle_factory();
  auto r2l_oracle = oracle_factory();
  CompletionEngine l2r(l2r_cfg, *l2r_oracle);
  CompletionEngine r2l(r2l_cfg, *r2l_oracle);

  std::optional<Outcome> results[2];
  std::atomic<int> first_completed{-1};

  auto worker = [&](int idx, CompletionEngine& mine, CompletionEngine& other) {
    Outcome o = mine.run(e0);
    if (o.kind == Outcome::Kind::completed) {
      int expected = -1;
      if (first_completed.compare_exchange_strong(expected, idx))
        other.request_cancel();
    }
    results[idx] = std::move(o);
  };

  std::thread t0(worker, 0, std::ref(l2r), std::ref(r2l));
  std::thread t1(worker, 1, std::ref(r2l), std::ref(l2r));
  t0.join();
  t1.join();

  RaceOutcome out;
  int win = first_completed.load();
  if (win >= 0) {
    out.outcome = *results[win];
    out.winner = win == 0 ? Preference::l2r : Preference::r2l;
    out.other = *results[1 - win];
    return out;
  }
  out.outcome = *results[0];
  out.winner = Preference::l2r;
  out.other = *results[1];
  return out;
}

}  // namespace accomp

// Command-line front end: completion of equational systems modulo AC,
// Church-Rosser checking, canonicalization and validity goals.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "accomp/canonicity.hpp"
#include "accomp/completion.hpp"
#include "accomp/decision.hpp"
#include "accomp/termination.hpp"
#include "accomp/wst.hpp"

using namespace accomp;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitUsage = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Output names: x, y, z, w, u, v, then x1, x2, ...; function symbol names
// are skipped so the output reparses with the same meaning.
std::string nth_var_name(size_t i, const SymbolTable& syms) {
  static const char* base[] = {"x", "y", "z", "w", "u", "v"};
  size_t k = i;
  for (;;) {
    std::string cand =
        k < 6 ? base[k] : "x" + std::to_string(k - 5);
    if (!syms.find(cand)) return cand;
    ++k;
  }
}

Rule pretty_rename(const Rule& r, VarPool& pool, const SymbolTable& syms) {
  std::vector<Var> order;
  std::function<void(const Term&)> collect = [&](const Term& t) {
    if (t.is_var()) {
      if (std::find(order.begin(), order.end(), t.var()) == order.end())
        order.push_back(t.var());
      return;
    }
    for (const Term& a : t.args()) collect(a);
  };
  collect(r.lhs());
  collect(r.rhs());
  Substitution ren;
  for (size_t i = 0; i < order.size(); ++i)
    ren.bind(order[i], Term::variable(pool.intern(nth_var_name(i, syms))));
  return Rule(ren.apply(r.lhs()), ren.apply(r.rhs()));
}

Trs pretty_rename(const Trs& r, VarPool& pool, const SymbolTable& syms) {
  Trs out;
  out.reserve(r.size());
  for (const Rule& rule : r) out.push_back(pretty_rename(rule, pool, syms));
  return out;
}

struct OracleSpec {
  enum class Kind { poly_search, poly_file, external } kind = Kind::poly_search;
  int bound = 2;
  PolyInterp interp;
  ProverConfig prover;
};

OracleSpec parse_order(const std::string& order, bool interactive,
                       std::chrono::milliseconds prover_timeout) {
  OracleSpec spec;
  if (order == "poly-search" || order.rfind("poly-search:", 0) == 0) {
    spec.kind = OracleSpec::Kind::poly_search;
    if (auto colon = order.find(':'); colon != std::string::npos)
      spec.bound = std::stoi(order.substr(colon + 1));
    return spec;
  }
  if (order.rfind("poly-file:", 0) == 0) {
    spec.kind = OracleSpec::Kind::poly_file;
    spec.interp = parse_poly_interp(read_file(order.substr(10)));
    return spec;
  }
  if (order.rfind("external:", 0) == 0) {
    spec.kind = OracleSpec::Kind::external;
    spec.prover.command = order.substr(9);
    spec.prover.mode = interactive ? ProverMode::interactive : ProverMode::oneshot;
    spec.prover.timeout = prover_timeout;
    return spec;
  }
  throw std::runtime_error("unknown --order " + order);
}

std::unique_ptr<TerminationOracle> make_oracle(const OracleSpec& spec,
                                               const VarPool* names) {
  switch (spec.kind) {
    case OracleSpec::Kind::poly_search:
      return std::make_unique<PolySearchOracle>(spec.bound);
    case OracleSpec::Kind::poly_file:
      return std::make_unique<FixedInterpOracle>(spec.interp);
    case OracleSpec::Kind::external:
      return std::make_unique<ExternalProverOracle>(spec.prover, names);
  }
  return nullptr;
}

void print_stats(std::ostream& out, const Outcome& o) {
  out << "outcome: " << to_string(o.kind) << "\n";
  if (o.kind == Outcome::Kind::failed)
    out << "reason: " << to_string(o.reason) << "\n";
  if (o.kind == Outcome::Kind::exhausted) out << "bound: " << o.bound << "\n";
  out << "iterations: " << o.stats.iterations << "\n"
      << "oracle_queries: " << o.stats.oracle_queries << "\n"
      << "critical_pairs: " << o.stats.critical_pairs << "\n"
      << "cliff_rules: " << o.stats.cliff_rules << "\n"
      << "oriented: " << o.stats.oriented << "\n"
      << "simplified: " << o.stats.simplified << "\n"
      << "deleted: " << o.stats.deleted << "\n"
      << "composed: " << o.stats.composed << "\n"
      << "collapsed: " << o.stats.collapsed << "\n"
      << "rules: " << o.rules.size() << "\n";
}

void dump_state(const std::string& path, const Outcome& o, const VarPool& pool) {
  WstProblem p;
  std::set<std::string> vars;
  auto note_term = [&](const Term& t) {
    for (Var v : var_set(t)) vars.insert(pool.name(v));
  };
  for (const Rule& r : o.rules) {
    note_term(r.lhs());
    note_term(r.rhs());
    p.rules.push_back(r);
  }
  for (const Rule& r : o.leftover_pending) {
    note_term(r.lhs());
    note_term(r.rhs());
    p.rules.push_back(r);
  }
  for (const Equation& e : o.leftover_equations) {
    note_term(e.lhs);
    note_term(e.rhs);
    p.equations.push_back(e);
  }
  p.var_names.assign(vars.begin(), vars.end());
  for (Symbol f : symbols_of(p.rules))
    if (f->has_theory()) p.theory.emplace_back(f->name, f->theory);
  std::ofstream out(path);
  out << print_wst(p, &pool);
  out << "(COMMENT constraint system\n";
  for (const Rule& r : o.constraints) out << "  " << print_rule(r, &pool) << "\n";
  out << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Left-linear completion modulo AC"};
  app.get_formatter()->column_width(34);

  std::string file;
  std::string engine = "a";
  bool prime = false;
  std::string simp = "plain";
  std::string goal;
  std::string order = "poly-search";
  bool interactive = false;
  double timeout_s = 60.0;
  long prover_timeout_ms = 5000;
  int max_iter = 2500;
  long fuel = kDefaultFuel;
  bool race = false;
  std::string prefer = "l2r";
  bool check_only = false;
  bool canonicalize_only = false;
  std::string dump_path;

  app.add_option("file", file, "problem file (VAR/THEORY/RULES blocks)")
      ->required();
  app.add_option("--engine", engine, "inference system: a or b")
      ->check(CLI::IsMember({"a", "b"}));
  app.add_flag("--prime", prime, "restrict deduction to prime critical pairs");
  app.add_option("--simp", simp, "relation for simplify/compose")
      ->check(CLI::IsMember({"plain", "ps", "modulo"}));
  app.add_option("--goal", goal, "decide \"s = t\" after completion");
  app.add_option("--order", order,
                 "poly-search[:BOUND] | poly-file:PATH | external:CMD");
  app.add_flag("--interactive-prover", interactive,
               "keep one prover process, queries separated by (RUN)");
  app.add_option("--timeout", timeout_s, "wall-clock budget in seconds");
  app.add_option("--prover-timeout", prover_timeout_ms,
                 "per-query prover timeout in milliseconds");
  app.add_option("--max-iter", max_iter, "iteration bound");
  app.add_option("--fuel", fuel, "rewrite-step budget per normalization");
  bool verbose = false;
  app.add_flag("--verbose", verbose, "trace iterations to stderr");
  auto* race_flag =
      app.add_flag("--race", race, "race both orientation preferences");
  auto* prefer_opt = app.add_option("--prefer", prefer, "l2r or r2l")
                         ->check(CLI::IsMember({"l2r", "r2l"}));
  race_flag->excludes(prefer_opt);
  prefer_opt->excludes(race_flag);
  bool check_flag = false, canon_flag = false;
  app.add_flag("--check-only", check_flag,
               "check the Church-Rosser property modulo AC of the input rules");
  app.add_flag("--canonicalize", canon_flag,
               "right-reduce and left-reduce the input rules");
  app.add_option("--dump-state", dump_path,
                 "write final (E, P, R, C) to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e), kExitSuccess;  // --help
    app.exit(e);
    return kExitUsage;
  }
  check_only = check_flag;
  canonicalize_only = canon_flag;

  SymbolTable syms;
  VarPool pool;
  WstProblem problem;
  OracleSpec spec;
  try {
    problem = parse_wst(read_file(file), syms, pool);
    spec = parse_order(order, interactive,
                       std::chrono::milliseconds(prover_timeout_ms));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto started = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - started)
        .count();
  };

  try {
    if (check_only) {
      if (problem.rules.empty() && !problem.equations.empty()) {
        std::cerr << "error: --check-only expects rules (l -> r)\n";
        return kExitUsage;
      }
      auto oracle = make_oracle(spec, &pool);
      CrVerdict v = church_rosser_mod_ac(problem.rules, *oracle, prime, fuel);
      switch (v.kind) {
        case CrVerdict::Kind::yes:
          std::cout << "YES (Church-Rosser modulo AC)\n";
          return kExitSuccess;
        case CrVerdict::Kind::no:
          std::cout << "NO (non-joinable critical pair: "
                    << print_equation(*v.witness, &pool) << ")\n";
          return kExitFailure;
        case CrVerdict::Kind::indeterminate: {
          if (auto loop = find_ac_loop(problem.rules, 3)) {
            std::cout << "NO (loop modulo AC from "
                      << print_term(loop->start, &pool) << " in "
                      << loop->steps.size() << " step(s))\n";
            return kExitFailure;
          }
          std::cout << "MAYBE (" << v.reason << ")\n";
          return kExitIndeterminate;
        }
      }
    }

    if (canonicalize_only) {
      auto oracle = make_oracle(spec, &pool);
      Trs canon = canonicalize(problem.rules, *oracle, fuel);
      std::cout << print_trs_wst(pretty_rename(canon, pool, syms), &pool);
      std::cout << "rules: " << canon.size() << "\n";
      return kExitSuccess;
    }

    // completion: every input pair is treated as an equation
    std::vector<Equation> e0 = problem.equations;
    for (const Rule& r : problem.rules) e0.push_back(r.as_equation());

    EngineConfig cfg;
    cfg.engine = engine == "b" ? EngineKind::b : EngineKind::a;
    cfg.prime_only = prime;
    cfg.simp_relation = simp == "ps"       ? RelationKind::ps
                        : simp == "modulo" ? RelationKind::modulo
                                           : RelationKind::plain;
    cfg.preference = prefer == "r2l" ? Preference::r2l : Preference::l2r;
    cfg.max_iterations = max_iter;
    cfg.wall_timeout = std::chrono::milliseconds(
        static_cast<long>(timeout_s * 1000.0));
    cfg.fuel = fuel;
    if (verbose && !race) cfg.trace = &std::cerr;

    Outcome outcome;
    if (race) {
      RaceOutcome ro = race_preferences(e0, cfg, [&] {
        return make_oracle(spec, &pool);
      });
      outcome = std::move(ro.outcome);
      std::cout << "winner: " << (ro.winner == Preference::l2r ? "l2r" : "r2l")
                << "\n";
      if (ro.other && outcome.kind != Outcome::Kind::completed)
        std::cout << "other_thread: " << to_string(ro.other->kind) << "\n";
    } else {
      auto oracle = make_oracle(spec, &pool);
      CompletionEngine eng(cfg, *oracle);
      outcome = eng.run(e0);
    }

    if (!dump_path.empty()) dump_state(dump_path, outcome, pool);

    if (outcome.kind == Outcome::Kind::completed)
      std::cout << print_trs_wst(pretty_rename(outcome.rules, pool, syms),
                                 &pool);
    print_stats(std::cout, outcome);
    std::cerr << "elapsed_ms: " << elapsed_ms() << "\n";

    if (outcome.kind != Outcome::Kind::completed)
      return outcome.kind == Outcome::Kind::failed ? kExitFailure
                                                   : kExitIndeterminate;

    if (!goal.empty()) {
      Equation g = parse_goal(goal, syms, pool);
      GoalResult res = decide_validity(outcome.rules, g.lhs, g.rhs, fuel);
      std::cout << "goal: " << print_equation(g, &pool) << "\n"
                << "lhs_normal_form: " << print_term(res.lhs_nf, &pool) << "\n"
                << "rhs_normal_form: " << print_term(res.rhs_nf, &pool) << "\n"
                << (res.valid ? "VALID" : "INVALID") << "\n";
      return res.valid ? kExitSuccess : kExitFailure;
    }
    return kExitSuccess;
  } catch (const FuelExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIndeterminate;
  }
}

#include "accomp/termination.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <sstream>

#include "accomp/wst.hpp"

namespace accomp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "YES";
    case Verdict::maybe: return "MAYBE";
    case Verdict::no: return "NO";
    case Verdict::timeout: return "TIMEOUT";
    case Verdict::error: return "ERROR";
  }
  return "ERROR";
}

// ---------------------------------------------------------------------------
// interpretation semantics

namespace {

// Interpretations of deeply nested terms can expand to exponentially many
// monomials; checks are charged against a work counter and abort once it
// runs out.
struct PolyBudgetExceeded {};

Polynomial poly_value_counted(const PolyInterp& interp, const Term& t,
                              long& work) {
  if (t.is_var()) return Polynomial::variable(t.var());
  const Polynomial* tmpl = interp.find(t.sym());
  if (!tmpl)
    throw std::out_of_range("no interpretation for symbol " + t.sym()->name);
  std::map<Var, Polynomial> env;
  for (size_t i = 0; i < t.args().size(); ++i)
    env.emplace(static_cast<Var>(i), poly_value_counted(interp, t.arg(i), work));
  Polynomial out = tmpl->substitute(env);
  work -= static_cast<long>(out.terms().size()) + 1;
  if (work < 0) throw PolyBudgetExceeded{};
  return out;
}

// False on budget exhaustion: a conservative, sound answer.
bool poly_orients_counted(const PolyInterp& interp, const Rule& r, long& work) {
  try {
    Polynomial l = poly_value_counted(interp, r.lhs(), work);
    Polynomial rr = poly_value_counted(interp, r.rhs(), work);
    Polynomial diff = l - rr;
    work -= 4 * static_cast<long>(diff.terms().size()) + 1;
    if (work < 0) throw PolyBudgetExceeded{};
    return absolutely_positive_after_shift(diff);
  } catch (const PolyBudgetExceeded&) {
    return false;
  }
}

constexpr long kSingleCheckBudget = 200'000;

}  // namespace

Polynomial poly_value(const PolyInterp& interp, const Term& t) {
  long work = kSingleCheckBudget;
  return poly_value_counted(interp, t, work);
}

bool poly_orients(const PolyInterp& interp, const Rule& r) {
  long work = kSingleCheckBudget;
  return poly_orients_counted(interp, r, work);
}

bool poly_check_ac_compatible(const PolyInterp& interp,
                              std::span<const Symbol> symbols) {
  Polynomial x = Polynomial::variable(0);
  Polynomial y = Polynomial::variable(1);
  Polynomial z = Polynomial::variable(2);
  for (Symbol f : symbols) {
    if (!f->has_theory()) continue;
    const Polynomial* p = interp.find(f);
    if (!p) return false;
    auto at = [&](const Polynomial& a, const Polynomial& b) {
      return p->substitute({{0, a}, {1, b}});
    };
    if (!(at(x, y) == at(y, x))) return false;
    if (f->is_ac() && !(at(at(x, y), z) == at(x, at(y, z)))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// template search

namespace {

Polynomial arg_poly(int i) { return Polynomial::variable(static_cast<Var>(i)); }

// Candidate templates, most specific constraints first kept deterministic:
// constants 1..B; unary a*x + b*x^2 + c (strictly monotone over inputs >= 1);
// binary a1*x + a2*y + a3*x*y + c; AC symbols restricted to symmetric
// templates satisfying the associativity identity a^2 - a = b*c.
std::vector<Polynomial> templates_for(Symbol f, int B) {
  std::vector<Polynomial> out;
  if (f->arity == 0) {
    for (int c = 1; c <= B; ++c) out.push_back(Polynomial::constant(c));
    return out;
  }
  if (f->arity == 1) {
    Polynomial x = arg_poly(0);
    for (int b = 0; b <= B; ++b)
      for (int a = 0; a <= B; ++a) {
        if (a + 2 * b < 1) continue;  // not strictly monotone
        for (int c = 0; c <= B; ++c)
          out.push_back(x.scaled(a) + (x * x).scaled(b) + Polynomial::constant(c));
      }
    return out;
  }
  if (f->arity == 2 && f->has_theory()) {
    Polynomial x = arg_poly(0), y = arg_poly(1);
    for (int b = 0; b <= B; ++b)
      for (int a = 0; a <= B; ++a) {
        if (a + b < 1) continue;
        for (int c = 0; c <= B; ++c) {
          if (f->is_ac() && a * a - a != b * c) continue;  // associativity
          out.push_back((x + y).scaled(a) + (x * y).scaled(b) +
                        Polynomial::constant(c));
        }
      }
    return out;
  }
  if (f->arity == 2) {
    Polynomial x = arg_poly(0), y = arg_poly(1);
    for (int a3 = 0; a3 <= B; ++a3)
      for (int a1 = 0; a1 <= B; ++a1)
        for (int a2 = 0; a2 <= B; ++a2) {
          if (a1 + a3 < 1 || a2 + a3 < 1) continue;
          for (int c = 0; c <= B; ++c)
            out.push_back(x.scaled(a1) + y.scaled(a2) + (x * y).scaled(a3) +
                          Polynomial::constant(c));
        }
    return out;
  }
  // wider arities: linear with all argument coefficients >= 1
  std::vector<int> coeff(static_cast<size_t>(f->arity), 1);
  for (;;) {
    for (int c = 0; c <= B; ++c) {
      Polynomial p = Polynomial::constant(c);
      for (int i = 0; i < f->arity; ++i) p = p + arg_poly(i).scaled(coeff[i]);
      out.push_back(p);
    }
    int i = 0;
    while (i < f->arity && coeff[i] == B) coeff[i++] = 1;
    if (i == f->arity) break;
    ++coeff[i];
  }
  return out;
}

}  // namespace

std::optional<PolyInterp> poly_search(const Trs& constraints, int coeff_bound,
                                      long budget, const PolyInterp* fixed) {
  std::vector<Symbol> syms = symbols_of(constraints);
  size_t n = syms.size();
  std::vector<std::vector<Polynomial>> cands;
  cands.reserve(n);
  for (Symbol f : syms) {
    if (fixed) {
      if (const Polynomial* p = fixed->find(f)) {
        cands.push_back({*p});
        continue;
      }
    }
    cands.push_back(templates_for(f, coeff_bound));
  }

  std::vector<std::vector<size_t>> rule_syms(constraints.size());
  std::map<std::string, size_t> sym_index;
  for (size_t i = 0; i < n; ++i) sym_index[syms[i]->name] = i;
  for (size_t r = 0; r < constraints.size(); ++r)
    for (Symbol f : symbols_of({constraints[r]}))
      rule_syms[r].push_back(sym_index[f->name]);

  // Assignment order chosen greedily so rules become checkable as early as
  // possible; unconstrained prefixes multiply the search space otherwise.
  std::vector<size_t> order;
  std::vector<bool> placed(n, false);
  while (order.size() < n) {
    size_t best = n;
    long best_completed = -1;
    size_t best_gap = SIZE_MAX, best_table = SIZE_MAX;
    for (size_t s = 0; s < n; ++s) {
      if (placed[s]) continue;
      long completed = 0;
      size_t gap = SIZE_MAX;
      for (size_t r = 0; r < constraints.size(); ++r) {
        size_t missing = 0;
        bool uses_s = false;
        for (size_t q : rule_syms[r]) {
          if (q == s) uses_s = true;
          if (!placed[q] && q != s) ++missing;
        }
        if (!uses_s) continue;
        if (missing == 0) ++completed;
        gap = std::min(gap, missing);
      }
      bool better;
      if (best == n) better = true;
      else if (completed != best_completed) better = completed > best_completed;
      else if (gap != best_gap) better = gap < best_gap;
      else if (cands[s].size() != best_table) better = cands[s].size() < best_table;
      else better = syms[s]->name < syms[best]->name;
      if (better) {
        best = s;
        best_completed = completed;
        best_gap = gap;
        best_table = cands[s].size();
      }
    }
    placed[best] = true;
    order.push_back(best);
  }

  std::map<std::string, size_t> level_of;
  for (size_t k = 0; k < n; ++k) level_of[syms[order[k]]->name] = k;
  std::vector<std::vector<const Rule*>> checks(n + 1);
  for (size_t r = 0; r < constraints.size(); ++r) {
    size_t lv = 0;
    for (size_t q : rule_syms[r]) lv = std::max(lv, level_of[syms[q]->name]);
    checks[lv + 1].push_back(&constraints[r]);
  }

  PolyInterp interp;
  long work = budget;
  std::function<std::optional<PolyInterp>(size_t)> dfs =
      [&](size_t k) -> std::optional<PolyInterp> {
    if (k == n) return interp;
    Symbol f = syms[order[k]];
    for (const Polynomial& cand : cands[order[k]]) {
      if (work < 0) break;
      interp.by_symbol[f->name] = cand;
      bool ok = true;
      for (const Rule* r : checks[k + 1]) {
        long check = std::min(work, kSingleCheckBudget);
        long left = check;
        bool oriented = poly_orients_counted(interp, *r, left);
        work -= check - left;
        --work;
        if (!oriented) {
          ok = false;
          break;
        }
      }
      if (ok) {
        auto res = dfs(k + 1);
        if (res) return res;
      }
    }
    interp.by_symbol.erase(f->name);
    return std::nullopt;
  };
  auto res = dfs(0);
  if (res && !poly_check_ac_compatible(*res, syms))
    return std::nullopt;  // cannot happen: templates are theory-compatible
  return res;
}

PolyInterp parse_poly_interp(const std::string& text) {
  PolyInterp out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t colon = line.find(':');
    if (colon == std::string::npos) {
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (blank) continue;
      throw std::invalid_argument("interpretation line " +
                                  std::to_string(lineno) + ": expected name:poly");
    }
    std::string name = line.substr(0, colon);
    name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
    std::string body = line.substr(colon + 1);

    // grammar: poly := mono ('+' mono)*, mono := factor ('*' factor)*,
    // factor := number | x<k> ['^' number]
    size_t p = 0;
    auto skip = [&] { while (p < body.size() && isspace(body[p])) ++p; };
    auto number = [&]() -> long long {
      skip();
      size_t start = p;
      while (p < body.size() && isdigit(body[p])) ++p;
      if (start == p)
        throw std::invalid_argument("interpretation line " +
                                    std::to_string(lineno) + ": number expected");
      return std::stoll(body.substr(start, p - start));
    };
    Polynomial poly;
    for (;;) {
      Polynomial mono = Polynomial::constant(1);
      for (;;) {
        skip();
        if (p < body.size() && body[p] == 'x') {
          ++p;
          long long idx = number();
          if (idx < 1)
            throw std::invalid_argument("argument indices start at x1");
          Polynomial v = Polynomial::variable(static_cast<Var>(idx - 1));
          skip();
          long long e = 1;
          if (p < body.size() && body[p] == '^') {
            ++p;
            e = number();
          }
          for (long long k = 0; k < e; ++k) mono = mono * v;
        } else {
          mono = mono * Polynomial::constant(number());
        }
        skip();
        if (p < body.size() && body[p] == '*') {
          ++p;
          continue;
        }
        break;
      }
      poly = poly + mono;
      skip();
      if (p < body.size() && body[p] == '+') {
        ++p;
        continue;
      }
      if (p < body.size())
        throw std::invalid_argument("interpretation line " +
                                    std::to_string(lineno) + ": trailing input");
      break;
    }
    out.by_symbol[name] = poly;
  }
  return out;
}

// ---------------------------------------------------------------------------
// constraint system

void ConstraintSystem::add(const Rule& r) {
  for (const Rule& have : rules_)
    if (is_rule_variant(have, r)) return;
  rules_.push_back(r);
}

// ---------------------------------------------------------------------------
// oracles

VerdictResult PolySearchOracle::check(const Trs& constraints) {
  ++queries_;
  if (constraints.empty()) return {Verdict::yes, "empty system"};
  std::vector<Symbol> syms = symbols_of(constraints);
  if (cache_) {
    bool ok = poly_check_ac_compatible(*cache_, syms);
    for (const Rule& r : constraints) {
      if (!ok) break;
      try {
        ok = poly_orients(*cache_, r);
      } catch (const std::out_of_range&) {
        ok = false;
      }
    }
    if (ok) return {Verdict::yes, "cached interpretation"};
    // keep the cached assignments, search only the new symbols
    auto extended = poly_search(constraints, bound_, kSearchBudget, &*cache_);
    if (extended) {
      cache_ = extended;
      return {Verdict::yes, "extended interpretation"};
    }
  }
  auto found = poly_search(constraints, bound_, kSearchBudget);
  if (found) {
    cache_ = found;
    return {Verdict::yes, "interpretation found"};
  }
  return {Verdict::maybe, "no interpretation within bound " +
                              std::to_string(bound_)};
}

VerdictResult FixedInterpOracle::check(const Trs& constraints) {
  ++queries_;
  if (constraints.empty()) return {Verdict::yes, "empty system"};
  if (!poly_check_ac_compatible(interp_, symbols_of(constraints)))
    return {Verdict::maybe, "interpretation not theory-compatible"};
  for (const Rule& r : constraints) {
    try {
      if (!poly_orients(interp_, r))
        return {Verdict::maybe, "rule not oriented by fixed interpretation"};
    } catch (const std::out_of_range& e) {
      return {Verdict::error, e.what()};
    }
  }
  return {Verdict::yes, "fixed interpretation orients all rules"};
}

// ---------------------------------------------------------------------------
// external prover client

std::string serialize_constraints_wst(const Trs& constraints,
                                      const VarPool* names) {
  return print_trs_wst(constraints, names);
}

ExternalProverOracle::ExternalProverOracle(ProverConfig cfg, const VarPool* names)
    : cfg_(std::move(cfg)), names_(names) {}

ExternalProverOracle::~ExternalProverOracle() { kill_session(); }

void ExternalProverOracle::kill_session() {
  if (session_pid_ > 0) {
    ::kill(session_pid_, SIGKILL);
    int status = 0;
    ::waitpid(session_pid_, &status, 0);
  }
  if (session_in_ >= 0) ::close(session_in_);
  if (session_out_ >= 0) ::close(session_out_);
  session_pid_ = -1;
  session_in_ = session_out_ = -1;
}

namespace {

VerdictResult parse_verdict(const std::string& output) {
  std::istringstream in(output);
  std::string tok;
  if (!(in >> tok)) return {Verdict::error, "empty prover output"};
  if (tok == "YES") return {Verdict::yes, output};
  if (tok == "MAYBE") return {Verdict::maybe, output};
  if (tok == "NO") return {Verdict::no, output};
  if (tok == "TIMEOUT") return {Verdict::timeout, output};
  return {Verdict::error, "unrecognized prover output: " + output};
}

// Spawns `argv` with stdin/stdout pipes. Returns pid or -1.
int spawn(const std::vector<std::string>& argv, int* in_fd, int* out_fd) {
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0) return -1;
  if (pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    return -1;
  }
  pid_t pid = fork();
  if (pid < 0) return -1;
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    std::vector<char*> args;
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  *in_fd = to_child[1];
  *out_fd = from_child[0];
  return pid;
}

// Reads until EOF or deadline; false on timeout.
bool read_with_deadline(int fd, std::chrono::milliseconds budget,
                        std::string* out, bool stop_at_line) {
  auto deadline = std::chrono::steady_clock::now() + budget;
  char buf[4096];
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) return false;
    auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    struct pollfd pfd{fd, POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr == 0) return false;
    if (pr < 0) {
      if (errno == EINTR) continue;
      return true;  // treat as EOF; caller inspects the output
    }
    ssize_t n = ::read(fd, buf, sizeof buf);
    if (n <= 0) return true;  // EOF
    out->append(buf, static_cast<size_t>(n));
    if (stop_at_line && out->find('\n') != std::string::npos) return true;
  }
}

}  // namespace

VerdictResult ExternalProverOracle::run_oneshot(const std::string& problem) {
  char path[] = "/tmp/accomp-query-XXXXXX";
  int tmp = mkstemp(path);
  if (tmp < 0) return {Verdict::error, "cannot create temporary problem file"};
  ssize_t w = ::write(tmp, problem.data(), problem.size());
  ::close(tmp);
  if (w != static_cast<ssize_t>(problem.size())) {
    ::unlink(path);
    return {Verdict::error, "short write to temporary problem file"};
  }
  int in_fd = -1, out_fd = -1;
  int pid = spawn({cfg_.command, path}, &in_fd, &out_fd);
  if (pid < 0) {
    ::unlink(path);
    return {Verdict::error, "failed to spawn prover " + cfg_.command};
  }
  ::close(in_fd);
  std::string output;
  bool done = read_with_deadline(out_fd, cfg_.timeout, &output, false);
  ::close(out_fd);
  if (!done) ::kill(pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);
  ::unlink(path);
  if (!done) return {Verdict::timeout, "prover exceeded query timeout"};
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    return {Verdict::error, "prover executable not found: " + cfg_.command};
  return parse_verdict(output);
}

VerdictResult ExternalProverOracle::run_interactive(const std::string& problem) {
  if (session_pid_ < 0) {
    session_pid_ = spawn({cfg_.command}, &session_in_, &session_out_);
    if (session_pid_ < 0)
      return {Verdict::error, "failed to spawn prover " + cfg_.command};
  }
  std::string msg = problem + "(RUN)\n";
  ssize_t w = ::write(session_in_, msg.data(), msg.size());
  if (w != static_cast<ssize_t>(msg.size())) {
    kill_session();
    return {Verdict::error, "prover session lost"};
  }
  std::string output;
  bool done = read_with_deadline(session_out_, cfg_.timeout, &output, true);
  if (!done) {
    kill_session();  // answers would no longer line up with queries
    return {Verdict::timeout, "prover exceeded query timeout"};
  }
  if (output.empty()) {
    kill_session();
    return {Verdict::error, "prover session closed"};
  }
  return parse_verdict(output);
}

VerdictResult ExternalProverOracle::check(const Trs& constraints) {
  ++queries_;
  if (constraints.empty()) return {Verdict::yes, "empty system"};
  std::string problem = serialize_constraints_wst(constraints, names_);
  auto hit = cache_.find(problem);
  if (hit != cache_.end()) return hit->second;
  VerdictResult res = cfg_.mode == ProverMode::oneshot
                          ? run_oneshot(problem)
                          : run_interactive(problem);
  cache_.emplace(problem, res);
  return res;
}

}  // namespace accomp

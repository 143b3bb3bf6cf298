#include "accomp/wst.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace accomp {

namespace {

enum class Tok { lparen, rparen, comma, arrow, eq, ident, end };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool starts(const char* s) const {
    return src.compare(pos, strlen(s), s) == 0;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
        continue;
      }
      int l = line, co = col;
      if (c == '(') {
        out.push_back({Tok::lparen, "(", l, co});
        advance();
      } else if (c == ')') {
        out.push_back({Tok::rparen, ")", l, co});
        advance();
      } else if (c == ',') {
        out.push_back({Tok::comma, ",", l, co});
        advance();
      } else if (starts("->")) {
        out.push_back({Tok::arrow, "->", l, co});
        advance();
        advance();
      } else if (starts("==")) {
        out.push_back({Tok::eq, "==", l, co});
        advance();
        advance();
      } else {
        std::string id;
        while (pos < src.size()) {
          char d = src[pos];
          if (d == ' ' || d == '\t' || d == '\n' || d == '\r' || d == '(' ||
              d == ')' || d == ',' || starts("->") || starts("=="))
            break;
          id += d;
          advance();
        }
        out.push_back({Tok::ident, id, l, co});
      }
    }
    out.push_back({Tok::end, "", line, col});
    return out;
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;
  SymbolTable& syms;
  VarPool& vars;
  std::set<std::string> declared_vars;

  const Token& peek() const { return toks[i]; }
  Token take() { return toks[i++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw WstError(t.line, t.col, msg);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    ++i;
  }

  Symbol intern_symbol(const Token& at, const std::string& name, int arity,
                       Theory th = Theory::none) {
    try {
      return syms.intern(name, arity, th);
    } catch (const std::invalid_argument& e) {
      fail(at, e.what());
    }
  }

  Term term() {
    if (peek().kind != Tok::ident) fail(peek(), "term");
    Token id = take();
    if (peek().kind == Tok::lparen) {
      take();
      std::vector<Term> args;
      if (peek().kind != Tok::rparen) {
        args.push_back(term());
        while (peek().kind == Tok::comma) {
          take();
          args.push_back(term());
        }
      }
      expect(Tok::rparen, ")");
      if (declared_vars.count(id.text))
        fail(id, "variable " + id.text + " used as a function symbol");
      Symbol f = intern_symbol(id, id.text, static_cast<int>(args.size()));
      return Term::app(f, std::move(args));
    }
    if (declared_vars.count(id.text)) return Term::variable(vars.intern(id.text));
    Symbol f = intern_symbol(id, id.text, 0);
    return Term::app(f);
  }

  // skips a balanced token sequence up to the closing rparen of the block
  void skip_block() {
    int depth = 1;
    while (depth > 0) {
      if (peek().kind == Tok::end) fail(peek(), "unbalanced block");
      Tok k = take().kind;
      if (k == Tok::lparen) ++depth;
      if (k == Tok::rparen) --depth;
    }
  }

  WstProblem run() {
    // first pass: variable and theory declarations
    size_t save = i;
    while (peek().kind != Tok::end) {
      if (peek().kind != Tok::lparen) fail(peek(), "block");
      take();
      if (peek().kind != Tok::ident) fail(peek(), "block keyword");
      Token kw = take();
      if (kw.text == "VAR") {
        while (peek().kind == Tok::ident) declared_vars.insert(take().text);
        expect(Tok::rparen, ")");
      } else {
        skip_block();
      }
    }
    for (const std::string& v : declared_vars) vars.intern(v);

    WstProblem out;
    out.var_names.assign(declared_vars.begin(), declared_vars.end());
    std::map<std::string, Theory> theory_decl;

    i = save;
    while (peek().kind != Tok::end) {
      expect(Tok::lparen, "(");
      Token kw = take();
      if (kw.text == "VAR") {
        while (peek().kind == Tok::ident) take();
        expect(Tok::rparen, ")");
      } else if (kw.text == "THEORY") {
        while (peek().kind == Tok::lparen) {
          take();
          if (peek().kind != Tok::ident) fail(peek(), "theory kind");
          Token kind = take();
          Theory th;
          if (kind.text == "AC") th = Theory::ac;
          else if (kind.text == "C") th = Theory::comm;
          else fail(kind, "unsupported theory " + kind.text);
          while (peek().kind == Tok::ident) {
            Token sym = take();
            if (declared_vars.count(sym.text))
              fail(sym, "variable declared as theory symbol");
            intern_symbol(sym, sym.text, 2, th);
            theory_decl[sym.text] = th;
          }
          expect(Tok::rparen, ")");
        }
        expect(Tok::rparen, ")");
      } else if (kw.text == "RULES") {
        while (peek().kind != Tok::rparen) {
          Token at = peek();
          Term l = term();
          bool is_rule;
          if (peek().kind == Tok::arrow) is_rule = true;
          else if (peek().kind == Tok::eq) is_rule = false;
          else fail(peek(), "-> or ==");
          take();
          Term r = term();
          if (is_rule) {
            auto rule = Rule::try_make(l, r);
            if (!rule)
              fail(at, l.is_var() ? "rule left-hand side is a variable"
                                  : "rule right-hand side has extra variables");
            out.rules.push_back(std::move(*rule));
          } else {
            out.equations.push_back({l, r});
          }
        }
        expect(Tok::rparen, ")");
      } else if (kw.text == "COMMENT") {
        skip_block();
      } else {
        fail(kw, "unknown block " + kw.text);
      }
    }
    for (auto& [name, th] : theory_decl) out.theory.emplace_back(name, th);
    return out;
  }
};

}  // namespace

WstProblem parse_wst(const std::string& text, SymbolTable& syms, VarPool& vars) {
  Lexer lex{text};
  Parser p{lex.run(), 0, syms, vars};
  return p.run();
}

// ---------------------------------------------------------------------------
// printing

std::string print_term(const Term& t, const VarPool* names) {
  if (t.is_var())
    return names ? names->name(t.var()) : "_v" + std::to_string(t.var());
  std::string out = t.sym()->name;
  if (!t.args().empty()) {
    out += "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ",";
      out += print_term(t.arg(i), names);
    }
    out += ")";
  }
  return out;
}

std::string print_rule(const Rule& r, const VarPool* names) {
  return print_term(r.lhs(), names) + " -> " + print_term(r.rhs(), names);
}

std::string print_equation(const Equation& e, const VarPool* names) {
  return print_term(e.lhs, names) + " == " + print_term(e.rhs, names);
}

std::string print_wst(const WstProblem& p, const VarPool* names) {
  std::ostringstream out;
  out << "(VAR";
  for (const std::string& v : p.var_names) out << " " << v;
  out << ")\n";
  if (!p.theory.empty()) {
    out << "(THEORY";
    for (auto& [name, th] : p.theory)
      out << " (" << (th == Theory::ac ? "AC" : "C") << " " << name << ")";
    out << ")\n";
  }
  out << "(RULES";
  if (p.rules.empty() && p.equations.empty()) {
    out << " )\n";
    return out.str();
  }
  out << "\n";
  for (const Rule& r : p.rules) out << "  " << print_rule(r, names) << "\n";
  for (const Equation& e : p.equations)
    out << "  " << print_equation(e, names) << "\n";
  out << ")\n";
  return out.str();
}

std::string print_trs_wst(const Trs& r, const VarPool* names) {
  WstProblem p;
  std::set<Var> vs;
  for (const Rule& rule : r) {
    collect_vars(rule.lhs(), vs);
    collect_vars(rule.rhs(), vs);
  }
  for (Var v : vs)
    p.var_names.push_back(names ? names->name(v) : "_v" + std::to_string(v));
  std::sort(p.var_names.begin(), p.var_names.end());
  p.var_names.erase(std::unique(p.var_names.begin(), p.var_names.end()),
                    p.var_names.end());
  for (Symbol f : symbols_of(r))
    if (f->has_theory()) p.theory.emplace_back(f->name, f->theory);
  p.rules = r;
  return print_wst(p, names);
}

Term parse_term_text(const std::string& text, SymbolTable& syms,
                     const VarPool& vars) {
  Lexer lex{text};
  VarPool& pool = const_cast<VarPool&>(vars);  // interning known names only
  Parser p{lex.run(), 0, syms, pool};
  for (Var v = 0; v <= vars.max_id(); ++v) p.declared_vars.insert(vars.name(v));
  Term t = p.term();
  if (p.peek().kind != Tok::end) p.fail(p.peek(), "trailing input after term");
  return t;
}

Equation parse_goal(const std::string& text, SymbolTable& syms,
                    const VarPool& vars) {
  size_t eq = text.find('=');
  if (eq == std::string::npos)
    throw WstError(1, 1, "goal must have the form \"s = t\"");
  size_t rhs_start = eq + 1;
  if (rhs_start < text.size() && text[rhs_start] == '=') ++rhs_start;
  Term l = parse_term_text(text.substr(0, eq), syms, vars);
  Term r = parse_term_text(text.substr(rhs_start), syms, vars);
  return {l, r};
}

}  // namespace accomp

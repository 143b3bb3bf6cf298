#pragma once

#include <stdexcept>
#include <string>

#include "accomp/term.hpp"

namespace accomp {

class WstError : public std::runtime_error {
 public:
  WstError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// A parsed problem: variable declarations, theory declarations (AC or C
/// symbols), equations (l == r) and rules (l -> r). Declaration lists are
/// kept sorted so printing and reparsing is stable.
struct WstProblem {
  std::vector<std::string> var_names;
  std::vector<std::pair<std::string, Theory>> theory;
  std::vector<Equation> equations;
  Trs rules;

  bool operator==(const WstProblem& other) const = default;
};

/// Parses the block format `(VAR x y) (THEORY (AC f)) (RULES l -> r  l == r)`.
/// COMMENT blocks are ignored. Symbol arities are inferred from first use and
/// enforced afterwards; declared theory symbols must be binary.
WstProblem parse_wst(const std::string& text, SymbolTable& syms, VarPool& vars);

std::string print_term(const Term& t, const VarPool* names = nullptr);
std::string print_rule(const Rule& r, const VarPool* names = nullptr);
std::string print_equation(const Equation& e, const VarPool* names = nullptr);
std::string print_wst(const WstProblem& p, const VarPool* names = nullptr);
/// A rule set as a full problem; variables and theory collected from the rules.
std::string print_trs_wst(const Trs& r, const VarPool* names = nullptr);

/// Parses a term; an identifier is a variable iff already interned in `vars`.
Term parse_term_text(const std::string& text, SymbolTable& syms,
                     const VarPool& vars);
/// Parses "s = t" (or "s == t").
Equation parse_goal(const std::string& text, SymbolTable& syms,
                    const VarPool& vars);

}  // namespace accomp

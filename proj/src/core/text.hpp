#pragma once

// Concrete syntax for terms and formulas. Everything is prefix notation with
// explicit parentheses, so the printer is a straightforward inverse.

#include <map>
#include <string>
#include <string_view>

#include "syntax.hpp"

namespace cidk {

/// Inductive predicates visible by name.
using PredEnv = std::map<std::string, IndPredPtr>;
/// Names used when printing, keyed by IndPred::key().
using PredNames = std::map<std::string, std::string>;

/// Recursive-descent reader over a text buffer. Positions in error messages
/// are reported relative to the buffer start passed to the constructor.
class Reader {
 public:
  explicit Reader(std::string_view text, int line = 1, int column = 1);

  void skipSpace();
  bool atEnd();
  bool peek(std::string_view token);
  bool accept(std::string_view token);
  void expect(std::string_view token);
  bool peekIdent();
  std::string ident();
  unsigned number();
  /// Raw text up to (not including) the first of `stops` at nesting depth 0.
  std::string until(std::string_view stops);

  Term term();
  /// Inline `ind[...]` declarations are added to `env`.
  Formula formula(PredEnv& env);

  [[noreturn]] void fail(const std::string& message) const;
  std::size_t offset() const { return pos_; }

 private:
  Formula literalOrAtom(PredEnv& env);
  std::string_view text_;
  std::size_t pos_ = 0;
  int line0_;
  int column0_;
};

Term parseTerm(std::string_view text);
Formula parseFormula(std::string_view text, const PredEnv& env = {});
Formula parseFormula(std::string_view text, PredEnv& env);

std::string printTerm(const Term& t);
/// Predicates missing from `names` are printed inline as `ind[...]`.
std::string printFormula(const Formula& f, const PredNames& names = {});
std::string printIndBody(const IndPred& pred, const PredNames& names);

bool isIdentifier(std::string_view s);

}  // namespace cidk

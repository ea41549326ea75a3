#pragma once

// Terms and formulas of first-order arithmetic extended with (finitely
// iterated) inductive predicates. Formulas are kept in negation normal form:
// negation only ever sits on an atom.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cidk {

enum class ErrorCode {
  NotPositive,
  IllFormedBody,
  Parse,
  UnassignedVariable,
  MissingTable,
  SourceTargetMismatch,
  PropertyViolated,
  RootNotFalse,
  BoundLimited,
  Unsupported,
};

const char* toString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

//------------------------------------------------------------------------------
// Terms

enum class TermKind { Var, Zero, Succ, Plus, Times };

struct TermNode;

class Term {
 public:
  static Term var(std::string name);
  static Term zero();
  static Term succ(Term t);
  static Term plus(Term a, Term b);
  static Term times(Term a, Term b);
  /// s(s(...(0))) with `n` successors.
  static Term numeral(unsigned n);

  TermKind kind() const;
  const std::string& name() const;  // Var only
  const Term& arg(std::size_t i) const;
  std::size_t arity() const;
  const std::string& key() const;

  bool contains(const std::string& var) const;
  void collectVars(std::set<std::string>& out) const;

  bool operator==(const Term& other) const { return key() == other.key(); }
  bool operator!=(const Term& other) const { return !(*this == other); }
  bool operator<(const Term& other) const { return key() < other.key(); }

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;
  std::vector<Term> args;
  std::string key;
};

//------------------------------------------------------------------------------
// Predicate symbols

class IndPred;
using IndPredPtr = std::shared_ptr<const IndPred>;

/// A unary predicate symbol: either a free set variable or an inductive
/// predicate. Equality of inductive predicates is alpha-equivalence of bodies.
class PredSymbol {
 public:
  static PredSymbol setVar(std::string name);
  static PredSymbol ind(IndPredPtr pred);

  bool isSetVar() const { return pred_ == nullptr; }
  bool isInd() const { return pred_ != nullptr; }
  const std::string& setVarName() const { return name_; }
  const IndPredPtr& indPred() const { return pred_; }
  /// Alpha-invariant identity.
  std::string key() const;
  /// Human-facing name.
  const std::string& displayName() const;

  bool operator==(const PredSymbol& other) const { return key() == other.key(); }
  bool operator!=(const PredSymbol& other) const { return !(*this == other); }

 private:
  std::string name_;
  IndPredPtr pred_;
};

//------------------------------------------------------------------------------
// Formulas

enum class FormulaKind { Atom, Eq, Lt, Or, And, Exists, Forall };

struct FormulaNode;

class Formula {
 public:
  static Formula atom(PredSymbol p, Term t, bool negated = false);
  static Formula eq(Term s, Term t, bool negated = false);
  static Formula lt(Term s, Term t, bool negated = false);
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  FormulaKind kind() const;
  bool negated() const;  // Atom, Eq, Lt
  bool isLiteral() const;
  const PredSymbol& pred() const;  // Atom
  const Term& term(std::size_t i) const;  // Atom: 0; Eq/Lt: 0, 1
  const Formula& child(std::size_t i) const;  // Or/And: 0, 1; quantifiers: 0
  const std::string& var() const;  // quantifiers

  /// Canonical alpha-invariant key; equality and ordering go through it.
  const std::string& key() const;
  const std::set<std::string>& freeVars() const;

  bool operator==(const Formula& other) const { return key() == other.key(); }
  bool operator!=(const Formula& other) const { return !(*this == other); }
  bool operator<(const Formula& other) const { return key() < other.key(); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  static Formula make(FormulaNode node);
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FormulaKind kind;
  bool negated = false;
  std::optional<PredSymbol> pred;
  std::vector<Term> terms;
  std::vector<Formula> children;
  std::string var;
  std::string key;
  std::set<std::string> freeVars;
};

/// I_{body, X, x}: the least fixed point of the operator induced by a body
/// positive in the set variable X, with distinguished element variable x.
class IndPred {
 public:
  const Formula& body() const { return body_; }
  const std::string& setVar() const { return setVar_; }
  const std::string& indVar() const { return indVar_; }
  const std::string& displayName() const { return displayName_; }
  const std::string& key() const { return key_; }
  /// Inductive predicates occurring directly in the body.
  const std::vector<IndPredPtr>& dependencies() const { return deps_; }
  /// Length of the longest dependency chain below this predicate.
  unsigned height() const { return height_; }

 private:
  friend IndPredPtr mkIndPred(Formula, std::string, std::string, std::string);
  IndPred(Formula body, std::string setVar, std::string indVar, std::string displayName);
  Formula body_;
  std::string setVar_;
  std::string indVar_;
  std::string displayName_;
  std::string key_;
  std::vector<IndPredPtr> deps_;
  unsigned height_ = 0;
};

/// Throws Error{NotPositive} or Error{IllFormedBody}.
IndPredPtr mkIndPred(Formula body, std::string setVar, std::string indVar,
                     std::string displayName);

using Substitution = std::map<std::string, Term>;

/// A predicate abstraction `\var. body`, used to instantiate set variables.
struct PredLambda {
  std::string var;
  Formula body;
};

using PredReplacement = std::variant<PredSymbol, PredLambda>;

//------------------------------------------------------------------------------
// Operations

bool isPositive(const Formula& f, const std::string& setVar);
/// True iff `p` occurs as an unnegated atom of `f` and never negated.
bool occursPositively(const Formula& f, const PredSymbol& p);
bool occurs(const Formula& f, const PredSymbol& p);

Formula negate(const Formula& f);

Term applySubst(const Substitution& theta, const Term& t);
Formula applySubst(const Substitution& theta, const Formula& f);
/// f[t/var].
Formula instantiate(const Formula& f, const std::string& var, const Term& t);

/// Replace every atom on `target` by `replacement`. A symbol replacement also
/// rewrites inside the bodies of inductive predicates (yielding new
/// predicates); a lambda replacement throws Error{Unsupported} there.
Formula replacePred(const Formula& f, const PredSymbol& target,
                    const PredReplacement& replacement);
IndPredPtr replacePredInIndPred(const IndPredPtr& pred, const PredSymbol& target,
                                const PredSymbol& replacement);

/// body[X := p][x := t].
Formula unfoldBody(const IndPred& pred, const PredReplacement& forSetVar, const Term& t);
/// body[X := pred][x := t], the premiss formula of the unfolding rules.
Formula unfold(const IndPredPtr& pred, const Term& t);

/// The negated literal of the greatest fixed point of `body`:
/// not I_{not body(not X, x)}(x).
Formula gfpDual(const Formula& body, const std::string& setVar, const std::string& indVar,
                const std::string& displayName);

enum class PredOrder { Below, Above, Equal, Incomparable };
const char* toString(PredOrder order);
/// The transitive occurs-in order between inductive predicates.
PredOrder predOrder(const IndPredPtr& a, const IndPredPtr& b);
/// Linear extension of predOrder: by height, then by canonical key.
bool predTotalLess(const IndPredPtr& a, const IndPredPtr& b);

/// Inductive predicates occurring as atoms (not inside other bodies).
std::vector<IndPredPtr> indPredsIn(const Formula& f);
/// All inductive predicates reachable from the atoms of `f`, dependencies first.
std::vector<IndPredPtr> indPredClosure(const std::vector<Formula>& fs);

std::set<std::string> setVarsIn(const Formula& f);

/// Deterministic fresh name `base<k>` for the least k avoiding `avoid`.
std::string freshVar(const std::set<std::string>& avoid, const std::string& base = "x");

}  // namespace cidk

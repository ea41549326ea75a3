#pragma once

// Sequents, rule instances and local rule checking.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prelude.hpp"
#include "syntax.hpp"

namespace cidk {

enum class Mode { Finitary, Cyclic };
const char* toString(Mode mode);

struct Sequent {
  std::set<Formula> ant;
  std::set<Formula> suc;

  std::set<std::string> freeVars() const;
  std::string key() const;
  bool operator==(const Sequent& other) const { return ant == other.ant && suc == other.suc; }
  bool operator!=(const Sequent& other) const { return !(*this == other); }
};

Sequent applySubst(const Substitution& theta, const Sequent& s);

enum class RuleTag {
  Id, Weaken, Subst, Cut,
  OrL, OrR, AndL, AndR, NegL, NegR,
  AllL, AllR, ExL, ExR, EqL, EqR,
  QAxiom, IndPA, Idl, Idr, Xind, NAxiom,
  Open,  // hypothesis leaf of a derivation fragment
};

const char* toString(RuleTag tag);
std::optional<RuleTag> ruleTagFromString(const std::string& s);
/// Number of premisses the rule takes.
std::size_t arity(RuleTag tag);

struct RuleInstance {
  RuleTag tag = RuleTag::Id;
  std::optional<Formula> principal;   // f=   (cut: the cut formula; eqL: the equation)
  std::optional<Term> term;           // t=
  std::optional<std::string> eigen;   // y=   (also the abstraction variable of inv)
  Substitution theta;                 // theta=
  std::optional<Formula> invariant;   // inv=
  std::optional<Formula> pattern;     // template=, holes u and v
  std::optional<unsigned> index;      // index=
};

struct RuleError {
  enum class Kind { WrongArity, SchemaMismatch, EigenvariableNotFresh, ModeForbidsRule };
  Kind kind;
  std::string detail;
};
const char* toString(RuleError::Kind kind);

/// Local correctness of one inference step. Cedents are sets, so contraction
/// is implicit and a principal formula may survive into a premiss.
std::optional<RuleError> checkStep(const Sequent& conclusion, const RuleInstance& rule,
                                   const std::vector<Sequent>& premisses, Mode mode);

/// Canonical premisses for `rule` applied to `conclusion`, principal formulas
/// dropped. Throws Error{Unsupported} for weaken and subst.
std::vector<Sequent> applyRule(const Sequent& conclusion, const RuleInstance& rule);

enum class Side { Left, Right };

struct AncestorPair {
  enum class Kind { Principal, Rewrite };
  Formula conclusionFormula;
  std::size_t premiss;
  Formula premissFormula;
  Side principalSide;
  Side auxSide;
  Kind kind;
};

/// Principal/auxiliary pairs of a checked step; eqL yields Rewrite pairs.
std::vector<AncestorPair> principalAuxiliary(const Sequent& conclusion, const RuleInstance& rule,
                                             const std::vector<Sequent>& premisses);

/// Robinson arithmetic, plus a recursive clause for <, as closed formulas.
const std::vector<Formula>& qAxioms();

/// Holes of an eqL template.
inline constexpr const char* kHoleU = "u";
inline constexpr const char* kHoleV = "v";

}  // namespace cidk

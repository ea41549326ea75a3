#pragma once

// Evaluation over the bounded universe {0..B}. Every verdict carries an
// exactness flag: exact verdicts agree with the standard model, the others
// may be artifacts of clipping quantifiers or arguments at the bound.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proof.hpp"

namespace cidk {

struct Truth {
  bool value = false;
  bool exact = true;
};

using Assignment = std::map<std::string, std::uint64_t>;

/// Inflationary iteration of a predicate's operator from the empty set.
struct ApproximantTable {
  IndPredPtr pred;
  unsigned bound = 0;
  /// Stage at which each element of {0..B} enters; -1 if it never does.
  std::vector<int> entryStage;
  /// Exactness of the evaluation that admitted the element.
  std::vector<bool> entryExact;
  /// stages[k] is the k-th approximant; stages.back() is the fixpoint.
  std::vector<std::vector<bool>> stages;
  /// Non-members are exact non-members of the least fixed point.
  bool negExact = false;

  unsigned closureStage() const { return static_cast<unsigned>(stages.size() - 1); }
  bool member(std::uint64_t v) const { return v <= bound && entryStage[v] >= 0; }
  std::vector<std::uint64_t> fixpoint() const;
};

/// Tables keyed by IndPred::key().
using TableMap = std::map<std::string, ApproximantTable>;

/// Throws Error{UnassignedVariable}; arithmetic overflow throws Error{Unsupported}.
std::uint64_t evalTerm(const Assignment& rho, const Term& t);

/// Throws Error{MissingTable} or Error{UnassignedVariable}.
Truth evalFormula(const Assignment& rho, const Formula& f, unsigned bound, const TableMap& tables);
/// As evalFormula, with `pred` read at approximant `stage` instead of its fixpoint.
Truth evalFormulaAtStage(const Assignment& rho, const Formula& f, unsigned bound,
                         const TableMap& tables, const IndPredPtr& pred, unsigned stage);

/// Requires tables of all predicates below `pred`.
ApproximantTable approximantIterate(const IndPredPtr& pred, unsigned bound, const TableMap& tables);
/// Adds tables for every predicate reachable from `pred`, inner ones first.
void ensureTables(TableMap& tables, const IndPredPtr& pred, unsigned bound);
void ensureTables(TableMap& tables, const std::vector<Formula>& fs, unsigned bound);

struct ProfileEntry {
  unsigned stage;
  std::vector<std::uint64_t> entered;
};
std::vector<ProfileEntry> closureProfile(const ApproximantTable& table);

/// One application of the operator to A within {0..B}.
std::vector<bool> applyOperator(const IndPredPtr& pred, const std::vector<bool>& a, unsigned bound,
                                const TableMap& tables, bool* exact = nullptr);

struct FixpointReport {
  bool ok = true;
  bool exact = true;
  bool exhaustivePreFixed = false;
  bool exhaustiveMonotone = false;
  std::size_t preFixedChecked = 0;
  std::size_t monotonePairsChecked = 0;
  std::vector<std::string> violations;
};

/// Knaster-Tarski on the bounded universe: the fixpoint is fixed, below every
/// pre-fixed set, and the operator is monotone.
FixpointReport fixpointLaws(const IndPredPtr& pred, unsigned bound, const TableMap& tables,
                            unsigned seed = 1);

struct SequentTruth {
  bool value = true;
  bool exact = true;
  std::optional<Assignment> counterexample;
};

/// All assignments of the free variables into {0..B}.
SequentTruth sequentTruth(const Sequent& s, unsigned bound, const TableMap& tables);

/// Truth of the sequent as a disjunction of negated antecedents and succedents.
Truth sequentValue(const Sequent& s, const Assignment& rho, unsigned bound, const TableMap& tables);

std::uint64_t cantorPair(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> cantorUnpair(std::uint64_t z);

//------------------------------------------------------------------------------
// Countermodel walk

enum class WalkVerdict { LoopDetected, StepLimit, StuckAtAxiom, ReachedOpenLeaf, NoFalsePremiss };
const char* toString(WalkVerdict v);

struct StageEntry {
  Formula formula;
  IndPredPtr pred;
  int stage;  // least approximant of `pred` making the formula true
};

struct WalkStep {
  std::size_t node;
  Assignment rho;
  std::vector<StageEntry> stages;
};

struct WalkResult {
  WalkVerdict verdict = WalkVerdict::StepLimit;
  std::vector<WalkStep> steps;
  /// LoopDetected: index of the first occurrence of the repeated state.
  std::size_t loopStart = 0;
};

/// Follows false premisses from a false root. Throws Error{RootNotFalse} when
/// no extension of rho0 falsifies the root, Error{BoundLimited} when only
/// inexact falsifications are available.
WalkResult countermodelWalk(const Proof& p, const Assignment& rho0, unsigned bound,
                            TableMap& tables, unsigned maxSteps);

/// Least stage of the greatest predicate of f at which f holds, or -1.
std::optional<StageEntry> formulaStage(const Formula& f, const Assignment& rho, unsigned bound,
                                       const TableMap& tables);

}  // namespace cidk

#pragma once

// Proof graphs and the proof file format. A finitary proof is an acyclic
// graph; a cyclic proof may have back-edges.

#include <string>
#include <string_view>
#include <vector>

#include "calculus.hpp"
#include "text.hpp"

namespace cidk {

struct ProofNode {
  std::string label;
  Sequent seq;
  RuleInstance rule;
  std::vector<std::size_t> premisses;
};

struct Proof {
  Mode mode = Mode::Finitary;
  std::vector<ProofNode> nodes;
  std::size_t root = 0;
  /// Named predicates, used for printing.
  PredEnv preds;
  /// Free-text lines written as `#` comments.
  std::vector<std::string> comments;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const std::string& label) const;
  bool hasCycle() const;
  /// Node indices reachable from the root, in depth-first preorder.
  std::vector<std::size_t> reachable() const;
};

/// Throws Error{Parse} with a line/column position.
Proof parseProof(std::string_view text);
Proof loadProof(const std::string& path);
std::string serializeProof(const Proof& p);

/// Printing names for every predicate used in `p`, declarations first.
struct PredDecl {
  std::string name;
  IndPredPtr pred;
};
std::vector<PredDecl> predDeclarations(const Proof& p);
PredNames predNames(const Proof& p);

struct Diagnostic {
  std::size_t node;
  std::string label;
  std::string tag;
  std::string kind;
  std::string detail;
};

/// Local checks of every node plus structural conditions. Open leaves are
/// reported unless `allowOpen`.
std::vector<Diagnostic> checkProof(const Proof& p, bool allowOpen = false);
std::string formatDiagnostic(const Diagnostic& d);

/// A finite tree of inference steps. Leaves cut off by a depth bound carry
/// the rule tag Open.
struct TreeNode {
  std::size_t source = 0;
  Sequent seq;
  RuleInstance rule;
  std::vector<TreeNode> children;
};

/// Unrolling of the graph: steps up to `depth` edges from the root; their
/// premisses at depth+1 become open leaves.
TreeNode unfold(const Proof& p, unsigned depth);
/// Unrolling in which substitution steps are pushed into the sub-derivation
/// and disappear; they do not count towards the depth.
TreeNode eliminateSubstPrefix(const Proof& p, unsigned depth);
/// Turns a tree into a (finitary-shaped) proof with labels t0, t1, ...
Proof treeToProof(const TreeNode& t, Mode mode, const PredEnv& preds = {});
std::size_t treeSize(const TreeNode& t);

/// Tree rendering in which back-edges become buds pointing at their companions.
std::string exportBudCompanion(const Proof& p);

std::string printSequent(const Sequent& s, const PredNames& names);

}  // namespace cidk

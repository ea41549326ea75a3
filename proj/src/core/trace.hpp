#pragma once

// Traces through antecedents and the progressing-trace condition for
// regular proofs, decided by composition closure of per-edge trace graphs.

#include <cstdint>
#include <string>
#include <vector>

#include "proof.hpp"

namespace cidk {

struct TraceEdge {
  Formula from;
  Formula to;
  bool progress;
};

/// Immediate-ancestor pairs from the conclusion of a step into premiss `i`.
std::vector<TraceEdge> stepTraceEdges(const Sequent& conclusion, const RuleInstance& rule,
                                      const std::vector<Sequent>& premisses, std::size_t i);

/// Boolean matrix over the antecedents of two nodes; cells are 0 (no edge),
/// 1 (edge) or 2 (progressing edge).
struct TraceGraph {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  std::uint8_t at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
  std::uint8_t& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
  std::string key() const;
  bool operator==(const TraceGraph& o) const {
    return source == o.source && target == o.target && cells == o.cells;
  }
};

TraceGraph identityGraph(std::size_t node, std::size_t size);
/// Relational composition, progress flags joined. Throws
/// Error{SourceTargetMismatch} when g1 does not end where g2 starts.
TraceGraph compose(const TraceGraph& g1, const TraceGraph& g2);

/// Everything the progress check needs: sorted antecedents and the trace
/// graph of every edge of the proof graph.
struct TraceSystem {
  std::size_t root = 0;
  std::vector<std::vector<Formula>> ants;
  std::vector<TraceGraph> edges;
};

TraceSystem buildTraceSystem(const Proof& p);
TraceGraph edgeTraceGraph(const Proof& p, std::size_t node, std::size_t premissIndex);
/// Explicit formula pairs of a graph.
std::vector<TraceEdge> graphEdges(const TraceSystem& sys, const TraceGraph& g);

/// A progressing trace around a cycle: nodes[0] == nodes.back().
struct TraceWitness {
  std::vector<std::size_t> nodes;
  std::vector<Formula> formulas;
  std::vector<bool> progress;  // per step
};

struct Lasso {
  std::vector<std::size_t> prefix;  // root ... loop start
  std::vector<std::size_t> cycle;   // loop start ... loop start
};

struct ProgressVerdict {
  bool progressing = false;
  std::vector<TraceWitness> witnesses;  // one per idempotent loop, when progressing
  Lasso lasso;                          // when not
};

ProgressVerdict checkProgress(const TraceSystem& sys);
ProgressVerdict checkProgress(const Proof& p);

struct TraceAnalysis {
  IndPredPtr pred;
  std::size_t positiveFrom = 0;
  bool maximal = false;
};

/// The predicate unfolded at the idl progress points of the witness, checked
/// to occur positively in every trace formula and to dominate every
/// predicate occurring in them. Throws Error{PropertyViolated}.
TraceAnalysis analyzeTrace(const Proof& p, const TraceWitness& w);

std::string formatLasso(const Proof& p, const Lasso& l);

}  // namespace cidk

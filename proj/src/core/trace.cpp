#include "trace.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>

namespace cidk {

std::vector<TraceEdge> stepTraceEdges(const Sequent& conclusion, const RuleInstance& rule,
                                      const std::vector<Sequent>& premisses, std::size_t i) {
  std::vector<TraceEdge> out;
  const Sequent& prem = premisses.at(i);
  if (rule.tag == RuleTag::Subst) {
    for (const auto& psi : prem.ant) {
      Formula image = applySubst(rule.theta, psi);
      if (conclusion.ant.count(image)) out.push_back({image, psi, false});
    }
    return out;
  }
  for (const auto& phi : conclusion.ant)
    if (prem.ant.count(phi)) out.push_back({phi, phi, false});
  for (const auto& pair : principalAuxiliary(conclusion, rule, premisses)) {
    if (pair.premiss != i || pair.principalSide != Side::Left || pair.auxSide != Side::Left)
      continue;
    out.push_back({pair.conclusionFormula, pair.premissFormula,
                   pair.kind == AncestorPair::Kind::Principal});
  }
  return out;
}

std::string TraceGraph::key() const {
  std::string k = std::to_string(source) + ">" + std::to_string(target) + ":";
  for (auto c : cells) k += static_cast<char>('0' + c);
  return k;
}

TraceGraph identityGraph(std::size_t node, std::size_t size) {
  TraceGraph g;
  g.source = g.target = node;
  g.rows = g.cols = size;
  g.cells.assign(size * size, 0);
  for (std::size_t i = 0; i < size; ++i) g.at(i, i) = 1;
  return g;
}

TraceGraph compose(const TraceGraph& g1, const TraceGraph& g2) {
  if (g1.target != g2.source || g1.cols != g2.rows)
    throw Error(ErrorCode::SourceTargetMismatch,
                "cannot compose graph ending at " + std::to_string(g1.target) +
                    " with graph starting at " + std::to_string(g2.source));
  TraceGraph out;
  out.source = g1.source;
  out.target = g2.target;
  out.rows = g1.rows;
  out.cols = g2.cols;
  out.cells.assign(out.rows * out.cols, 0);
  for (std::size_t i = 0; i < g1.rows; ++i)
    for (std::size_t j = 0; j < g1.cols; ++j) {
      std::uint8_t a = g1.at(i, j);
      if (!a) continue;
      for (std::size_t k = 0; k < g2.cols; ++k) {
        std::uint8_t b = g2.at(j, k);
        if (b) out.at(i, k) = std::max(out.at(i, k), std::max(a, b));
      }
    }
  return out;
}

namespace {

std::size_t indexOf(const std::vector<Formula>& fs, const Formula& f) {
  auto it = std::lower_bound(fs.begin(), fs.end(), f);
  if (it == fs.end() || *it != f) return Proof::npos;
  return static_cast<std::size_t>(it - fs.begin());
}

TraceGraph graphFor(const Proof& p, const std::vector<std::vector<Formula>>& ants,
                    std::size_t v, std::size_t i) {
  const auto& n = p.nodes[v];
  std::size_t c = n.premisses.at(i);
  TraceGraph g;
  g.source = v;
  g.target = c;
  g.rows = ants[v].size();
  g.cols = ants[c].size();
  g.cells.assign(g.rows * g.cols, 0);
  std::vector<Sequent> prem;
  for (std::size_t k : n.premisses) prem.push_back(p.nodes[k].seq);
  for (const auto& e : stepTraceEdges(n.seq, n.rule, prem, i)) {
    std::size_t a = indexOf(ants[v], e.from), b = indexOf(ants[c], e.to);
    if (a == Proof::npos || b == Proof::npos) continue;
    g.at(a, b) = std::max<std::uint8_t>(g.at(a, b), e.progress ? 2 : 1);
  }
  return g;
}

std::vector<std::vector<Formula>> sortedAnts(const Proof& p) {
  std::vector<std::vector<Formula>> ants;
  for (const auto& n : p.nodes) ants.emplace_back(n.seq.ant.begin(), n.seq.ant.end());
  return ants;
}

}  // namespace

TraceGraph edgeTraceGraph(const Proof& p, std::size_t node, std::size_t premissIndex) {
  return graphFor(p, sortedAnts(p), node, premissIndex);
}

TraceSystem buildTraceSystem(const Proof& p) {
  TraceSystem sys;
  sys.root = p.root;
  sys.ants = sortedAnts(p);
  for (std::size_t v : p.reachable())
    for (std::size_t i = 0; i < p.nodes[v].premisses.size(); ++i)
      sys.edges.push_back(graphFor(p, sys.ants, v, i));
  return sys;
}

std::vector<TraceEdge> graphEdges(const TraceSystem& sys, const TraceGraph& g) {
  std::vector<TraceEdge> out;
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      if (g.at(i, j)) out.push_back({sys.ants[g.source][i], sys.ants[g.target][j], g.at(i, j) == 2});
  return out;
}

//------------------------------------------------------------------------------
// Progress

namespace {

struct Element {
  TraceGraph graph;
  long parent;       // closure element this one extends, or -1
  std::size_t edge;  // last edge of the path
};

std::vector<std::size_t> pathEdges(const std::vector<Element>& closure, std::size_t id) {
  std::vector<std::size_t> edges;
  for (long cur = static_cast<long>(id); cur >= 0; cur = closure[cur].parent)
    edges.push_back(closure[cur].edge);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

std::vector<std::size_t> pathNodes(const TraceSystem& sys, const std::vector<std::size_t>& edges) {
  std::vector<std::size_t> nodes{sys.edges[edges.front()].source};
  for (std::size_t e : edges) nodes.push_back(sys.edges[e].target);
  return nodes;
}

std::vector<std::size_t> shortestPrefix(const TraceSystem& sys, std::size_t to) {
  std::map<std::size_t, std::size_t> parent;
  std::deque<std::size_t> queue{sys.root};
  parent[sys.root] = sys.root;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (const auto& e : sys.edges)
      if (e.source == v && !parent.count(e.target)) {
        parent[e.target] = v;
        queue.push_back(e.target);
      }
  }
  std::vector<std::size_t> path{to};
  while (path.back() != sys.root) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

TraceWitness recoverTrace(const TraceSystem& sys, const std::vector<std::size_t>& edges,
                          std::size_t start) {
  std::size_t len = edges.size();
  // reach[k][j][p]: position k, formula j, progress seen p.
  std::vector<std::vector<std::array<bool, 2>>> reach(len + 1);
  reach[0].assign(sys.edges[edges[0]].rows, {false, false});
  reach[0][start][0] = true;
  for (std::size_t k = 0; k < len; ++k) {
    const TraceGraph& g = sys.edges[edges[k]];
    reach[k + 1].assign(g.cols, {false, false});
    for (std::size_t i = 0; i < g.rows; ++i)
      for (int p = 0; p < 2; ++p) {
        if (!reach[k][i][p]) continue;
        for (std::size_t j = 0; j < g.cols; ++j)
          if (g.at(i, j)) reach[k + 1][j][p || g.at(i, j) == 2] = true;
      }
  }
  TraceWitness w;
  w.nodes = pathNodes(sys, edges);
  std::vector<std::size_t> idx(len + 1);
  idx[len] = start;
  int p = 1;
  for (std::size_t k = len; k-- > 0;) {
    const TraceGraph& g = sys.edges[edges[k]];
    bool found = false;
    for (std::size_t i = 0; i < g.rows && !found; ++i)
      for (int q = 0; q < 2 && !found; ++q) {
        std::uint8_t c = g.at(i, idx[k + 1]);
        if (reach[k][i][q] && c && (q || c == 2) == static_cast<bool>(p)) {
          idx[k] = i;
          p = q;
          found = true;
        }
      }
  }
  for (std::size_t k = 0; k <= len; ++k) w.formulas.push_back(sys.ants[w.nodes[k]][idx[k]]);
  for (std::size_t k = 0; k < len; ++k)
    w.progress.push_back(sys.edges[edges[k]].at(idx[k], idx[k + 1]) == 2);
  return w;
}

}  // namespace

ProgressVerdict checkProgress(const TraceSystem& sys) {
  std::vector<Element> closure;
  std::map<std::string, std::size_t> seen;
  std::map<std::size_t, std::vector<std::size_t>> outEdges;
  for (std::size_t e = 0; e < sys.edges.size(); ++e) {
    outEdges[sys.edges[e].source].push_back(e);
    if (seen.emplace(sys.edges[e].key(), closure.size()).second)
      closure.push_back({sys.edges[e], -1, e});
  }
  for (std::size_t id = 0; id < closure.size(); ++id) {
    for (std::size_t e : outEdges[closure[id].graph.target]) {
      TraceGraph h = compose(closure[id].graph, sys.edges[e]);
      if (seen.emplace(h.key(), closure.size()).second)
        closure.push_back({std::move(h), static_cast<long>(id), e});
    }
  }

  ProgressVerdict verdict;
  verdict.progressing = true;
  constexpr std::size_t kMaxWitnesses = 32;
  for (std::size_t id = 0; id < closure.size(); ++id) {
    const TraceGraph& g = closure[id].graph;
    if (g.source != g.target || !(compose(g, g) == g)) continue;
    std::size_t diag = Proof::npos;
    for (std::size_t i = 0; i < g.rows; ++i)
      if (g.at(i, i) == 2) {
        diag = i;
        break;
      }
    auto edges = pathEdges(closure, id);
    if (diag == Proof::npos) {
      verdict.progressing = false;
      verdict.witnesses.clear();
      verdict.lasso.prefix = shortestPrefix(sys, g.source);
      verdict.lasso.cycle = pathNodes(sys, edges);
      return verdict;
    }
    if (verdict.witnesses.size() < kMaxWitnesses)
      verdict.witnesses.push_back(recoverTrace(sys, edges, diag));
  }
  return verdict;
}

ProgressVerdict checkProgress(const Proof& p) { return checkProgress(buildTraceSystem(p)); }

TraceAnalysis analyzeTrace(const Proof& p, const TraceWitness& w) {
  std::vector<IndPredPtr> unfolded;
  for (std::size_t k = 0; k + 1 < w.nodes.size(); ++k) {
    const auto& rule = p.nodes[w.nodes[k]].rule;
    const Formula& f = w.formulas[k];
    if (w.progress[k] && rule.tag == RuleTag::Idl && rule.principal && *rule.principal == f &&
        f.kind() == FormulaKind::Atom && !f.negated() && f.pred().isInd())
      unfolded.push_back(f.pred().indPred());
  }
  if (unfolded.empty())
    throw Error(ErrorCode::PropertyViolated, "trace has no idl progress point");
  IndPredPtr psi = *std::max_element(unfolded.begin(), unfolded.end(), predTotalLess);
  PredSymbol sym = PredSymbol::ind(psi);

  TraceAnalysis out;
  out.pred = psi;
  for (std::size_t k = 0; k < w.formulas.size(); ++k)
    if (!occursPositively(w.formulas[k], sym)) out.positiveFrom = k + 1;
  if (out.positiveFrom != 0)
    throw Error(ErrorCode::PropertyViolated,
                psi->displayName() + " does not occur positively at trace position " +
                    std::to_string(out.positiveFrom - 1));
  out.maximal = true;
  for (const auto& f : w.formulas)
    for (const auto& chi : indPredsIn(f)) {
      auto order = predOrder(chi, psi);
      if (order != PredOrder::Below && order != PredOrder::Equal) {
        out.maximal = false;
        throw Error(ErrorCode::PropertyViolated,
                    chi->displayName() + " on the trace is not below " + psi->displayName());
      }
    }
  return out;
}

std::string formatLasso(const Proof& p, const Lasso& l) {
  std::string out = "prefix:";
  for (std::size_t v : l.prefix) out += " " + p.nodes[v].label;
  out += " | cycle:";
  for (std::size_t v : l.cycle) out += " " + p.nodes[v].label;
  return out;
}

}  // namespace cidk

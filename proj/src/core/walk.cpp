#include <algorithm>

#include "semantics.hpp"
#include "trace.hpp"

namespace cidk {

const char* toString(WalkVerdict v) {
  switch (v) {
    case WalkVerdict::LoopDetected: return "LoopDetected";
    case WalkVerdict::StepLimit: return "StepLimit";
    case WalkVerdict::StuckAtAxiom: return "StuckAtAxiom";
    case WalkVerdict::ReachedOpenLeaf: return "ReachedOpenLeaf";
    case WalkVerdict::NoFalsePremiss: return "NoFalsePremiss";
  }
  return "?";
}

std::optional<StageEntry> formulaStage(const Formula& f, const Assignment& rho, unsigned bound,
                                       const TableMap& tables) {
  auto preds = indPredsIn(f);
  if (preds.empty()) return std::nullopt;
  IndPredPtr top = *std::max_element(preds.begin(), preds.end(), predTotalLess);
  auto it = tables.find(top->key());
  if (it == tables.end())
    throw Error(ErrorCode::MissingTable, "no approximant table for " + top->displayName());
  for (unsigned k = 0; k <= it->second.closureStage(); ++k)
    if (evalFormulaAtStage(rho, f, bound, tables, top, k).value)
      return StageEntry{f, top, static_cast<int>(k)};
  return StageEntry{f, top, -1};
}

namespace {

/// Exact falsity of a sequent: every antecedent exactly true, every
/// succedent exactly false.
Truth falsity(const Sequent& s, const Assignment& rho, unsigned bound, const TableMap& tables) {
  Truth t = sequentValue(s, rho, bound, tables);
  return {!t.value, t.exact};
}

std::vector<StageEntry> stagesOf(const Sequent& s, const Assignment& rho, unsigned bound,
                                 const TableMap& tables) {
  std::vector<StageEntry> out;
  for (const auto& f : s.ant)
    if (auto e = formulaStage(f, rho, bound, tables)) out.push_back(*e);
  return out;
}

/// Assignments over `vars` extending `base`, in lexicographic order.
template <typename Fn>
void forEachExtension(const Assignment& base, const std::vector<std::string>& vars, unsigned bound,
                      Fn&& fn) {
  Assignment rho = base;
  for (const auto& v : vars) rho[v] = 0;
  while (true) {
    if (!fn(rho)) return;
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (rho[vars[i]] < bound) {
        ++rho[vars[i]];
        break;
      }
      rho[vars[i]] = 0;
    }
    if (i == vars.size()) return;
  }
}

Assignment restrictTo(const Assignment& rho, const std::set<std::string>& vars) {
  Assignment out;
  for (const auto& [k, v] : rho)
    if (vars.count(k)) out[k] = v;
  return out;
}

std::string stateKey(std::size_t node, const Assignment& rho, const std::vector<StageEntry>& st) {
  std::string k = std::to_string(node) + "|";
  for (const auto& [v, n] : rho) k += v + "=" + std::to_string(n) + ",";
  k += "|";
  for (const auto& e : st) k += e.formula.key() + ":" + std::to_string(e.stage) + ",";
  return k;
}

int stageFor(const std::vector<StageEntry>& st, const Formula& f) {
  for (const auto& e : st)
    if (e.formula == f) return e.stage;
  return -1;
}

bool isAxiom(RuleTag t) {
  return t == RuleTag::Id || t == RuleTag::EqR || t == RuleTag::QAxiom || t == RuleTag::NAxiom;
}

}  // namespace

WalkResult countermodelWalk(const Proof& p, const Assignment& rho0, unsigned bound,
                            TableMap& tables, unsigned maxSteps) {
  std::vector<Formula> all;
  for (const auto& n : p.nodes) {
    all.insert(all.end(), n.seq.ant.begin(), n.seq.ant.end());
    all.insert(all.end(), n.seq.suc.begin(), n.seq.suc.end());
  }
  ensureTables(tables, all, bound);

  const ProofNode& rootNode = p.nodes.at(p.root);
  std::vector<std::string> open;
  for (const auto& v : rootNode.seq.freeVars())
    if (!rho0.count(v)) open.push_back(v);
  std::optional<Assignment> start;
  bool inexact = false;
  forEachExtension(rho0, open, bound, [&](const Assignment& rho) {
    Truth t = falsity(rootNode.seq, rho, bound, tables);
    if (t.value && t.exact) {
      start = rho;
      return false;
    }
    if (t.value) inexact = true;
    return true;
  });
  if (!start) {
    if (inexact) throw Error(ErrorCode::BoundLimited, "root is only falsified inexactly");
    throw Error(ErrorCode::RootNotFalse, "root sequent is true under every extension");
  }

  WalkResult result;
  std::map<std::string, std::size_t> visited;
  std::size_t v = p.root;
  Assignment rho = restrictTo(*start, rootNode.seq.freeVars());
  std::vector<StageEntry> stages = stagesOf(rootNode.seq, rho, bound, tables);

  for (unsigned step = 0;; ++step) {
    const ProofNode& n = p.nodes[v];
    std::string key = stateKey(v, rho, stages);
    auto [it, fresh] = visited.emplace(key, result.steps.size());
    result.steps.push_back({v, rho, stages});
    if (!fresh) {
      result.verdict = WalkVerdict::LoopDetected;
      result.loopStart = it->second;
      return result;
    }
    if (n.rule.tag == RuleTag::Open) {
      result.verdict = WalkVerdict::ReachedOpenLeaf;
      return result;
    }
    if (isAxiom(n.rule.tag) || n.premisses.empty()) {
      result.verdict = WalkVerdict::StuckAtAxiom;
      return result;
    }
    if (step >= maxSteps) {
      result.verdict = WalkVerdict::StepLimit;
      return result;
    }

    std::vector<Sequent> prem;
    for (std::size_t c : n.premisses) prem.push_back(p.nodes[c].seq);

    struct Candidate {
      std::size_t child;
      Assignment rho;
      std::vector<StageEntry> stages;
      bool monotone;
      long long weight;
    };
    std::optional<Candidate> best;
    bool sawInexact = false;
    auto consider = [&](std::size_t i, const Assignment& r) {
      const Sequent& s = prem[i];
      Truth t = falsity(s, r, bound, tables);
      if (!t.value) return;
      if (!t.exact) {
        sawInexact = true;
        return;
      }
      Candidate c{n.premisses[i], r, stagesOf(s, r, bound, tables), true, 0};
      for (const auto& e : stepTraceEdges(n.seq, n.rule, prem, i)) {
        int before = stageFor(stages, e.from), after = stageFor(c.stages, e.to);
        if (before < 0 || after < 0) continue;
        if (after > before || (e.progress && n.rule.tag == RuleTag::Idl && after >= before))
          c.monotone = false;
      }
      for (const auto& e : c.stages) c.weight += e.stage;
      bool better = !best || (c.monotone && !best->monotone) ||
                    (c.monotone == best->monotone && c.weight < best->weight);
      if (better) best = std::move(c);
    };

    for (std::size_t i = 0; i < prem.size(); ++i) {
      const Sequent& s = prem[i];
      if (n.rule.tag == RuleTag::Subst) {
        Assignment r;
        for (const auto& z : s.freeVars())
          r[z] = evalTerm(rho, applySubst(n.rule.theta, Term::var(z)));
        consider(i, r);
        continue;
      }
      std::vector<std::string> fresh;
      Assignment base;
      for (const auto& z : s.freeVars()) {
        auto f = rho.find(z);
        if (f != rho.end()) base[z] = f->second;
        else fresh.push_back(z);
      }
      forEachExtension(base, fresh, bound, [&](const Assignment& r) {
        consider(i, r);
        return true;
      });
    }
    if (!best) {
      if (sawInexact) throw Error(ErrorCode::BoundLimited, "premiss only falsified inexactly");
      result.verdict = WalkVerdict::NoFalsePremiss;
      return result;
    }
    v = best->child;
    rho = std::move(best->rho);
    stages = std::move(best->stages);
  }
}

}  // namespace cidk

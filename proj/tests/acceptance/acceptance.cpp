// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "oracles.hpp"
#include "semantics.hpp"
#include "smallproofs.hpp"
#include "trace.hpp"
#include "translate.hpp"

using namespace cidk;

namespace {

const std::string kCorpus = CIDK_CORPUS_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Proof load(const std::string& name) { return loadProof(kCorpus + "/" + name + ".proof"); }

std::vector<std::uint64_t> stageSet(const ApproximantTable& t, unsigned k) {
  std::vector<std::uint64_t> out;
  for (unsigned i = 0; i <= t.bound; ++i)
    if (t.stages[k][i]) out.push_back(i);
  return out;
}

const ApproximantTable& table(TableMap& tables, const IndPredPtr& p, unsigned bound) {
  ensureTables(tables, p, bound);
  return tables.at(p->key());
}

std::string fmt(const std::vector<std::uint64_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

bool progressingEntry(const corpus::Entry& e) {
  return e.checks && e.progressing && e.proof.mode == Mode::Cyclic;
}

//------------------------------------------------------------------------------

Outcome corpusCheck() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  for (const char* name : {"m_sub_n", "functoriality_cyclic", "derive_idl_e", "ind_from_n"}) {
    Proof p = load(name);
    auto ds = checkProof(p);
    o.require(ds.empty(), std::string(name) + ": " + (ds.empty() ? "" : formatDiagnostic(ds[0])));
    if (p.mode == Mode::Cyclic) o.require(checkProgress(p).progressing, std::string(name) + " does not progress");
  }
  double s = secondsSince(t0);
  o.require(s < 5.0, "took " + std::to_string(s) + " s");
  if (o.ok) o.detail = "4 proofs in " + std::to_string(s) + " s";
  return o;
}

Outcome approximantTables() {
  Outcome o;
  const unsigned b = 10;
  TableMap tables;
  const auto& e = table(tables, evenPred(), b);
  const auto& n = table(tables, natPred(), b);
  const auto& od = table(tables, oddPred(), b);
  const auto& m = table(tables, mPred(), b);

  o.require(stageSet(e, 0).empty() && stageSet(n, 0).empty(), "stage 0 not empty");
  // e: {0}, {0,2}, {0,2,4}, ...; n: {0}, {0,1}, ...
  for (unsigned k = 1; k <= 6; ++k) {
    std::vector<std::uint64_t> want;
    for (unsigned i = 0; i < k; ++i) want.push_back(2 * i);
    o.require(stageSet(e, k) == want, "e stage " + std::to_string(k) + " is " + fmt(stageSet(e, k)));
  }
  o.require(e.closureStage() == 6, "e closes at " + std::to_string(e.closureStage()));
  for (unsigned k = 1; k <= 11; ++k) {
    std::vector<std::uint64_t> want;
    for (unsigned i = 0; i < k; ++i) want.push_back(i);
    o.require(stageSet(n, k) == want, "n stage " + std::to_string(k) + " is " + fmt(stageSet(n, k)));
  }
  auto op = closureProfile(od);
  o.require(op.size() >= 2 && op[0].entered == std::vector<std::uint64_t>{1} &&
                op[1].entered == std::vector<std::uint64_t>{3},
            "o profile does not start {1}, {3}");

  // m: every even number, then 1, then the remaining odd numbers
  std::vector<std::uint64_t> order;
  for (const auto& entry : closureProfile(m))
    for (auto v : entry.entered) order.push_back(v);
  std::vector<std::uint64_t> want{0, 2, 4, 6, 8, 10, 1, 3, 5, 7, 9};
  o.require(order == want, "m entry order " + fmt(order));
  int oneAt = m.entryStage[1];
  for (unsigned v = 0; v <= b; v += 2) o.require(m.entryStage[v] < oneAt, "an even enters after 1");
  for (unsigned v = 3; v <= b; v += 2) o.require(m.entryStage[v] > oneAt, "an odd enters before 1");
  if (o.ok) o.detail = "e, n, o, m at B=10";
  return o;
}

Outcome translation() {
  Outcome o;
  Proof p = load("finitary_ind");
  std::size_t xind = 0, indPA = 0;
  for (const auto& n : p.nodes) {
    xind += n.rule.tag == RuleTag::Xind;
    indPA += n.rule.tag == RuleTag::IndPA;
  }
  o.require(xind == 1 && indPA == 1, "input does not have one xind and one indPA step");
  auto t0 = std::chrono::steady_clock::now();
  Proof q = idToCid(p);
  auto ds = checkProof(q);
  bool progressing = checkProgress(q).progressing;
  double s = secondsSince(t0);
  o.require(q.mode == Mode::Cyclic, "output is not cyclic");
  o.require(q.nodes[q.root].seq == p.nodes[p.root].seq, "root sequent changed");
  o.require(ds.empty(), ds.empty() ? "" : formatDiagnostic(ds[0]));
  o.require(progressing, "output does not progress");
  o.require(s < 5.0, "took " + std::to_string(s) + " s");
  if (o.ok)
    o.detail = std::to_string(p.nodes.size()) + " -> " + std::to_string(q.nodes.size()) +
               " nodes in " + std::to_string(s) + " s";
  return o;
}

Outcome progressOracle() {
  Outcome o;
  std::size_t disagreements = 0, progressing = 0;
  std::size_t n = smallproofs::enumerate(smallproofs::defaultOptions(), [&](const Proof& p) {
    o.require(checkProof(p).empty(), "generator produced a proof that does not check");
    bool a = checkProgress(p).progressing;
    bool b = oracle::closedWalkProgress(p, 12).progressing;
    progressing += a;
    if (a != b) {
      ++disagreements;
      o.require(false, "disagreement on\n" + serializeProof(p));
    }
  });
  o.require(n > 0, "no proofs generated");
  if (o.ok)
    o.detail = std::to_string(n) + " proofs, " + std::to_string(progressing) +
               " progressing, 0 disagreements";
  return o;
}

Outcome traceMaximality() {
  Outcome o;
  std::size_t witnesses = 0;
  for (const auto& e : corpus::all()) {
    if (!progressingEntry(e)) continue;
    for (const auto& w : checkProgress(e.proof).witnesses) {
      ++witnesses;
      try {
        TraceAnalysis a = analyzeTrace(e.proof, w);
        o.require(a.maximal, e.name + ": not maximal");
        // no predicate on the cycle lies above the unfolded one
        for (const auto& f : w.formulas)
          for (const auto& q : indPredClosure({f}))
            o.require(predOrder(a.pred, q) != PredOrder::Below,
                      e.name + ": " + q->displayName() + " lies above " + a.pred->displayName());
      } catch (const Error& err) {
        o.require(false, e.name + ": " + err.what());
      }
    }
  }
  if (o.ok) o.detail = std::to_string(witnesses) + " witness loops";
  return o;
}

Outcome soundness() {
  Outcome o;
  std::size_t checked = 0, skipped = 0;
  for (const auto& e : corpus::all()) {
    if (!e.checks || !e.progressing) continue;
    const Sequent& root = e.proof.nodes[e.proof.root].seq;
    std::vector<Formula> fs(root.ant.begin(), root.ant.end());
    fs.insert(fs.end(), root.suc.begin(), root.suc.end());
    for (unsigned b : {4u, 8u, 10u}) {
      TableMap tables;
      ensureTables(tables, fs, b);
      SequentTruth t = sequentTruth(root, b, tables);
      if (!t.exact) {
        ++skipped;
        continue;
      }
      ++checked;
      o.require(t.value, e.name + " root false at B=" + std::to_string(b));
    }
  }
  o.require(checked > 0, "no bound-exact roots");
  if (o.ok)
    o.detail = std::to_string(checked) + " exact roots true, " + std::to_string(skipped) +
               " bound-limited skipped";
  return o;
}

Outcome countermodels() {
  Outcome o;
  Proof p = load("e_one_preproof");
  TableMap tables;
  WalkResult w = countermodelWalk(p, {}, 4, tables, 200);
  o.require(w.verdict == WalkVerdict::LoopDetected, std::string("verdict ") + toString(w.verdict));
  // along every trace of the walked branch, stages never drop
  std::size_t decreases = 0, links = 0;
  for (std::size_t i = 0; i + 1 < w.steps.size(); ++i) {
    const ProofNode& n = p.nodes[w.steps[i].node];
    std::vector<Sequent> prem;
    for (std::size_t c : n.premisses) prem.push_back(p.nodes[c].seq);
    auto stageOf = [](const WalkStep& s, const Formula& f) {
      for (const auto& e : s.stages)
        if (e.formula == f) return e.stage;
      return -1;
    };
    for (std::size_t k = 0; k < n.premisses.size(); ++k) {
      if (n.premisses[k] != w.steps[i + 1].node) continue;
      for (const auto& e : stepTraceEdges(n.seq, n.rule, prem, k)) {
        int a = stageOf(w.steps[i], e.from), b = stageOf(w.steps[i + 1], e.to);
        if (a < 0 || b < 0) continue;
        ++links;
        o.require(b <= a, "stage increases along a trace");
        decreases += b < a;
      }
    }
  }
  o.require(decreases == 0, "a trace strictly decreases on the walked branch");

  std::size_t sound = 0;
  for (const auto& e : corpus::all()) {
    if (!progressingEntry(e)) continue;
    try {
      TableMap t;
      countermodelWalk(e.proof, {}, 4, t, 200);
      o.require(false, e.name + ": walk started on a true root");
    } catch (const Error& err) {
      o.require(err.code() == ErrorCode::RootNotFalse, e.name + ": " + err.what());
      ++sound;
    }
  }
  if (o.ok)
    o.detail = "LoopDetected after " + std::to_string(w.steps.size()) + " steps, " +
               std::to_string(links) + " staged trace links, none decreasing; RootNotFalse on " +
               std::to_string(sound) + " proofs";
  return o;
}

Outcome fixpointLawsCheck() {
  Outcome o;
  for (const auto& [name, p] : standardEnv()) {
    TableMap tables;
    ensureTables(tables, p, 8);
    FixpointReport r = fixpointLaws(p, 8, tables);
    o.require(r.ok, name + " at B=8: " + (r.violations.empty() ? "" : r.violations[0]));
  }
  for (const IndPredPtr& p : {evenPred(), oddPred()})
    for (unsigned b : {10u, 12u}) {
      TableMap tables;
      ensureTables(tables, p, b);
      FixpointReport r = fixpointLaws(p, b, tables);
      o.require(r.ok && r.exhaustivePreFixed, p->displayName() + " exhaustive at B=" + std::to_string(b));
    }
  Formula chi = parseFormula("and(not =(x, 1), all y. or(not =(s(x), y), X(y)))");
  Formula g = gfpDual(chi, "X", "x", "G");
  TableMap tables;
  ensureTables(tables, std::vector<Formula>{g}, 2);
  std::vector<std::uint64_t> members;
  for (std::uint64_t x = 0; x <= 2; ++x)
    if (evalFormula({{"x", x}}, g, 2, tables).value) members.push_back(x);
  auto brute = oracle::bruteGfp(chi, "X", "x", 2);
  o.require(members == brute, "gfp " + fmt(members) + " vs brute force " + fmt(brute));
  o.require(members == std::vector<std::uint64_t>{2}, "gfp membership " + fmt(members));
  if (o.ok) o.detail = "N, E, O, M at B=8; E, O exhaustive to B=12; gfp = {2}";
  return o;
}

Outcome roundTrips() {
  Outcome o;
  std::size_t files = 0;
  for (const auto& e : corpus::all()) {
    std::string text = slurp(kCorpus + "/" + e.name + ".proof");
    o.require(!text.empty(), e.name + " missing on disk");
    o.require(serializeProof(parseProof(text)) == text, e.name + " does not round-trip");
    ++files;
  }
  Proof m = load("m_sub_n");
  TreeNode t = eliminateSubstPrefix(m, 8);
  std::size_t substs = 0;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    substs += n.rule.tag == RuleTag::Subst;
    for (const auto& c : n.children) walk(c);
  };
  walk(t);
  o.require(substs == 0, std::to_string(substs) + " subst nodes remain");
  Proof q = treeToProof(t, Mode::Cyclic, m.preds);
  auto ds = checkProof(q, true);
  o.require(ds.empty(), ds.empty() ? "" : formatDiagnostic(ds[0]));
  o.require(q.nodes[q.root].seq == m.nodes[m.root].seq, "root sequent changed");
  if (o.ok)
    o.detail = std::to_string(files) + " files; subst-free unrolling of " +
               std::to_string(q.nodes.size()) + " nodes";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"corpus proofs check", corpusCheck},
      {"approximant tables", approximantTables},
      {"translation end to end", translation},
      {"progress checker vs oracle", progressOracle},
      {"maximal predicate on traces", traceMaximality},
      {"bounded soundness", soundness},
      {"countermodel walks", countermodels},
      {"fixpoint laws", fixpointLawsCheck},
      {"round trips", roundTrips},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}

#include "doctest.h"

#include "corpus.hpp"
#include "semantics.hpp"
#include "trace.hpp"
#include "translate.hpp"

using namespace cidk;

namespace {

Formula F(const char* text) { return parseFormula(text, standardEnv()); }

const PredSymbol kE = PredSymbol::ind(evenPred());
const PredSymbol kN = PredSymbol::ind(natPred());

const Sequent& leaf(const Fragment& f, const std::string& label) {
  return f.proof.nodes.at(f.proof.find(label)).seq;
}

std::size_t countTag(const Proof& p, RuleTag tag) {
  std::size_t n = 0;
  for (const auto& node : p.nodes) n += node.rule.tag == tag;
  return n;
}

void requireSoundCyclic(const Proof& p) {
  CHECK(p.mode == Mode::Cyclic);
  CHECK(checkProof(p).empty());
  CHECK(checkProgress(p).progressing);
  CHECK(countTag(p, RuleTag::Xind) == 0);
  CHECK(countTag(p, RuleTag::IndPA) == 0);
}

}  // namespace

TEST_CASE("functoriality from a hypothesis on set variables") {
  PredSymbol y = PredSymbol::setVar("Y"), z = PredSymbol::setVar("Z");
  Formula phi = parseFormula("or(Y(x), ex v. and(Y(v), all u. or(Y(u), =(x, v))))");
  for (bool cyclic : {false, true}) {
    CAPTURE(cyclic);
    Fragment f = cyclic ? functorialityCyclic(phi, y, z) : functorialityFinite(phi, y, z);
    REQUIRE(f.openLeaves == std::vector<std::string>{"hyp"});
    const Sequent& h = leaf(f, "hyp");
    REQUIRE(h.ant.size() == 1);
    REQUIRE(h.suc.size() == 1);
    Term w = h.ant.begin()->term(0);
    CHECK(*h.ant.begin() == Formula::atom(y, w));
    CHECK(*h.suc.begin() == Formula::atom(z, w));
    const Sequent& root = f.proof.nodes[f.proof.root].seq;
    CHECK(root.ant == std::set<Formula>{phi});
    CHECK(root.suc == std::set<Formula>{replacePred(phi, y, z)});
    CHECK(checkProof(f.proof, true).empty());
  }
}

TEST_CASE("functoriality rejects negative occurrences") {
  Formula phi = parseFormula("or(Y(x), not Y(s(x)))");
  try {
    functorialityFinite(phi, PredSymbol::setVar("Y"), PredSymbol::setVar("Z"));
    FAIL("accepted a negative occurrence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositive);
  }
}

TEST_CASE("functoriality through an inductive predicate") {
  Formula phi = Formula::atom(PredSymbol::ind(corpus::pE()), Term::var("x"));
  Fragment fin = functorialityFinite(phi, kE, kN);
  CHECK(countTag(fin.proof, RuleTag::Xind) >= 1);
  CHECK(countTag(fin.proof, RuleTag::Idl) == 0);
  CHECK_FALSE(fin.proof.hasCycle());
  CHECK(checkProof(fin.proof, true).empty());

  Fragment cyc = functorialityCyclic(phi, kE, kN);
  CHECK(countTag(cyc.proof, RuleTag::Xind) == 0);
  CHECK(cyc.proof.hasCycle());
  CHECK(checkProof(cyc.proof, true).empty());

  Proof closed = corpus::functorialityCyclicPE();
  CHECK(checkProof(closed).empty());
  auto v = checkProgress(closed);
  CHECK(v.progressing);
  // the loops unfold P_E or E; both lie below nothing else on their traces
  for (const auto& w : v.witnesses) CHECK(analyzeTrace(closed, w).maximal);
  CHECK(checkProof(corpus::functorialityFinitePE()).empty());
}

TEST_CASE("unfolding on the left from induction") {
  for (const char* name : {"N", "E", "O", "M"}) {
    CAPTURE(name);
    IndPredPtr p = standardEnv().at(name);
    Term t = parseTerm("s(z)");
    std::set<Formula> gamma{F("N(y)")}, delta{F("O(y)")};
    Fragment f = deriveIdl(p, gamma, delta, t);
    const Sequent& root = f.proof.nodes[f.proof.root].seq;
    std::set<Formula> ant = gamma;
    ant.insert(Formula::atom(PredSymbol::ind(p), t));
    CHECK(root.ant == ant);
    CHECK(root.suc == delta);
    REQUIRE(f.openLeaves == std::vector<std::string>{"hyp"});
    std::set<Formula> hypAnt = gamma;
    hypAnt.insert(unfold(p, t));
    CHECK(leaf(f, "hyp").ant == hypAnt);
    CHECK(leaf(f, "hyp").suc == delta);
    CHECK(f.proof.mode == Mode::Finitary);
    CHECK(checkProof(f.proof, true).empty());
    CHECK(countTag(f.proof, RuleTag::Idl) == 0);
  }
  CHECK(checkProof(corpus::deriveIdlClosed("E")).empty());
}

TEST_CASE("induction over N from the N axiom") {
  Formula inv = F("or(E(y), O(y))");
  Fragment f = deriveIndFromN(inv, "y", parseTerm("s(a)"));
  const Sequent& root = f.proof.nodes[f.proof.root].seq;
  CHECK(root.ant.empty());
  CHECK(root.suc == std::set<Formula>{F("or(E(s(a)), O(s(a)))")});
  REQUIRE(f.openLeaves.size() == 2);
  CHECK(leaf(f, "base").suc == std::set<Formula>{F("or(E(0), O(0))")});
  const Sequent& step = leaf(f, "step");
  REQUIRE(step.ant.size() == 1);
  Formula hyp = *step.ant.begin();
  REQUIRE(hyp.kind() == FormulaKind::Or);
  Term y = hyp.child(0).term(0);
  CHECK(step.suc == std::set<Formula>{instantiate(inv, "y", Term::succ(y))});
  CHECK(f.proof.mode == Mode::Cyclic);
  CHECK(checkProof(f.proof, true).empty());
  CHECK(countTag(f.proof, RuleTag::NAxiom) == 1);

  Proof closed = corpus::indFromNClosed();
  CHECK(checkProof(closed).empty());
  CHECK(checkProgress(closed).progressing);
}

TEST_CASE("the induction variable may clash with the context") {
  Formula inv = F("=(y, y)");
  Fragment f = deriveIndFromN(inv, "y", Term::var("y"), {F("E(y)")}, {});
  CHECK(checkProof(f.proof, true).empty());
  const Sequent& root = f.proof.nodes[f.proof.root].seq;
  CHECK(root.suc.count(F("=(y, y)")));
}

TEST_CASE("translating finitary proofs") {
  for (const auto& e : corpus::all()) {
    if (e.proof.mode != Mode::Finitary || !e.checks) continue;
    CAPTURE(e.name);
    Proof q = idToCid(e.proof);
    CHECK(q.nodes[q.root].seq == e.proof.nodes[e.proof.root].seq);
    requireSoundCyclic(q);
  }
}

TEST_CASE("translation is deterministic and idempotent on its output") {
  Proof a = idToCid(corpus::finitaryInd());
  Proof b = idToCid(corpus::finitaryInd());
  CHECK(serializeProof(a) == serializeProof(b));
  CHECK(countTag(a, RuleTag::NAxiom) >= 1);
  CHECK_THROWS_AS(idToCid(a), Error);
}

TEST_CASE("translation rejects proofs that do not check") {
  Proof p = corpus::finitaryInd();
  p.nodes[p.find("q2")].rule.tag = RuleTag::Id;
  try {
    idToCid(p);
    FAIL("translated a broken proof");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("translated roots stay valid") {
  Proof q = idToCid(corpus::finitaryInd());
  TableMap tables;
  const Sequent& root = q.nodes[q.root].seq;
  std::vector<Formula> fs(root.ant.begin(), root.ant.end());
  fs.insert(fs.end(), root.suc.begin(), root.suc.end());
  ensureTables(tables, fs, 8);
  CHECK(sequentTruth(root, 8, tables).value);
}

TEST_CASE("grafting") {
  Fragment f = deriveIdl(natPred(), {}, {F("N(x)")}, Term::var("x"));
  const Sequent& h = leaf(f, "hyp");
  Proof idProof;
  idProof.mode = Mode::Finitary;
  ProofNode n;
  n.label = "c";
  n.seq = Sequent{{F("N(x)")}, {F("N(x)")}};
  n.rule.tag = RuleTag::Id;
  idProof.nodes.push_back(n);
  // N(x) => N(x) is not inside the hypothesis sequent
  CHECK_THROWS_AS(graft(f.proof, "hyp", idProof), Error);
  CHECK_THROWS_AS(graft(f.proof, "nothere", idProof), Error);

  Proof weak = idProof;
  weak.nodes[0].seq = Sequent{{}, {F("N(x)")}};
  weak.nodes[0].rule.tag = RuleTag::Open;
  Proof g = graft(f.proof, "hyp", weak);
  CHECK(g.nodes.size() == f.proof.nodes.size() + 1);
  CHECK(h.suc.count(F("N(x)")));
  CHECK(checkProof(g, true).empty());
}

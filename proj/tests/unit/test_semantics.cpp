#include "doctest.h"

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "semantics.hpp"

using namespace cidk;

namespace {

Formula F(const char* text) { return parseFormula(text, standardEnv()); }

Truth eval(const char* text, const Assignment& rho, unsigned bound) {
  Formula f = F(text);
  TableMap tables;
  ensureTables(tables, std::vector<Formula>{f}, bound);
  return evalFormula(rho, f, bound, tables);
}

/// Random formulas over x and y with the standard predicates.
class FormulaGen {
 public:
  explicit FormulaGen(unsigned seed) : rng_(seed) {}

  Formula formula(unsigned depth, std::vector<std::string> vars) {
    unsigned pick = pickBelow(depth == 0 ? 3 : 7);
    switch (pick) {
      case 0: {
        static const char* preds[] = {"N", "E", "O", "M"};
        IndPredPtr p = standardEnv().at(preds[pickBelow(4)]);
        return Formula::atom(PredSymbol::ind(p), term(vars), pickBelow(3) == 0);
      }
      case 1: return Formula::eq(term(vars), term(vars), pickBelow(3) == 0);
      case 2: return Formula::lt(term(vars), term(vars), pickBelow(3) == 0);
      case 3: return Formula::disj(formula(depth - 1, vars), formula(depth - 1, vars));
      case 4: return Formula::conj(formula(depth - 1, vars), formula(depth - 1, vars));
      default: {
        std::string v = "q" + std::to_string(vars.size());
        vars.push_back(v);
        Formula body = formula(depth - 1, vars);
        return pick == 5 ? Formula::exists(v, body) : Formula::forall(v, body);
      }
    }
  }

 private:
  std::mt19937 rng_;

  unsigned pickBelow(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng_); }

  Term term(const std::vector<std::string>& vars) {
    Term v = Term::var(vars[pickBelow(static_cast<unsigned>(vars.size()))]);
    switch (pickBelow(5)) {
      case 0: return Term::zero();
      case 1: return Term::succ(v);
      case 2: return Term::plus(v, Term::var(vars[0]));
      default: return v;
    }
  }
};

std::vector<std::uint64_t> stageSet(const ApproximantTable& t, unsigned k) {
  std::vector<std::uint64_t> out;
  for (unsigned i = 0; i <= t.bound; ++i)
    if (t.stages[k][i]) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("terms") {
  CHECK(evalTerm({{"x", 3}}, parseTerm("+(s(x), *(x, 2))")) == 10);
  try {
    evalTerm({}, parseTerm("s(y)"));
    FAIL("evaluated an unassigned variable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnassignedVariable);
  }
}

TEST_CASE("least fixed points agree with plain iteration") {
  for (unsigned b : {0u, 1u, 5u, 10u, 17u})
    for (const auto& [name, p] : standardEnv()) {
      CAPTURE(name);
      CAPTURE(b);
      TableMap tables;
      ensureTables(tables, p, b);
      const auto& t = tables.at(p->key());
      auto naive = oracle::naiveLfp(p, b);
      for (unsigned i = 0; i <= b; ++i) CHECK(t.member(i) == naive[i]);
      CHECK(t.stages.front() == std::vector<bool>(b + 1, false));
      for (std::size_t k = 0; k + 1 < t.stages.size(); ++k)
        for (unsigned i = 0; i <= b; ++i) CHECK((!t.stages[k][i] || t.stages[k + 1][i]));
    }
}

TEST_CASE("approximant stages of the even numbers") {
  TableMap tables;
  ensureTables(tables, evenPred(), 10);
  const auto& t = tables.at(evenPred()->key());
  CHECK(stageSet(t, 1) == std::vector<std::uint64_t>{0});
  CHECK(stageSet(t, 2) == std::vector<std::uint64_t>{0, 2});
  CHECK(t.closureStage() == 6);
  CHECK(t.fixpoint() == std::vector<std::uint64_t>{0, 2, 4, 6, 8, 10});
  auto prof = closureProfile(t);
  REQUIRE(prof.size() == 6);
  CHECK(prof[0].stage == 1);
  CHECK(prof[5].entered == std::vector<std::uint64_t>{10});
}

TEST_CASE("evaluation agrees with the reference evaluator") {
  FormulaGen gen(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(3, {"x", "y"});
    CAPTURE(printFormula(f));
    for (unsigned b : {3u, 6u}) {
      TableMap tables;
      ensureTables(tables, std::vector<Formula>{f}, b);
      for (std::uint64_t x = 0; x <= b; x += 2)
        for (std::uint64_t y = 0; y <= b; y += 3) {
          Assignment rho{{"x", x}, {"y", y}};
          Truth t = evalFormula(rho, f, b, tables);
          CHECK(t.value == oracle::naiveEval(f, rho, b));
          // an exact verdict survives a larger universe
          if (t.exact) CHECK(t.value == oracle::naiveEval(f, rho, 3 * b + 4));
        }
    }
  }
}

TEST_CASE("exactness of quantifiers and out-of-range arguments") {
  Truth t = eval("ex y. =(y, 11)", {}, 10);
  CHECK_FALSE(t.value);
  CHECK_FALSE(t.exact);
  t = eval("ex y. =(y, 7)", {}, 10);
  CHECK(t.value);
  CHECK(t.exact);
  t = eval("ex y. and(<(y, x), E(y))", {{"x", 5}}, 10);
  CHECK(t.value);
  CHECK(t.exact);
  t = eval("all y. or(not <(y, x), N(y))", {{"x", 4}}, 10);
  CHECK(t.value);
  CHECK(t.exact);
  t = eval("all y. N(y)", {}, 10);
  CHECK(t.value);
  CHECK_FALSE(t.exact);
  t = eval("E(12)", {}, 10);
  CHECK_FALSE(t.exact);
  t = eval("=(+(x, x), 30)", {{"x", 15}}, 10);
  CHECK(t.value);
  CHECK(t.exact);
}

TEST_CASE("reading a predicate at a stage") {
  Formula f = F("E(x)");
  TableMap tables;
  ensureTables(tables, evenPred(), 10);
  CHECK_FALSE(evalFormulaAtStage({{"x", 4}}, f, 10, tables, evenPred(), 2).value);
  CHECK(evalFormulaAtStage({{"x", 4}}, f, 10, tables, evenPred(), 3).value);
  auto st = formulaStage(f, {{"x", 4}}, 10, tables);
  REQUIRE(st);
  CHECK(st->stage == 3);
  auto none = formulaStage(f, {{"x", 3}}, 10, tables);
  REQUIRE(none);
  CHECK(none->stage == -1);
  CHECK_FALSE(formulaStage(F("=(x, 3)"), {{"x", 3}}, 10, tables).has_value());
}

TEST_CASE("fixpoint laws for the standard predicates") {
  for (const auto& [name, p] : standardEnv()) {
    CAPTURE(name);
    TableMap tables;
    ensureTables(tables, p, 6);
    FixpointReport r = fixpointLaws(p, 6, tables);
    CHECK(r.ok);
    CHECK(r.exhaustivePreFixed);
    CHECK(r.exhaustiveMonotone);
    CHECK(r.violations.empty());
  }
}

TEST_CASE("a greatest fixed point through its dual") {
  Formula chi = parseFormula("and(not =(x, 1), all y. or(not =(s(x), y), X(y)))");
  Formula g = gfpDual(chi, "X", "x", "G");
  TableMap tables;
  ensureTables(tables, std::vector<Formula>{g}, 2);
  std::vector<std::uint64_t> members;
  for (std::uint64_t x = 0; x <= 2; ++x)
    if (evalFormula({{"x", x}}, g, 2, tables).value) members.push_back(x);
  CHECK(members == oracle::bruteGfp(chi, "X", "x", 2));
  CHECK(members == std::vector<std::uint64_t>{2});
}

TEST_CASE("Cantor pairing and its defining formula") {
  for (std::uint64_t z = 0; z < 60; ++z) {
    auto [a, b] = cantorUnpair(z);
    CHECK(cantorPair(a, b) == z);
  }
  Formula g = pairingGraph(Term::var("x"), Term::var("a"), Term::var("b"));
  for (std::uint64_t a = 0; a < 5; ++a)
    for (std::uint64_t b = 0; b < 5; ++b)
      for (std::uint64_t x = 0; x < 50; ++x)
        CHECK(oracle::naiveEval(g, {{"x", x}, {"a", a}, {"b", b}}, 50) == (x == cantorPair(a, b)));
}

TEST_CASE("sequent truth over all assignments") {
  TableMap tables;
  Sequent good{{F("E(x)")}, {F("N(x)")}};
  Sequent bad{{F("N(x)")}, {F("E(x)")}};
  ensureTables(tables, std::vector<Formula>{F("E(x)"), F("N(x)")}, 8);
  CHECK(sequentTruth(good, 8, tables).value);
  auto r = sequentTruth(bad, 8, tables);
  CHECK_FALSE(r.value);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->at("x") % 2 == 1);
  CHECK_FALSE(sequentValue(bad, {{"x", 3}}, 8, tables).value);
  CHECK(sequentValue(bad, {{"x", 4}}, 8, tables).value);
}

TEST_CASE("countermodel walks") {
  TableMap tables;
  WalkResult w = countermodelWalk(corpus::eOnePreproof(), {}, 4, tables, 50);
  CHECK(w.verdict == WalkVerdict::LoopDetected);
  REQUIRE(w.steps.size() >= 2);
  CHECK(w.loopStart < w.steps.size());

  try {
    countermodelWalk(corpus::mSubN(), {}, 4, tables, 50);
    FAIL("walked a sound proof");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RootNotFalse);
  }
}

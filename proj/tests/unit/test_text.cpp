#include "doctest.h"

#include "prelude.hpp"
#include "text.hpp"

using namespace cidk;

TEST_CASE("terms print as they parse") {
  for (const char* t : {"0", "x", "s(s(x))", "+(x, *(y, z))"})
    CHECK(printTerm(parseTerm(t)) == t);
  // closed successor chains print as numerals
  CHECK(printTerm(parseTerm("s(s(0))")) == "2");
  CHECK(parseTerm("2") == Term::numeral(2));
}

TEST_CASE("formulas round-trip through the printer") {
  PredNames names;
  for (const auto& [n, p] : standardEnv()) names[p->key()] = n;
  for (const char* t : {"=(x, 0)", "not <(x, s(y))", "or(N(x), and(E(x), not O(x)))",
                        "all y. ex z. and(M(y), =(y, s(z)))"}) {
    Formula f = parseFormula(t, standardEnv());
    CHECK(printFormula(f, names) == t);
    CHECK(parseFormula(printFormula(f, names), standardEnv()) == f);
  }
}

TEST_CASE("unnamed predicates print inline") {
  Formula f = parseFormula("N(x)", standardEnv());
  std::string s = printFormula(f);
  CHECK(s.rfind("ind", 0) == 0);
  CHECK(parseFormula(s) == f);
}

TEST_CASE("inline declarations extend the environment") {
  PredEnv env;
  Formula f = parseFormula("ind[P](X, x, or(=(x, 0), X(s(x))))(y)", env);
  REQUIRE(env.count("P"));
  CHECK(parseFormula("P(y)", env) == f);
}

TEST_CASE("parse errors carry positions") {
  for (const char* bad : {"or(N(x)", "=(x)", "N(x, y)", "ex . N(x)", "N(x) junk"}) {
    try {
      parseFormula(bad, standardEnv());
      FAIL("parsed " << std::string(bad));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find(':') != std::string::npos);
    }
  }
}

TEST_CASE("identifiers") {
  CHECK(isIdentifier("x"));
  CHECK(isIdentifier("P_E"));
  CHECK(isIdentifier("w0"));
  CHECK_FALSE(isIdentifier("0w"));
  CHECK_FALSE(isIdentifier(""));
  CHECK_FALSE(isIdentifier("a-b"));
}

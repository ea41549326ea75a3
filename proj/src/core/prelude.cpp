#include "prelude.hpp"

namespace cidk {

namespace {

IndPredPtr define(const char* name, const char* body, const PredEnv& env = {}) {
  return mkIndPred(parseFormula(body, env), "X", "x", name);
}

}  // namespace

IndPredPtr natPred() {
  static const IndPredPtr p = define("N", "or(=(x, 0), ex y. and(X(y), =(x, s(y))))");
  return p;
}

IndPredPtr evenPred() {
  static const IndPredPtr p = define("E", "or(=(x, 0), ex y. and(X(y), =(x, s(s(y)))))");
  return p;
}

IndPredPtr oddPred() {
  static const IndPredPtr p = define("O", "or(=(x, 1), ex y. and(X(y), =(x, s(s(y)))))");
  return p;
}

IndPredPtr mPred() {
  static const IndPredPtr p =
      define("M",
             "or(or(=(x, 0), ex y. and(X(y), =(x, s(s(y))))),"
             "   and(all y. or(not E(y), X(y)), =(x, 1)))",
             PredEnv{{"E", evenPred()}});
  return p;
}

bool isNatPred(const IndPredPtr& p) { return p && p->key() == natPred()->key(); }

const PredEnv& standardEnv() {
  static const PredEnv env{
      {"N", natPred()}, {"E", evenPred()}, {"O", oddPred()}, {"M", mPred()}};
  return env;
}

Formula pairingGraph(const Term& x, const Term& a, const Term& b) {
  Term sum = Term::plus(a, b);
  return Formula::eq(Term::plus(x, x),
                     Term::plus(Term::times(sum, Term::succ(sum)), Term::plus(b, b)));
}

}  // namespace cidk

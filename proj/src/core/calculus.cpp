#include "calculus.hpp"

#include <algorithm>

#include "text.hpp"

namespace cidk {

const char* toString(Mode mode) { return mode == Mode::Finitary ? "finitary" : "cyclic"; }

std::set<std::string> Sequent::freeVars() const {
  std::set<std::string> out;
  for (const auto* side : {&ant, &suc})
    for (const auto& f : *side) out.insert(f.freeVars().begin(), f.freeVars().end());
  return out;
}

std::string Sequent::key() const {
  std::string k;
  for (const auto& f : ant) k += f.key() + ";";
  k += "=>";
  for (const auto& f : suc) k += f.key() + ";";
  return k;
}

Sequent applySubst(const Substitution& theta, const Sequent& s) {
  Sequent out;
  for (const auto& f : s.ant) out.ant.insert(applySubst(theta, f));
  for (const auto& f : s.suc) out.suc.insert(applySubst(theta, f));
  return out;
}

namespace {

struct TagName {
  RuleTag tag;
  const char* name;
  std::size_t arity;
};

constexpr TagName kTags[] = {
    {RuleTag::Id, "id", 0},        {RuleTag::Weaken, "weaken", 1}, {RuleTag::Subst, "subst", 1},
    {RuleTag::Cut, "cut", 2},      {RuleTag::OrL, "orL", 2},       {RuleTag::OrR, "orR", 1},
    {RuleTag::AndL, "andL", 1},    {RuleTag::AndR, "andR", 2},     {RuleTag::NegL, "negL", 1},
    {RuleTag::NegR, "negR", 1},    {RuleTag::AllL, "allL", 1},     {RuleTag::AllR, "allR", 1},
    {RuleTag::ExL, "exL", 1},      {RuleTag::ExR, "exR", 1},       {RuleTag::EqL, "eqL", 1},
    {RuleTag::EqR, "eqR", 0},      {RuleTag::QAxiom, "qAxiom", 0}, {RuleTag::IndPA, "indPA", 2},
    {RuleTag::Idl, "idl", 1},      {RuleTag::Idr, "idr", 1},       {RuleTag::Xind, "xind", 2},
    {RuleTag::NAxiom, "nAxiom", 0}, {RuleTag::Open, "open", 0},
};

}  // namespace

const char* toString(RuleTag tag) {
  for (const auto& t : kTags)
    if (t.tag == tag) return t.name;
  return "?";
}

std::optional<RuleTag> ruleTagFromString(const std::string& s) {
  for (const auto& t : kTags)
    if (s == t.name) return t.tag;
  return std::nullopt;
}

std::size_t arity(RuleTag tag) {
  for (const auto& t : kTags)
    if (t.tag == tag) return t.arity;
  return 0;
}

const char* toString(RuleError::Kind kind) {
  switch (kind) {
    case RuleError::Kind::WrongArity: return "WrongArity";
    case RuleError::Kind::SchemaMismatch: return "SchemaMismatch";
    case RuleError::Kind::EigenvariableNotFresh: return "EigenvariableNotFresh";
    case RuleError::Kind::ModeForbidsRule: return "ModeForbidsRule";
  }
  return "?";
}

const std::vector<Formula>& qAxioms() {
  static const std::vector<Formula> axioms = [] {
    const char* texts[] = {
        "all x. not =(s(x), 0)",
        "all x. all y. or(not =(s(x), s(y)), =(x, y))",
        "all x. or(=(x, 0), ex y. =(x, s(y)))",
        "all x. =(+(x, 0), x)",
        "all x. all y. =(+(x, s(y)), s(+(x, y)))",
        "all x. =(*(x, 0), 0)",
        "all x. all y. =(*(x, s(y)), +(*(x, y), x))",
        "all x. not <(x, 0)",
        "all x. all y. and(or(not <(x, s(y)), or(<(x, y), =(x, y))),"
        "                  or(and(not <(x, y), not =(x, y)), <(x, s(y))))",
    };
    std::vector<Formula> out;
    for (const char* t : texts) out.push_back(parseFormula(t));
    return out;
  }();
  return axioms;
}

//------------------------------------------------------------------------------
// Rule schemas

namespace {

std::string show(const Formula& f) {
  PredNames names;
  for (const auto& p : indPredClosure({f})) names[p->key()] = p->displayName();
  return printFormula(f, names);
}

/// One premiss: (C.ant \ S) + addAnt for some S within remAnt, same for suc.
struct Shape {
  std::set<Formula> addAnt, addSuc, remAnt, remSuc;
};

struct Schema {
  std::vector<Shape> premisses;
  std::optional<Formula> principal;
  Side principalSide = Side::Left;
  AncestorPair::Kind kind = AncestorPair::Kind::Principal;
  /// eqL: conclusion-form and premiss-form of the rewritten formula.
  std::optional<std::pair<Formula, Formula>> rewrite;
};

struct Reject {
  RuleError::Kind kind;
  std::string detail;
};

[[noreturn]] void reject(const std::string& detail,
                         RuleError::Kind kind = RuleError::Kind::SchemaMismatch) {
  throw Reject{kind, detail};
}

const Formula& needPrincipal(const RuleInstance& r) {
  if (!r.principal) reject(std::string("missing parameter f for ") + toString(r.tag));
  return *r.principal;
}

const Term& needTerm(const RuleInstance& r) {
  if (!r.term) reject(std::string("missing parameter t for ") + toString(r.tag));
  return *r.term;
}

const std::string& needEigen(const RuleInstance& r, const Sequent& c) {
  if (!r.eigen) reject(std::string("missing parameter y for ") + toString(r.tag));
  if (c.freeVars().count(*r.eigen))
    reject("eigenvariable " + *r.eigen + " is free in the conclusion",
           RuleError::Kind::EigenvariableNotFresh);
  return *r.eigen;
}

void requireIn(const std::set<Formula>& side, const Formula& f, const char* where) {
  if (!side.count(f)) reject("principal formula " + show(f) + " not in " + where);
}

void requireKind(const Formula& f, FormulaKind kind, const char* what) {
  if (f.kind() != kind) reject("principal formula " + show(f) + " is not " + what);
}

const IndPredPtr& requireIndAtom(const Formula& f) {
  if (f.kind() != FormulaKind::Atom || f.negated() || !f.pred().isInd())
    reject("principal formula " + show(f) + " is not an inductive atom");
  return f.pred().indPred();
}

Formula holeFill(const Formula& pattern, const Term& u, const Term& v) {
  return applySubst(Substitution{{kHoleU, u}, {kHoleV, v}}, pattern);
}

std::vector<Schema> schemasFor(const Sequent& c, const RuleInstance& r) {
  Schema s;
  auto principalLeft = [&](FormulaKind kind, const char* what) -> const Formula& {
    const Formula& f = needPrincipal(r);
    requireIn(c.ant, f, "the antecedent");
    requireKind(f, kind, what);
    s.principal = f;
    s.principalSide = Side::Left;
    return f;
  };
  auto principalRight = [&](FormulaKind kind, const char* what) -> const Formula& {
    const Formula& f = needPrincipal(r);
    requireIn(c.suc, f, "the succedent");
    requireKind(f, kind, what);
    s.principal = f;
    s.principalSide = Side::Right;
    return f;
  };

  switch (r.tag) {
    case RuleTag::Id: {
      if (r.principal) {
        requireIn(c.ant, *r.principal, "the antecedent");
        requireIn(c.suc, *r.principal, "the succedent");
      } else if (std::none_of(c.ant.begin(), c.ant.end(),
                              [&](const Formula& f) { return c.suc.count(f) > 0; })) {
        reject("no formula occurs on both sides");
      }
      break;
    }
    case RuleTag::EqR: {
      if (r.principal) {
        const Formula& f = principalRight(FormulaKind::Eq, "an equation");
        if (f.negated() || f.term(0) != f.term(1)) reject(show(f) + " is not of the form t=t");
      } else if (std::none_of(c.suc.begin(), c.suc.end(), [](const Formula& f) {
                   return f.kind() == FormulaKind::Eq && !f.negated() && f.term(0) == f.term(1);
                 })) {
        reject("no equation t=t in the succedent");
      }
      break;
    }
    case RuleTag::QAxiom: {
      if (!r.index) reject("missing parameter index for qAxiom");
      if (*r.index >= qAxioms().size()) reject("axiom index out of range");
      requireIn(c.suc, qAxioms()[*r.index], "the succedent");
      break;
    }
    case RuleTag::NAxiom: {
      const Formula& f = principalRight(FormulaKind::Atom, "an N atom");
      if (f.negated() || !f.pred().isInd() || !isNatPred(f.pred().indPred()))
        reject(show(f) + " is not an N atom");
      break;
    }
    case RuleTag::Open:
      break;
    case RuleTag::Weaken: {
      Shape sh;
      sh.remAnt = c.ant;
      sh.remSuc = c.suc;
      s.premisses = {sh};
      break;
    }
    case RuleTag::Subst:
      // Checked separately: the conclusion is the image of the premiss.
      break;
    case RuleTag::Cut: {
      const Formula& f = needPrincipal(r);
      Shape left, right;
      left.addSuc = {f};
      right.addAnt = {f};
      s.premisses = {left, right};
      break;
    }
    case RuleTag::OrL: {
      const Formula& f = principalLeft(FormulaKind::Or, "a disjunction");
      Shape a, b;
      a.addAnt = {f.child(0)};
      b.addAnt = {f.child(1)};
      a.remAnt = b.remAnt = {f};
      s.premisses = {a, b};
      break;
    }
    case RuleTag::OrR: {
      const Formula& f = principalRight(FormulaKind::Or, "a disjunction");
      Shape a;
      a.addSuc = {f.child(0), f.child(1)};
      a.remSuc = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::AndL: {
      const Formula& f = principalLeft(FormulaKind::And, "a conjunction");
      Shape a;
      a.addAnt = {f.child(0), f.child(1)};
      a.remAnt = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::AndR: {
      const Formula& f = principalRight(FormulaKind::And, "a conjunction");
      Shape a, b;
      a.addSuc = {f.child(0)};
      b.addSuc = {f.child(1)};
      a.remSuc = b.remSuc = {f};
      s.premisses = {a, b};
      break;
    }
    case RuleTag::NegL:
    case RuleTag::NegR: {
      const Formula& f = needPrincipal(r);
      if (!f.isLiteral() || !f.negated()) reject(show(f) + " is not a negated atom");
      Formula chi = negate(f);
      Shape a;
      if (r.tag == RuleTag::NegL) {
        requireIn(c.ant, f, "the antecedent");
        s.principalSide = Side::Left;
        a.remAnt = {f};
        a.addSuc = {chi};
      } else {
        requireIn(c.suc, f, "the succedent");
        s.principalSide = Side::Right;
        a.remSuc = {f};
        a.addAnt = {chi};
      }
      s.principal = f;
      s.premisses = {a};
      break;
    }
    case RuleTag::AllL: {
      const Formula& f = principalLeft(FormulaKind::Forall, "universal");
      Shape a;
      a.addAnt = {instantiate(f.child(0), f.var(), needTerm(r))};
      a.remAnt = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::ExR: {
      const Formula& f = principalRight(FormulaKind::Exists, "existential");
      Shape a;
      a.addSuc = {instantiate(f.child(0), f.var(), needTerm(r))};
      a.remSuc = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::AllR: {
      const Formula& f = principalRight(FormulaKind::Forall, "universal");
      Shape a;
      a.addSuc = {instantiate(f.child(0), f.var(), Term::var(needEigen(r, c)))};
      a.remSuc = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::ExL: {
      const Formula& f = principalLeft(FormulaKind::Exists, "existential");
      Shape a;
      a.addAnt = {instantiate(f.child(0), f.var(), Term::var(needEigen(r, c)))};
      a.remAnt = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::EqL: {
      const Formula& eq = principalLeft(FormulaKind::Eq, "an equation");
      if (eq.negated()) reject(show(eq) + " is negated");
      if (!r.pattern) reject("missing parameter template for eqL");
      const Term& lhs = eq.term(0);
      const Term& rhs = eq.term(1);
      Formula concl = holeFill(*r.pattern, rhs, lhs);
      Formula prem = holeFill(*r.pattern, lhs, rhs);
      s.kind = AncestorPair::Kind::Rewrite;
      s.rewrite = {concl, prem};
      std::vector<Schema> out;
      if (c.ant.count(concl)) {
        Schema left = s;
        Shape a;
        a.remAnt = {eq, concl};
        a.addAnt = {prem};
        left.premisses = {a};
        left.principalSide = Side::Left;
        out.push_back(left);
      }
      if (c.suc.count(concl)) {
        Schema right = s;
        Shape a;
        a.remAnt = {eq};
        a.remSuc = {concl};
        a.addSuc = {prem};
        right.premisses = {a};
        right.principalSide = Side::Right;
        out.push_back(right);
      }
      if (out.empty()) reject("template instance " + show(concl) + " not in the conclusion");
      return out;
    }
    case RuleTag::Idl: {
      const Formula& f = principalLeft(FormulaKind::Atom, "an inductive atom");
      const IndPredPtr& p = requireIndAtom(f);
      Shape a;
      a.addAnt = {unfold(p, f.term(0))};
      a.remAnt = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::Idr: {
      const Formula& f = principalRight(FormulaKind::Atom, "an inductive atom");
      const IndPredPtr& p = requireIndAtom(f);
      Shape a;
      a.addSuc = {unfold(p, f.term(0))};
      a.remSuc = {f};
      s.premisses = {a};
      break;
    }
    case RuleTag::Xind: {
      const Formula& f = principalLeft(FormulaKind::Atom, "an inductive atom");
      const IndPredPtr& p = requireIndAtom(f);
      if (!r.invariant) reject("missing parameter inv for xind");
      const std::string& y = needEigen(r, c);
      const Formula& inv = *r.invariant;
      Shape step, use;
      step.addAnt = {unfoldBody(*p, PredLambda{y, inv}, Term::var(y))};
      step.addSuc = {inv};
      step.remAnt = {f};
      use.addAnt = {instantiate(inv, y, f.term(0))};
      use.remAnt = {f};
      s.premisses = {step, use};
      break;
    }
    case RuleTag::IndPA: {
      if (!r.invariant) reject("missing parameter inv for indPA");
      const std::string& y = needEigen(r, c);
      const Formula& inv = *r.invariant;
      Formula goal = instantiate(inv, y, needTerm(r));
      requireIn(c.suc, goal, "the succedent");
      s.principal = goal;
      s.principalSide = Side::Right;
      Shape base, step;
      base.addSuc = {instantiate(inv, y, Term::zero())};
      base.remSuc = {goal};
      step.addAnt = {inv};
      step.addSuc = {instantiate(inv, y, Term::succ(Term::var(y)))};
      step.remSuc = {goal};
      s.premisses = {base, step};
      break;
    }
  }
  return {s};
}

std::optional<std::string> matchSide(const std::set<Formula>& concl, const std::set<Formula>& add,
                                     const std::set<Formula>& removable,
                                     const std::set<Formula>& prem, const char* side) {
  for (const auto& a : add)
    if (!prem.count(a)) return std::string(side) + " lacks " + show(a);
  for (const auto& p : prem)
    if (!add.count(p) && !concl.count(p)) return std::string(side) + " has unexpected " + show(p);
  for (const auto& q : concl)
    if (!prem.count(q) && !removable.count(q)) return std::string(side) + " lost " + show(q);
  return std::nullopt;
}

std::optional<std::string> matchSchema(const Sequent& c, const Schema& s,
                                       const std::vector<Sequent>& premisses) {
  for (std::size_t i = 0; i < s.premisses.size(); ++i) {
    const Shape& sh = s.premisses[i];
    std::string where = "premiss " + std::to_string(i) + " ";
    if (auto e = matchSide(c.ant, sh.addAnt, sh.remAnt, premisses[i].ant,
                           (where + "antecedent").c_str()))
      return e;
    if (auto e = matchSide(c.suc, sh.addSuc, sh.remSuc, premisses[i].suc,
                           (where + "succedent").c_str()))
      return e;
  }
  return std::nullopt;
}

/// The first schema alternative that fits; rejects otherwise.
Schema resolve(const Sequent& c, const RuleInstance& r, const std::vector<Sequent>& premisses) {
  auto schemas = schemasFor(c, r);
  std::optional<std::string> first;
  for (const auto& s : schemas) {
    auto e = matchSchema(c, s, premisses);
    if (!e) return s;
    if (!first) first = e;
  }
  reject(*first);
}

}  // namespace

std::optional<RuleError> checkStep(const Sequent& conclusion, const RuleInstance& rule,
                                   const std::vector<Sequent>& premisses, Mode mode) {
  if (premisses.size() != arity(rule.tag))
    return RuleError{RuleError::Kind::WrongArity,
                     std::string(toString(rule.tag)) + " takes " +
                         std::to_string(arity(rule.tag)) + " premisses, got " +
                         std::to_string(premisses.size())};
  if (mode == Mode::Finitary && rule.tag == RuleTag::NAxiom)
    return RuleError{RuleError::Kind::ModeForbidsRule, "nAxiom is not a finitary rule"};
  if (mode == Mode::Cyclic && (rule.tag == RuleTag::IndPA || rule.tag == RuleTag::Xind))
    return RuleError{RuleError::Kind::ModeForbidsRule,
                     std::string(toString(rule.tag)) + " is not a cyclic rule"};
  try {
    if (rule.tag == RuleTag::Subst) {
      Sequent image = applySubst(rule.theta, premisses[0]);
      if (image != conclusion) reject("conclusion is not the substitution image of the premiss");
      return std::nullopt;
    }
    resolve(conclusion, rule, premisses);
  } catch (const Reject& r) {
    return RuleError{r.kind, r.detail};
  }
  return std::nullopt;
}

std::vector<Sequent> applyRule(const Sequent& conclusion, const RuleInstance& rule) {
  if (rule.tag == RuleTag::Weaken || rule.tag == RuleTag::Subst)
    throw Error(ErrorCode::Unsupported,
                std::string("premisses of ") + toString(rule.tag) + " are not determined");
  std::vector<Schema> schemas;
  try {
    schemas = schemasFor(conclusion, rule);
  } catch (const Reject& r) {
    throw Error(ErrorCode::Unsupported, r.detail);
  }
  std::vector<Sequent> out;
  for (const Shape& sh : schemas.front().premisses) {
    Sequent p;
    for (const auto& f : conclusion.ant)
      if (!sh.remAnt.count(f)) p.ant.insert(f);
    for (const auto& f : conclusion.suc)
      if (!sh.remSuc.count(f)) p.suc.insert(f);
    p.ant.insert(sh.addAnt.begin(), sh.addAnt.end());
    p.suc.insert(sh.addSuc.begin(), sh.addSuc.end());
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AncestorPair> principalAuxiliary(const Sequent& conclusion, const RuleInstance& rule,
                                             const std::vector<Sequent>& premisses) {
  std::vector<AncestorPair> out;
  switch (rule.tag) {
    case RuleTag::Weaken:
    case RuleTag::Subst:
    case RuleTag::Cut:
    case RuleTag::Id:
    case RuleTag::EqR:
    case RuleTag::QAxiom:
    case RuleTag::NAxiom:
    case RuleTag::Open:
      return out;
    default:
      break;
  }
  Schema s;
  try {
    s = resolve(conclusion, rule, premisses);
  } catch (const Reject&) {
    return out;
  }
  if (s.rewrite) {
    out.push_back({s.rewrite->first, 0, s.rewrite->second, s.principalSide, s.principalSide,
                   AncestorPair::Kind::Rewrite});
    return out;
  }
  if (!s.principal) return out;
  for (std::size_t i = 0; i < s.premisses.size(); ++i) {
    for (const auto& a : s.premisses[i].addAnt)
      out.push_back({*s.principal, i, a, s.principalSide, Side::Left, s.kind});
    for (const auto& a : s.premisses[i].addSuc)
      out.push_back({*s.principal, i, a, s.principalSide, Side::Right, s.kind});
  }
  return out;
}

}  // namespace cidk

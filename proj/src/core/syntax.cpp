#include "syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cidk {

const char* toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::IllFormedBody: return "IllFormedBody";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UnassignedVariable: return "UnassignedVariable";
    case ErrorCode::MissingTable: return "MissingTable";
    case ErrorCode::SourceTargetMismatch: return "SourceTargetMismatch";
    case ErrorCode::PropertyViolated: return "PropertyViolated";
    case ErrorCode::RootNotFalse: return "RootNotFalse";
    case ErrorCode::BoundLimited: return "BoundLimited";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "?";
}

//------------------------------------------------------------------------------
// Terms

Term Term::var(std::string name) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Var;
  node->key = name;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::zero() {
  static const Term z = [] {
    auto node = std::make_shared<TermNode>();
    node->kind = TermKind::Zero;
    node->key = "0";
    return Term(std::move(node));
  }();
  return z;
}

Term Term::succ(Term t) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Succ;
  node->key = "s(" + t.key() + ")";
  node->args = {std::move(t)};
  return Term(std::move(node));
}

Term Term::plus(Term a, Term b) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Plus;
  node->key = "+(" + a.key() + "," + b.key() + ")";
  node->args = {std::move(a), std::move(b)};
  return Term(std::move(node));
}

Term Term::times(Term a, Term b) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Times;
  node->key = "*(" + a.key() + "," + b.key() + ")";
  node->args = {std::move(a), std::move(b)};
  return Term(std::move(node));
}

Term Term::numeral(unsigned n) {
  Term t = zero();
  for (unsigned i = 0; i < n; ++i) t = succ(t);
  return t;
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::arg(std::size_t i) const { return node_->args.at(i); }
std::size_t Term::arity() const { return node_->args.size(); }
const std::string& Term::key() const { return node_->key; }

bool Term::contains(const std::string& var) const {
  if (kind() == TermKind::Var) return name() == var;
  for (const auto& a : node_->args)
    if (a.contains(var)) return true;
  return false;
}

void Term::collectVars(std::set<std::string>& out) const {
  if (kind() == TermKind::Var) {
    out.insert(name());
    return;
  }
  for (const auto& a : node_->args) a.collectVars(out);
}

//------------------------------------------------------------------------------
// Predicate symbols

PredSymbol PredSymbol::setVar(std::string name) {
  PredSymbol p;
  p.name_ = std::move(name);
  return p;
}

PredSymbol PredSymbol::ind(IndPredPtr pred) {
  PredSymbol p;
  p.pred_ = std::move(pred);
  return p;
}

std::string PredSymbol::key() const { return isSetVar() ? "X:" + name_ : pred_->key(); }

const std::string& PredSymbol::displayName() const {
  return isSetVar() ? name_ : pred_->displayName();
}

//------------------------------------------------------------------------------
// Canonical keys

namespace {

/// Locally nameless printing: bound variables become distances to their
/// binder, the designated set variable of an inductive body becomes `$X`.
struct Canon {
  std::vector<std::string> env;
  std::string aliasSetVar;

  std::string term(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Var: {
        for (std::size_t i = env.size(); i-- > 0;)
          if (env[i] == t.name()) return "#" + std::to_string(env.size() - 1 - i);
        return t.name();
      }
      case TermKind::Zero: return "0";
      case TermKind::Succ: return "s(" + term(t.arg(0)) + ")";
      case TermKind::Plus: return "+(" + term(t.arg(0)) + "," + term(t.arg(1)) + ")";
      case TermKind::Times: return "*(" + term(t.arg(0)) + "," + term(t.arg(1)) + ")";
    }
    return {};
  }

  bool needsWalk(const Formula& f) const {
    if (!aliasSetVar.empty()) return true;
    for (const auto& v : env)
      if (f.freeVars().count(v)) return true;
    return false;
  }

  std::string formula(const Formula& f) {
    if (!needsWalk(f)) return f.key();
    return walk(f);
  }

  std::string walk(const Formula& f) {
    std::string neg = f.negated() ? "~" : "";
    switch (f.kind()) {
      case FormulaKind::Atom: {
        const auto& p = f.pred();
        std::string pk;
        if (p.isSetVar())
          pk = (p.setVarName() == aliasSetVar) ? "$X" : "X:" + p.setVarName();
        else
          pk = p.indPred()->key();
        return neg + pk + "(" + term(f.term(0)) + ")";
      }
      case FormulaKind::Eq:
        return neg + "=(" + term(f.term(0)) + "," + term(f.term(1)) + ")";
      case FormulaKind::Lt:
        return neg + "<(" + term(f.term(0)) + "," + term(f.term(1)) + ")";
      case FormulaKind::Or:
        return "|(" + formula(f.child(0)) + "," + formula(f.child(1)) + ")";
      case FormulaKind::And:
        return "&(" + formula(f.child(0)) + "," + formula(f.child(1)) + ")";
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        env.push_back(f.var());
        std::string body = walk(f.child(0));
        env.pop_back();
        return (f.kind() == FormulaKind::Exists ? "E(" : "A(") + body + ")";
      }
    }
    return {};
  }
};

}  // namespace

//------------------------------------------------------------------------------
// Formulas

Formula Formula::make(FormulaNode node) {
  switch (node.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      for (const auto& t : node.terms) t.collectVars(node.freeVars);
      break;
    case FormulaKind::Or:
    case FormulaKind::And:
      for (const auto& c : node.children)
        node.freeVars.insert(c.freeVars().begin(), c.freeVars().end());
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      node.freeVars = node.children[0].freeVars();
      node.freeVars.erase(node.var);
      break;
  }
  auto ptr = std::make_shared<FormulaNode>(std::move(node));
  Formula f(ptr);
  ptr->key = Canon{}.walk(f);
  return f;
}

Formula Formula::atom(PredSymbol p, Term t, bool negated) {
  FormulaNode n;
  n.kind = FormulaKind::Atom;
  n.negated = negated;
  n.pred = std::move(p);
  n.terms = {std::move(t)};
  return make(std::move(n));
}

Formula Formula::eq(Term s, Term t, bool negated) {
  FormulaNode n;
  n.kind = FormulaKind::Eq;
  n.negated = negated;
  n.terms = {std::move(s), std::move(t)};
  return make(std::move(n));
}

Formula Formula::lt(Term s, Term t, bool negated) {
  FormulaNode n;
  n.kind = FormulaKind::Lt;
  n.negated = negated;
  n.terms = {std::move(s), std::move(t)};
  return make(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
  FormulaNode n;
  n.kind = FormulaKind::Or;
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
  FormulaNode n;
  n.kind = FormulaKind::And;
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Exists;
  n.var = std::move(var);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Forall;
  n.var = std::move(var);
  n.children = {std::move(body)};
  return make(std::move(n));
}

FormulaKind Formula::kind() const { return node_->kind; }
bool Formula::negated() const { return node_->negated; }
bool Formula::isLiteral() const {
  return kind() == FormulaKind::Atom || kind() == FormulaKind::Eq || kind() == FormulaKind::Lt;
}
const PredSymbol& Formula::pred() const { return *node_->pred; }
const Term& Formula::term(std::size_t i) const { return node_->terms.at(i); }
const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }
const std::string& Formula::var() const { return node_->var; }
const std::string& Formula::key() const { return node_->key; }
const std::set<std::string>& Formula::freeVars() const { return node_->freeVars; }

//------------------------------------------------------------------------------
// Inductive predicates

IndPred::IndPred(Formula body, std::string setVar, std::string indVar, std::string displayName)
    : body_(std::move(body)),
      setVar_(std::move(setVar)),
      indVar_(std::move(indVar)),
      displayName_(std::move(displayName)) {
  Canon canon;
  canon.env = {indVar_};
  canon.aliasSetVar = setVar_;
  key_ = "I[" + canon.walk(body_) + "]";
  deps_ = indPredsIn(body_);
  for (const auto& d : deps_) height_ = std::max(height_, d->height() + 1);
}

IndPredPtr mkIndPred(Formula body, std::string setVar, std::string indVar,
                     std::string displayName) {
  if (!isPositive(body, setVar))
    throw Error(ErrorCode::NotPositive,
                "body of " + displayName + " is not positive in " + setVar);
  for (const auto& v : body.freeVars())
    if (v != indVar)
      throw Error(ErrorCode::IllFormedBody,
                  "body of " + displayName + " has stray free variable " + v);
  for (const auto& s : setVarsIn(body))
    if (s != setVar)
      throw Error(ErrorCode::IllFormedBody,
                  "body of " + displayName + " mentions set variable " + s);
  return IndPredPtr(new IndPred(std::move(body), std::move(setVar), std::move(indVar),
                                std::move(displayName)));
}

//------------------------------------------------------------------------------
// Traversals

namespace {

void forEachLiteral(const Formula& f, const std::function<void(const Formula&)>& fn) {
  if (f.isLiteral()) {
    fn(f);
    return;
  }
  if (f.kind() == FormulaKind::Or || f.kind() == FormulaKind::And) {
    forEachLiteral(f.child(0), fn);
    forEachLiteral(f.child(1), fn);
  } else {
    forEachLiteral(f.child(0), fn);
  }
}

bool mentions(const IndPred& pred, const PredSymbol& target,
              std::map<std::string, bool>& memo) {
  auto it = memo.find(pred.key());
  if (it != memo.end()) return it->second;
  bool found = false;
  if (target.isSetVar() && target.setVarName() == pred.setVar()) {
    found = false;  // shadowed by the bound set variable
  } else {
    forEachLiteral(pred.body(), [&](const Formula& lit) {
      if (found || lit.kind() != FormulaKind::Atom) return;
      if (lit.pred() == target) found = true;
      else if (lit.pred().isInd() && mentions(*lit.pred().indPred(), target, memo))
        found = true;
    });
  }
  memo[pred.key()] = found;
  return found;
}

bool mentions(const IndPred& pred, const PredSymbol& target) {
  std::map<std::string, bool> memo;
  return mentions(pred, target, memo);
}

}  // namespace

bool isPositive(const Formula& f, const std::string& setVar) {
  bool ok = true;
  forEachLiteral(f, [&](const Formula& lit) {
    if (lit.kind() != FormulaKind::Atom) return;
    const auto& p = lit.pred();
    if (p.isSetVar()) {
      if (p.setVarName() == setVar && lit.negated()) ok = false;
    } else if (p.indPred()->setVar() != setVar &&
               !isPositive(p.indPred()->body(), setVar)) {
      ok = false;
    }
  });
  return ok;
}

bool occursPositively(const Formula& f, const PredSymbol& p) {
  bool pos = false, neg = false;
  forEachLiteral(f, [&](const Formula& lit) {
    if (lit.kind() == FormulaKind::Atom && lit.pred() == p) (lit.negated() ? neg : pos) = true;
  });
  return pos && !neg;
}

bool occurs(const Formula& f, const PredSymbol& p) {
  bool found = false;
  forEachLiteral(f, [&](const Formula& lit) {
    if (lit.kind() == FormulaKind::Atom && lit.pred() == p) found = true;
  });
  return found;
}

std::vector<IndPredPtr> indPredsIn(const Formula& f) {
  std::vector<IndPredPtr> out;
  std::set<std::string> seen;
  forEachLiteral(f, [&](const Formula& lit) {
    if (lit.kind() == FormulaKind::Atom && lit.pred().isInd() &&
        seen.insert(lit.pred().indPred()->key()).second)
      out.push_back(lit.pred().indPred());
  });
  return out;
}

std::vector<IndPredPtr> indPredClosure(const std::vector<Formula>& fs) {
  std::vector<IndPredPtr> out;
  std::set<std::string> seen;
  std::function<void(const IndPredPtr&)> visit = [&](const IndPredPtr& p) {
    if (!seen.insert(p->key()).second) return;
    for (const auto& d : p->dependencies()) visit(d);
    out.push_back(p);
  };
  for (const auto& f : fs)
    for (const auto& p : indPredsIn(f)) visit(p);
  return out;
}

std::set<std::string> setVarsIn(const Formula& f) {
  std::set<std::string> out;
  forEachLiteral(f, [&](const Formula& lit) {
    if (lit.kind() == FormulaKind::Atom && lit.pred().isSetVar())
      out.insert(lit.pred().setVarName());
  });
  return out;
}

Formula negate(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return Formula::atom(f.pred(), f.term(0), !f.negated());
    case FormulaKind::Eq: return Formula::eq(f.term(0), f.term(1), !f.negated());
    case FormulaKind::Lt: return Formula::lt(f.term(0), f.term(1), !f.negated());
    case FormulaKind::Or: return Formula::conj(negate(f.child(0)), negate(f.child(1)));
    case FormulaKind::And: return Formula::disj(negate(f.child(0)), negate(f.child(1)));
    case FormulaKind::Exists: return Formula::forall(f.var(), negate(f.child(0)));
    case FormulaKind::Forall: return Formula::exists(f.var(), negate(f.child(0)));
  }
  return f;
}

//------------------------------------------------------------------------------
// Substitution

Term applySubst(const Substitution& theta, const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = theta.find(t.name());
      return it == theta.end() ? t : it->second;
    }
    case TermKind::Zero: return t;
    case TermKind::Succ: return Term::succ(applySubst(theta, t.arg(0)));
    case TermKind::Plus: return Term::plus(applySubst(theta, t.arg(0)), applySubst(theta, t.arg(1)));
    case TermKind::Times:
      return Term::times(applySubst(theta, t.arg(0)), applySubst(theta, t.arg(1)));
  }
  return t;
}

namespace {

std::string stem(const std::string& name) {
  std::size_t end = name.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  return name.substr(0, end);
}

}  // namespace

Formula applySubst(const Substitution& theta, const Formula& f) {
  Substitution relevant;
  for (const auto& [v, t] : theta)
    if (f.freeVars().count(v) && !(t.kind() == TermKind::Var && t.name() == v))
      relevant.emplace(v, t);
  if (relevant.empty()) return f;

  switch (f.kind()) {
    case FormulaKind::Atom:
      return Formula::atom(f.pred(), applySubst(relevant, f.term(0)), f.negated());
    case FormulaKind::Eq:
      return Formula::eq(applySubst(relevant, f.term(0)), applySubst(relevant, f.term(1)),
                         f.negated());
    case FormulaKind::Lt:
      return Formula::lt(applySubst(relevant, f.term(0)), applySubst(relevant, f.term(1)),
                         f.negated());
    case FormulaKind::Or:
      return Formula::disj(applySubst(relevant, f.child(0)), applySubst(relevant, f.child(1)));
    case FormulaKind::And:
      return Formula::conj(applySubst(relevant, f.child(0)), applySubst(relevant, f.child(1)));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      std::set<std::string> range;
      for (const auto& [v, t] : relevant) t.collectVars(range);
      std::string binder = f.var();
      Substitution inner = relevant;
      if (range.count(binder)) {
        std::set<std::string> avoid = range;
        avoid.insert(f.child(0).freeVars().begin(), f.child(0).freeVars().end());
        for (const auto& [v, t] : relevant) avoid.insert(v);
        binder = freshVar(avoid, stem(f.var()));
        inner.insert_or_assign(f.var(), Term::var(binder));
      }
      Formula body = applySubst(inner, f.child(0));
      return f.kind() == FormulaKind::Exists ? Formula::exists(binder, body)
                                             : Formula::forall(binder, body);
    }
  }
  return f;
}

Formula instantiate(const Formula& f, const std::string& var, const Term& t) {
  return applySubst(Substitution{{var, t}}, f);
}

Formula replacePred(const Formula& f, const PredSymbol& target,
                    const PredReplacement& replacement) {
  switch (f.kind()) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return f;
    case FormulaKind::Atom: {
      const auto& p = f.pred();
      if (p == target) {
        if (const auto* sym = std::get_if<PredSymbol>(&replacement))
          return Formula::atom(*sym, f.term(0), f.negated());
        const auto& lam = std::get<PredLambda>(replacement);
        Formula inst = instantiate(lam.body, lam.var, f.term(0));
        return f.negated() ? negate(inst) : inst;
      }
      if (p.isInd() && mentions(*p.indPred(), target)) {
        const auto* sym = std::get_if<PredSymbol>(&replacement);
        if (!sym)
          throw Error(ErrorCode::Unsupported,
                      "cannot substitute an abstraction for " + target.displayName() +
                          " inside the body of " + p.displayName());
        return Formula::atom(PredSymbol::ind(replacePredInIndPred(p.indPred(), target, *sym)),
                             f.term(0), f.negated());
      }
      return f;
    }
    case FormulaKind::Or:
      return Formula::disj(replacePred(f.child(0), target, replacement),
                           replacePred(f.child(1), target, replacement));
    case FormulaKind::And:
      return Formula::conj(replacePred(f.child(0), target, replacement),
                           replacePred(f.child(1), target, replacement));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      std::string binder = f.var();
      Formula body = f.child(0);
      if (const auto* lam = std::get_if<PredLambda>(&replacement)) {
        std::set<std::string> lamFree = lam->body.freeVars();
        lamFree.erase(lam->var);
        if (lamFree.count(binder)) {
          std::set<std::string> avoid = lamFree;
          avoid.insert(body.freeVars().begin(), body.freeVars().end());
          avoid.insert(binder);
          std::string fresh = freshVar(avoid, stem(binder));
          body = instantiate(body, binder, Term::var(fresh));
          binder = fresh;
        }
      }
      body = replacePred(body, target, replacement);
      return f.kind() == FormulaKind::Exists ? Formula::exists(binder, body)
                                             : Formula::forall(binder, body);
    }
  }
  return f;
}

IndPredPtr replacePredInIndPred(const IndPredPtr& pred, const PredSymbol& target,
                                const PredSymbol& replacement) {
  if (!mentions(*pred, target)) return pred;
  if (replacement.isSetVar() && replacement.setVarName() == pred->setVar())
    throw Error(ErrorCode::Unsupported, "replacement captured by bound set variable " +
                                            pred->setVar());
  Formula body = replacePred(pred->body(), target, replacement);
  return mkIndPred(body, pred->setVar(), pred->indVar(),
                   pred->displayName() + "_" + replacement.displayName());
}

Formula unfoldBody(const IndPred& pred, const PredReplacement& forSetVar, const Term& t) {
  Formula b = instantiate(pred.body(), pred.indVar(), t);
  return replacePred(b, PredSymbol::setVar(pred.setVar()), forSetVar);
}

Formula unfold(const IndPredPtr& pred, const Term& t) {
  return unfoldBody(*pred, PredSymbol::ind(pred), t);
}

Formula gfpDual(const Formula& body, const std::string& setVar, const std::string& indVar,
                const std::string& displayName) {
  if (!isPositive(body, setVar))
    throw Error(ErrorCode::NotPositive, "gfp body is not positive in " + setVar);
  std::set<std::string> avoid = body.freeVars();
  avoid.insert(indVar);
  std::string v = freshVar(avoid, "v");
  PredLambda flip{v, Formula::atom(PredSymbol::setVar(setVar), Term::var(v), true)};
  Formula inner = negate(replacePred(body, PredSymbol::setVar(setVar), flip));
  IndPredPtr pred = mkIndPred(inner, setVar, indVar, displayName);
  return Formula::atom(PredSymbol::ind(pred), Term::var(indVar), true);
}

//------------------------------------------------------------------------------
// Predicate order

const char* toString(PredOrder order) {
  switch (order) {
    case PredOrder::Below: return "below";
    case PredOrder::Above: return "above";
    case PredOrder::Equal: return "equal";
    case PredOrder::Incomparable: return "incomparable";
  }
  return "?";
}

namespace {

bool reaches(const IndPredPtr& from, const std::string& targetKey) {
  for (const auto& d : from->dependencies())
    if (d->key() == targetKey || reaches(d, targetKey)) return true;
  return false;
}

}  // namespace

PredOrder predOrder(const IndPredPtr& a, const IndPredPtr& b) {
  if (a->key() == b->key()) return PredOrder::Equal;
  if (reaches(b, a->key())) return PredOrder::Below;
  if (reaches(a, b->key())) return PredOrder::Above;
  return PredOrder::Incomparable;
}

bool predTotalLess(const IndPredPtr& a, const IndPredPtr& b) {
  if (a->height() != b->height()) return a->height() < b->height();
  return a->key() < b->key();
}

std::string freshVar(const std::set<std::string>& avoid, const std::string& base) {
  for (unsigned k = 0;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace cidk

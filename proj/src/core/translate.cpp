#include "translate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

namespace cidk {
namespace {

std::set<Formula> with(std::set<Formula> s, const Formula& f) {
  s.insert(f);
  return s;
}

std::set<Formula> with(std::set<Formula> s, const Formula& f, const Formula& g) {
  s.insert(f);
  s.insert(g);
  return s;
}

RuleInstance rule(RuleTag tag, std::optional<Formula> f = std::nullopt) {
  RuleInstance r;
  r.tag = tag;
  r.principal = std::move(f);
  return r;
}

std::string ruleKey(const RuleInstance& r) {
  std::string k = toString(r.tag);
  auto add = [&](const std::string& name, const std::string& v) { k += ";" + name + "=" + v; };
  if (r.principal) add("f", r.principal->key());
  if (r.term) add("t", r.term->key());
  if (r.eigen) add("y", *r.eigen);
  for (const auto& [v, t] : r.theta) add("theta." + v, t.key());
  if (r.invariant) add("inv", r.invariant->key());
  if (r.pattern) add("template", r.pattern->key());
  if (r.index) add("index", std::to_string(*r.index));
  return k;
}

/// Accumulates proof nodes; structurally identical nodes are shared.
class Builder {
 public:
  std::size_t add(Sequent seq, RuleInstance r, std::vector<std::size_t> premisses,
                  std::string hint = "") {
    std::string k = seq.key() + "|" + ruleKey(r) + "|";
    for (auto i : premisses) k += std::to_string(i) + ",";
    if (auto it = index_.find(k); it != index_.end()) return it->second;
    nodes_.push_back({std::move(hint), std::move(seq), std::move(r), std::move(premisses)});
    index_.emplace(std::move(k), nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  /// A node whose rule is supplied later, for the target of back-edges.
  std::size_t placeholder(Sequent seq) {
    nodes_.push_back({"", std::move(seq), rule(RuleTag::Open), {}});
    return nodes_.size() - 1;
  }

  void fill(std::size_t i, RuleInstance r, std::vector<std::size_t> premisses) {
    nodes_[i].rule = std::move(r);
    nodes_[i].premisses = std::move(premisses);
  }

  const Sequent& seq(std::size_t i) const { return nodes_[i].seq; }

  std::size_t weakenTo(const Sequent& conclusion, std::size_t n) {
    if (conclusion == seq(n)) return n;
    return add(conclusion, rule(RuleTag::Weaken), {n});
  }

  std::size_t substTo(const Substitution& theta, std::size_t n) {
    Sequent image = applySubst(theta, seq(n));
    if (image == seq(n)) return n;
    RuleInstance r = rule(RuleTag::Subst);
    r.theta = theta;
    return add(std::move(image), std::move(r), {n});
  }

  /// Reachable nodes in preorder, labelled by their hints where possible.
  Fragment finish(std::size_t root, Mode mode, PredEnv preds,
                  std::vector<std::string> comments = {}) const {
    std::vector<std::size_t> order;
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      if (seen[i]) continue;
      seen[i] = true;
      order.push_back(i);
      const auto& ps = nodes_[i].premisses;
      for (auto it = ps.rbegin(); it != ps.rend(); ++it)
        if (!seen[*it]) stack.push_back(*it);
    }
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;

    std::set<std::string> used;
    std::vector<std::string> labels(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::string& h = nodes_[order[k]].label;
      if (!h.empty() && used.insert(h).second) labels[k] = h;
    }
    std::size_t counter = 0;
    for (auto& l : labels) {
      if (!l.empty()) continue;
      do l = "n" + std::to_string(counter++);
      while (used.count(l));
      used.insert(l);
    }

    Fragment out;
    out.proof.mode = mode;
    out.proof.root = 0;
    out.proof.preds = std::move(preds);
    out.proof.comments = std::move(comments);
    for (std::size_t k = 0; k < order.size(); ++k) {
      ProofNode n = nodes_[order[k]];
      n.label = labels[k];
      for (auto& q : n.premisses) q = pos.at(q);
      if (n.rule.tag == RuleTag::Open) out.openLeaves.push_back(n.label);
      out.proof.nodes.push_back(std::move(n));
    }
    return out;
  }

 private:
  std::vector<ProofNode> nodes_;
  std::map<std::string, std::size_t> index_;
};

std::string replacementKey(const PredReplacement& r) {
  if (const auto* s = std::get_if<PredSymbol>(&r)) return "S" + s->key();
  const auto& l = std::get<PredLambda>(r);
  return "L" + instantiate(l.body, l.var, Term::var("%")).key();
}

bool mentions(const Formula& f, const PredSymbol& p) {
  if (p.isSetVar()) return setVarsIn(f).count(p.setVarName()) > 0;
  for (const auto& q : indPredClosure({f}))
    if (q->key() == p.key()) return true;
  return false;
}

/// A negated occurrence of `p` in `f` or in a body reachable from it.
bool negativelyMentions(const Formula& f, const PredSymbol& p) {
  std::set<std::string> visited;
  std::function<bool(const Formula&)> go = [&](const Formula& g) -> bool {
    switch (g.kind()) {
      case FormulaKind::Atom:
        if (g.pred() == p) return g.negated();
        if (g.pred().isInd() && visited.insert(g.pred().key()).second)
          return go(g.pred().indPred()->body());
        return false;
      case FormulaKind::Eq:
      case FormulaKind::Lt:
        return false;
      case FormulaKind::Or:
      case FormulaKind::And:
        return go(g.child(0)) || go(g.child(1));
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        return go(g.child(0));
    }
    return false;
  };
  return go(f);
}

/// One monotonicity obligation: occurrences of `target` in a template are
/// read as `left` in the antecedent and as `right` in the succedent.
struct Pair {
  PredSymbol target;
  PredReplacement left;
  PredReplacement right;
  std::optional<std::size_t> hyp;  // derives left(hypVar) => right(hypVar)
  std::string hypVar;
};

/// The structural induction behind both functoriality generators.
class Functor {
 public:
  Functor(Builder& b, Mode mode) : b_(b), mode_(mode) {}

  std::string marker() { return "_M" + std::to_string(markers_++); }

  /// gamma, tmpl(left) => delta, tmpl(right).
  std::size_t derive(const Formula& tmpl, const std::vector<Pair>& pairs,
                     const std::set<Formula>& gamma, const std::set<Formula>& delta) {
    Formula L = side(tmpl, pairs, false);
    Formula R = side(tmpl, pairs, true);
    Sequent conc{with(gamma, L), with(delta, R)};

    std::vector<const Pair*> active;
    for (const auto& p : pairs)
      if (mentions(tmpl, p.target) &&
          (p.hyp || replacementKey(p.left) != replacementKey(p.right)))
        active.push_back(&p);
    if (active.empty()) {
      if (L != R) throw Error(ErrorCode::Unsupported, "functoriality: sides differ without hypothesis");
      return b_.add(conc, rule(RuleTag::Id, L), {});
    }

    switch (tmpl.kind()) {
      case FormulaKind::Atom: {
        if (tmpl.negated()) throw Error(ErrorCode::NotPositive, "negative occurrence in functoriality template");
        for (const Pair* p : active)
          if (tmpl.pred() == p->target) return viaHypothesis(*p, tmpl.term(0), conc);
        return mode_ == Mode::Finitary ? viaXind(tmpl, pairs, gamma, delta, conc)
                                       : viaLoop(tmpl, pairs, gamma, delta, conc);
      }
      case FormulaKind::Or: {
        Formula ra = side(tmpl.child(0), pairs, true);
        Formula rb = side(tmpl.child(1), pairs, true);
        Sequent split{conc.ant, with(delta, ra, rb)};
        std::vector<std::size_t> branches;
        for (std::size_t i = 0; i < 2; ++i) {
          const Formula& c = tmpl.child(i);
          Sequent s{with(gamma, side(c, pairs, false)), split.suc};
          branches.push_back(b_.weakenTo(s, derive(c, pairs, gamma, delta)));
        }
        std::size_t orl = b_.add(split, rule(RuleTag::OrL, L), branches);
        return b_.add(conc, rule(RuleTag::OrR, R), {orl});
      }
      case FormulaKind::And: {
        Formula la = side(tmpl.child(0), pairs, false);
        Formula lb = side(tmpl.child(1), pairs, false);
        std::vector<std::size_t> branches;
        for (std::size_t i = 0; i < 2; ++i) {
          const Formula& c = tmpl.child(i);
          Formula rc = side(c, pairs, true);
          Sequent s{with(gamma, la, lb), with(delta, rc)};
          std::size_t sub = b_.weakenTo(s, derive(c, pairs, gamma, delta));
          branches.push_back(b_.add(Sequent{conc.ant, with(delta, rc)}, rule(RuleTag::AndL, L), {sub}));
        }
        return b_.add(conc, rule(RuleTag::AndR, R), branches);
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        std::string e = freshVar(avoid(conc, pairs), "w");
        Term te = Term::var(e);
        Formula body = instantiate(tmpl.child(0), tmpl.var(), te);
        Formula le = instantiate(L.child(0), L.var(), te);
        Formula re = instantiate(R.child(0), R.var(), te);
        std::size_t sub = derive(body, pairs, gamma, delta);
        bool ex = tmpl.kind() == FormulaKind::Exists;
        // exL then exR; allR then allL.
        RuleInstance outer = rule(ex ? RuleTag::ExL : RuleTag::AllR, ex ? L : R);
        outer.eigen = e;
        RuleInstance inner = rule(ex ? RuleTag::ExR : RuleTag::AllL, ex ? R : L);
        inner.term = te;
        Sequent mid = ex ? Sequent{with(gamma, le), conc.suc} : Sequent{conc.ant, with(delta, re)};
        std::size_t m = b_.add(mid, inner, {sub});
        return b_.add(conc, outer, {m});
      }
      case FormulaKind::Eq:
      case FormulaKind::Lt:
        break;
    }
    throw Error(ErrorCode::Unsupported, "functoriality: unexpected template " + tmpl.key());
  }

 private:
  static Formula side(const Formula& tmpl, const std::vector<Pair>& pairs, bool right) {
    Formula f = tmpl;
    for (const auto& p : pairs) f = replacePred(f, p.target, right ? p.right : p.left);
    return f;
  }

  std::set<std::string> avoid(const Sequent& conc, const std::vector<Pair>& pairs) const {
    std::set<std::string> out = conc.freeVars();
    for (const auto& p : pairs) {
      if (p.hyp) out.insert(p.hypVar);
      for (const auto* r : {&p.left, &p.right})
        if (const auto* l = std::get_if<PredLambda>(r)) {
          const auto& fv = l->body.freeVars();
          out.insert(fv.begin(), fv.end());
        }
    }
    return out;
  }

  std::size_t viaHypothesis(const Pair& p, const Term& t, const Sequent& conc) {
    if (!p.hyp)
      throw Error(ErrorCode::Unsupported, "functoriality: no hypothesis for " + p.target.displayName());
    std::size_t n = b_.substTo(Substitution{{p.hypVar, t}}, *p.hyp);
    return b_.weakenTo(conc, n);
  }

  /// body of the atom's predicate with its set variable renamed to `m` and
  /// its element variable instantiated to `x`.
  static Formula bodyTemplate(const Formula& atom, const std::string& m, const Term& x) {
    const IndPred& ip = *atom.pred().indPred();
    Formula b = replacePred(ip.body(), PredSymbol::setVar(ip.setVar()), PredSymbol::setVar(m));
    return instantiate(b, ip.indVar(), x);
  }

  std::size_t viaXind(const Formula& tmpl, std::vector<Pair> pairs, const std::set<Formula>& gamma,
                      const std::set<Formula>& delta, const Sequent& conc) {
    const Formula& L = *conc.ant.find(side(tmpl, pairs, false));
    IndPredPtr right = side(tmpl, pairs, true).pred().indPred();
    std::string y = freshVar(avoid(conc, pairs), "y");
    Term ty = Term::var(y);
    Formula inv = Formula::atom(PredSymbol::ind(right), ty);
    std::string m = marker();
    Formula body = bodyTemplate(tmpl, m, ty);
    pairs.push_back({PredSymbol::setVar(m), PredSymbol::ind(right), PredSymbol::ind(right), {}, ""});
    // The step premiss keeps the whole succedent, I_R(t) included.
    std::size_t inner = derive(body, pairs, gamma, conc.suc);
    Sequent stepSeq{with(gamma, unfoldBody(*L.pred().indPred(), PredLambda{y, inv}, ty)),
                    with(conc.suc, inv)};
    std::size_t step = b_.add(stepSeq, rule(RuleTag::Idr, inv), {inner});
    Formula rt = Formula::atom(PredSymbol::ind(right), tmpl.term(0));
    std::size_t use = b_.add(Sequent{with(gamma, rt), with(delta, rt)}, rule(RuleTag::Id, rt), {});
    RuleInstance x = rule(RuleTag::Xind, L);
    x.invariant = inv;
    x.eigen = y;
    return b_.add(conc, x, {step, use});
  }

  std::size_t viaLoop(const Formula& tmpl, std::vector<Pair> pairs, const std::set<Formula>& gamma,
                      const std::set<Formula>& delta, const Sequent& conc) {
    IndPredPtr left = side(tmpl, pairs, false).pred().indPred();
    IndPredPtr right = side(tmpl, pairs, true).pred().indPred();
    std::set<std::string> av = avoid(Sequent{gamma, delta}, pairs);
    tmpl.term(0).collectVars(av);
    std::string z = freshVar(av, "z");
    Term tz = Term::var(z);
    Formula lz = Formula::atom(PredSymbol::ind(left), tz);
    Formula rz = Formula::atom(PredSymbol::ind(right), tz);
    Sequent gseq{with(gamma, lz), with(delta, rz)};

    std::string key = gseq.key();
    for (const auto& p : pairs)
      key += "|" + p.target.key() + ":" + replacementKey(p.left) + ":" + replacementKey(p.right) +
             ":" + (p.hyp ? std::to_string(*p.hyp) + p.hypVar : "-");
    std::size_t g;
    if (auto it = loops_.find(key); it != loops_.end()) {
      g = it->second;
    } else {
      g = b_.placeholder(gseq);
      loops_.emplace(key, g);
      std::string m = marker();
      Formula body = bodyTemplate(tmpl, m, tz);
      pairs.push_back({PredSymbol::setVar(m), PredSymbol::ind(left), PredSymbol::ind(right), g, z});
      std::size_t inner = derive(body, pairs, gamma, delta);
      std::size_t k = b_.add(Sequent{with(gamma, unfold(left, tz)), with(delta, rz)},
                             rule(RuleTag::Idr, rz), {inner});
      b_.fill(g, rule(RuleTag::Idl, lz), {k});
    }
    return b_.weakenTo(conc, b_.substTo(Substitution{{z, tmpl.term(0)}}, g));
  }

  Builder& b_;
  Mode mode_;
  unsigned markers_ = 0;
  std::map<std::string, std::size_t> loops_;
};

PredEnv namesFor(const PredSymbol& a, const PredSymbol& b) {
  PredEnv env = standardEnv();
  for (const auto* p : {&a, &b})
    if (p->isInd()) env.emplace(p->displayName(), p->indPred());
  return env;
}

Fragment functoriality(const Formula& phi, const PredSymbol& y, const PredSymbol& z, Mode mode) {
  if (negativelyMentions(phi, y))
    throw Error(ErrorCode::NotPositive, y.displayName() + " occurs negatively");
  Builder b;
  Functor fn(b, mode);
  std::set<std::string> av = phi.freeVars();
  std::string w = freshVar(av, "w");
  Sequent hypSeq{{Formula::atom(y, Term::var(w))}, {Formula::atom(z, Term::var(w))}};
  std::size_t h = b.add(hypSeq, rule(RuleTag::Open), {}, "hyp");
  std::size_t root = fn.derive(phi, {Pair{y, y, z, h, w}}, {}, {});
  return b.finish(root, mode, namesFor(y, z));
}

using LeafFn = std::function<std::size_t(const Sequent&)>;

/// gamma => delta, inv[t/y]. `y` must not be free in gamma, delta or t.
std::size_t indFromN(Builder& b, const Formula& inv, const std::string& y, const Term& t,
                     const std::set<Formula>& gamma, const std::set<Formula>& delta,
                     const LeafFn& base, const LeafFn& step) {
  for (const char* hole : {kHoleU, kHoleV})
    if (hole != y && inv.freeVars().count(hole))
      throw Error(ErrorCode::Unsupported, std::string("invariant mentions the template hole ") + hole);
  Sequent outer{gamma, delta};
  std::set<std::string> av = outer.freeVars();
  av.insert(inv.freeVars().begin(), inv.freeVars().end());
  t.collectVars(av);
  av.insert(y);
  std::string z = freshVar(av, "z");
  Term tz = Term::var(z), ty = Term::var(y);
  auto at = [&](const Term& s) { return instantiate(inv, y, s); };
  Formula pattern = at(Term::var(kHoleV));
  IndPredPtr nat = natPred();
  auto nAt = [&](const Term& s) { return Formula::atom(PredSymbol::ind(nat), s); };

  Sequent gseq{with(gamma, nAt(tz)), with(delta, at(tz))};
  std::size_t g = b.placeholder(gseq);
  Formula unfolded = unfold(nat, tz);

  // z = 0
  Formula zeroEq = unfolded.child(0);
  RuleInstance rw0 = rule(RuleTag::EqL, zeroEq);
  rw0.pattern = pattern;
  std::size_t leaf0 = base(Sequent{gamma, with(delta, at(Term::zero()))});
  std::size_t zeroBranch = b.add(Sequent{with(gamma, zeroEq), gseq.suc}, rw0, {leaf0});

  // z = s(y) with N(y)
  const Formula& ex = unfolded.child(1);
  Formula conj = instantiate(ex.child(0), ex.var(), ty);
  Formula succEq = conj.child(1);
  Formula nY = nAt(ty);
  Formula phiSy = at(Term::succ(ty));
  std::size_t back = b.substTo(Substitution{{z, ty}}, g);
  std::size_t left = b.weakenTo(Sequent{with(gamma, nY), with(delta, phiSy, inv)}, back);
  std::size_t leaf1 = step(Sequent{with(gamma, inv), with(delta, phiSy)});
  std::size_t right = b.weakenTo(Sequent{with(gamma, nY, inv), with(delta, phiSy)}, leaf1);
  std::size_t cut = b.add(Sequent{with(gamma, nY), with(delta, phiSy)}, rule(RuleTag::Cut, inv),
                          {left, right});
  RuleInstance rw1 = rule(RuleTag::EqL, succEq);
  rw1.pattern = pattern;
  std::size_t rewritten = b.add(Sequent{with(gamma, nY, succEq), gseq.suc}, rw1, {cut});
  std::size_t split = b.add(Sequent{with(gamma, conj), gseq.suc}, rule(RuleTag::AndL, conj), {rewritten});
  RuleInstance open = rule(RuleTag::ExL, ex);
  open.eigen = y;
  std::size_t succBranch = b.add(Sequent{with(gamma, ex), gseq.suc}, open, {split});

  std::size_t cases = b.add(Sequent{with(gamma, unfolded), gseq.suc}, rule(RuleTag::OrL, unfolded),
                            {zeroBranch, succBranch});
  b.fill(g, rule(RuleTag::Idl, nAt(tz)), {cases});

  Formula goal = at(t);
  std::size_t axiom = b.add(Sequent{gamma, with(delta, goal, nAt(t))}, rule(RuleTag::NAxiom, nAt(t)), {});
  std::size_t use = b.substTo(Substitution{{z, t}}, g);
  return b.add(Sequent{gamma, with(delta, goal)}, rule(RuleTag::Cut, nAt(t)), {axiom, use});
}

}  // namespace

Fragment functorialityFinite(const Formula& phi, const PredSymbol& y, const PredSymbol& z) {
  return functoriality(phi, y, z, Mode::Finitary);
}

Fragment functorialityCyclic(const Formula& phi, const PredSymbol& y, const PredSymbol& z) {
  return functoriality(phi, y, z, Mode::Cyclic);
}

Fragment deriveIdl(const IndPredPtr& pred, const std::set<Formula>& gamma,
                   const std::set<Formula>& delta, const Term& t) {
  Builder b;
  Functor fn(b, Mode::Finitary);
  PredSymbol sym = PredSymbol::ind(pred);
  Formula it = Formula::atom(sym, t);
  Sequent conc{with(gamma, it), delta};
  std::set<std::string> av = conc.freeVars();
  std::string y = freshVar(av, "y");
  av.insert(y);
  std::string w = freshVar(av, "w");
  Term ty = Term::var(y), tw = Term::var(w);
  Formula psi = unfold(pred, ty);

  std::size_t leaf = b.add(Sequent{with(gamma, unfold(pred, t)), delta}, rule(RuleTag::Open), {}, "hyp");
  // body(I, w) => I(w), closed by idr.
  Formula uw = unfold(pred, tw);
  std::size_t refl = b.add(Sequent{{uw}, {uw}}, rule(RuleTag::Id, uw), {});
  std::size_t h = b.add(Sequent{{uw}, {Formula::atom(sym, tw)}}, rule(RuleTag::Idr, Formula::atom(sym, tw)), {refl});

  std::string m = fn.marker();
  Formula tmpl = instantiate(
      replacePred(pred->body(), PredSymbol::setVar(pred->setVar()), PredSymbol::setVar(m)),
      pred->indVar(), ty);
  std::size_t step = fn.derive(tmpl, {Pair{PredSymbol::setVar(m), PredLambda{y, psi}, sym, h, w}},
                               gamma, delta);
  RuleInstance x = rule(RuleTag::Xind, it);
  x.invariant = psi;
  x.eigen = y;
  std::size_t root = b.add(conc, x, {step, leaf});
  return b.finish(root, Mode::Finitary, namesFor(sym, sym));
}

Fragment deriveIndFromN(const Formula& inv, const std::string& y, const Term& t,
                        const std::set<Formula>& gamma, const std::set<Formula>& delta) {
  Builder b;
  std::set<std::string> av = Sequent{gamma, delta}.freeVars();
  t.collectVars(av);
  Formula phi = inv;
  std::string var = y;
  if (av.count(y)) {
    av.insert(inv.freeVars().begin(), inv.freeVars().end());
    var = freshVar(av, y);
    phi = instantiate(inv, y, Term::var(var));
  }
  auto base = [&](const Sequent& s) { return b.add(s, rule(RuleTag::Open), {}, "base"); };
  auto step = [&](const Sequent& s) { return b.add(s, rule(RuleTag::Open), {}, "step"); };
  std::size_t root = indFromN(b, phi, var, t, gamma, delta, base, step);
  return b.finish(root, Mode::Cyclic, standardEnv());
}

Proof idToCid(const Proof& p) {
  if (p.mode != Mode::Finitary) throw Error(ErrorCode::Unsupported, "input is not a finitary proof");
  auto diags = checkProof(p);
  if (!diags.empty()) throw Error(ErrorCode::Unsupported, "input does not check: " + formatDiagnostic(diags.front()));

  Builder b;
  Functor fn(b, Mode::Cyclic);
  std::map<std::size_t, std::size_t> done;
  std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
    if (auto it = done.find(i); it != done.end()) return it->second;
    const ProofNode& n = p.nodes[i];
    std::vector<std::size_t> prem;
    for (auto q : n.premisses) prem.push_back(go(q));
    std::size_t out;
    const RuleInstance& r = n.rule;
    if (r.tag == RuleTag::Xind) {
      const Formula& it = *r.principal;
      IndPredPtr pred = it.pred().indPred();
      const std::string& y = *r.eigen;
      Term ty = Term::var(y);
      const Formula& psi = *r.invariant;
      const std::set<Formula>& gamma = n.seq.ant;
      const std::set<Formula>& delta = n.seq.suc;
      Formula iy = Formula::atom(PredSymbol::ind(pred), ty);
      Sequent gseq{with(gamma, iy), with(delta, psi)};
      std::size_t g = b.placeholder(gseq);
      Formula chi = unfoldBody(*pred, PredLambda{y, psi}, ty);
      Formula uy = unfold(pred, ty);
      std::string m = fn.marker();
      Formula tmpl = instantiate(
          replacePred(pred->body(), PredSymbol::setVar(pred->setVar()), PredSymbol::setVar(m)),
          pred->indVar(), ty);
      std::size_t mono = fn.derive(tmpl, {Pair{PredSymbol::setVar(m), PredSymbol::ind(pred),
                                               PredLambda{y, psi}, g, y}},
                                   gamma, with(delta, psi));
      std::size_t stepUse = b.weakenTo(Sequent{with(gamma, uy, chi), gseq.suc}, prem[0]);
      std::size_t inner = b.add(Sequent{with(gamma, uy), gseq.suc}, rule(RuleTag::Cut, chi), {mono, stepUse});
      b.fill(g, rule(RuleTag::Idl, iy), {inner});
      Formula psiT = instantiate(psi, y, it.term(0));
      std::size_t left = b.substTo(Substitution{{y, it.term(0)}}, g);
      std::size_t right = b.weakenTo(Sequent{with(gamma, psiT), delta}, prem[1]);
      out = b.add(n.seq, rule(RuleTag::Cut, psiT), {left, right}, n.label);
    } else if (r.tag == RuleTag::IndPA) {
      auto base = [&](const Sequent& s) { return b.weakenTo(s, prem[0]); };
      auto step = [&](const Sequent& s) { return b.weakenTo(s, prem[1]); };
      out = indFromN(b, *r.invariant, *r.eigen, *r.term, n.seq.ant, n.seq.suc, base, step);
    } else {
      out = b.add(n.seq, r, prem, n.label);
    }
    done.emplace(i, out);
    return out;
  };
  std::size_t root = go(p.root);
  std::vector<std::string> comments = p.comments;
  comments.push_back("cyclic translation; contexts are threaded through generated loops by weakening");
  return b.finish(root, Mode::Cyclic, p.preds, comments).proof;
}

Proof graft(const Proof& fragment, const std::string& label, const Proof& sub) {
  std::size_t leaf = fragment.find(label);
  if (leaf == Proof::npos || fragment.nodes[leaf].rule.tag != RuleTag::Open)
    throw Error(ErrorCode::Unsupported, "no open leaf " + label);
  const Sequent& want = fragment.nodes[leaf].seq;
  const Sequent& have = sub.nodes[sub.root].seq;
  auto contained = [](const std::set<Formula>& a, const std::set<Formula>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  if (!contained(have.ant, want.ant) || !contained(have.suc, want.suc))
    throw Error(ErrorCode::Unsupported, "grafted root does not fit leaf " + label);

  Proof out = fragment;
  if (sub.mode == Mode::Cyclic) out.mode = Mode::Cyclic;
  for (const auto& [name, pred] : sub.preds) out.preds.emplace(name, pred);
  std::set<std::string> used;
  for (const auto& n : out.nodes) used.insert(n.label);
  std::size_t offset = out.nodes.size();
  for (const auto& n : sub.nodes) {
    ProofNode c = n;
    while (used.count(c.label)) c.label += "_g";
    used.insert(c.label);
    for (auto& q : c.premisses) q += offset;
    out.nodes.push_back(std::move(c));
  }
  ProofNode& l = out.nodes[leaf];
  l.rule = rule(RuleTag::Weaken);
  l.premisses = {offset + sub.root};
  return out;
}

}  // namespace cidk

#include "semantics.hpp"

#include <algorithm>
#include <random>

namespace cidk {

std::vector<std::uint64_t> ApproximantTable::fixpoint() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 0; v <= bound; ++v)
    if (entryStage[v] >= 0) out.push_back(v);
  return out;
}

std::uint64_t evalTerm(const Assignment& rho, const Term& t) {
  auto overflow = [] { return Error(ErrorCode::Unsupported, "arithmetic overflow"); };
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = rho.find(t.name());
      if (it == rho.end())
        throw Error(ErrorCode::UnassignedVariable, "variable " + t.name() + " is unassigned");
      return it->second;
    }
    case TermKind::Zero: return 0;
    case TermKind::Succ: {
      std::uint64_t a = evalTerm(rho, t.arg(0));
      if (a == UINT64_MAX) throw overflow();
      return a + 1;
    }
    case TermKind::Plus: {
      std::uint64_t a = evalTerm(rho, t.arg(0)), b = evalTerm(rho, t.arg(1)), r;
      if (__builtin_add_overflow(a, b, &r)) throw overflow();
      return r;
    }
    case TermKind::Times: {
      std::uint64_t a = evalTerm(rho, t.arg(0)), b = evalTerm(rho, t.arg(1)), r;
      if (__builtin_mul_overflow(a, b, &r)) throw overflow();
      return r;
    }
  }
  return 0;
}

namespace {

/// Interpretation of a set variable: membership within {0..B}, with an
/// exactness flag per element, and a default (always inexact) above B.
struct SetInterp {
  std::vector<bool> in;
  std::vector<bool> exact;
  bool above = false;
};

bool succPlusOnly(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Zero: return true;
    case TermKind::Succ: return succPlusOnly(t.arg(0));
    case TermKind::Plus: return succPlusOnly(t.arg(0)) && succPlusOnly(t.arg(1));
    case TermKind::Times: return false;
  }
  return false;
}

bool assigned(const Term& t, const Assignment& rho) {
  std::set<std::string> vars;
  t.collectVars(vars);
  return std::all_of(vars.begin(), vars.end(), [&](const std::string& v) { return rho.count(v); });
}

void flatten(const Formula& f, FormulaKind kind, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    flatten(f.child(0), kind, out);
    flatten(f.child(1), kind, out);
  } else {
    out.push_back(f);
  }
}

class Evaluator {
 public:
  Evaluator(unsigned bound, const TableMap& tables) : bound_(bound), tables_(tables) {}

  std::map<std::string, SetInterp> sets;
  std::optional<std::pair<std::string, unsigned>> stage;

  Truth eval(const Formula& f, Assignment& rho) {
    switch (f.kind()) {
      case FormulaKind::Eq:
      case FormulaKind::Lt: {
        std::uint64_t a = evalTerm(rho, f.term(0)), b = evalTerm(rho, f.term(1));
        bool v = f.kind() == FormulaKind::Eq ? a == b : a < b;
        return {v != f.negated(), true};
      }
      case FormulaKind::Atom: {
        Truth t = atom(f.pred(), evalTerm(rho, f.term(0)));
        if (f.negated()) t.value = !t.value;
        return t;
      }
      case FormulaKind::Or:
      case FormulaKind::And: {
        bool isOr = f.kind() == FormulaKind::Or;
        Truth a = eval(f.child(0), rho);
        if (a.value == isOr && a.exact) return a;
        Truth b = eval(f.child(1), rho);
        if (b.value == isOr && b.exact) return b;
        bool value = isOr ? (a.value || b.value) : (a.value && b.value);
        bool exact = value == isOr ? false : (a.exact && b.exact);
        return {value, exact};
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        return quantifier(f, rho);
    }
    return {};
  }

 private:
  Truth atom(const PredSymbol& p, std::uint64_t v) {
    if (p.isSetVar()) {
      auto it = sets.find(p.setVarName());
      if (it == sets.end())
        throw Error(ErrorCode::UnassignedVariable,
                    "set variable " + p.setVarName() + " is uninterpreted");
      const SetInterp& s = it->second;
      if (v > bound_) return {s.above, false};
      return {static_cast<bool>(s.in[v]), static_cast<bool>(s.exact[v])};
    }
    auto it = tables_.find(p.indPred()->key());
    if (it == tables_.end())
      throw Error(ErrorCode::MissingTable, "no approximant table for " + p.displayName());
    const ApproximantTable& t = it->second;
    if (v > bound_ || v > t.bound) return {false, false};
    int entry = t.entryStage[v];
    bool member = entry >= 0;
    if (stage && stage->first == p.indPred()->key())
      member = member && static_cast<unsigned>(entry) <= stage->second;
    if (member || entry >= 0) return {member, static_cast<bool>(t.entryExact[v])};
    return {false, t.negExact};
  }

  /// Upper limit on the bound variable implied by a guard, if any. An empty
  /// range is reported as -1.
  std::optional<long long> guard(const Formula& f, Assignment& rho) {
    bool ex = f.kind() == FormulaKind::Exists;
    const std::string& y = f.var();
    std::vector<Formula> parts;
    flatten(f.child(0), ex ? FormulaKind::And : FormulaKind::Or, parts);
    std::optional<long long> cap;
    auto tighten = [&](long long c) { cap = cap ? std::min(*cap, c) : c; };
    for (const auto& c : parts) {
      if (c.negated() == ex) {
        // Existential guards are positive literals, universal ones negated.
        continue;
      }
      if (c.kind() == FormulaKind::Eq) {
        for (int side = 0; side < 2; ++side) {
          const Term& a = c.term(side);
          const Term& b = c.term(1 - side);
          if (!a.contains(y) && b.contains(y) && succPlusOnly(b) && assigned(a, rho))
            tighten(static_cast<long long>(std::min<std::uint64_t>(evalTerm(rho, a), 1ull << 40)));
        }
      } else if (c.kind() == FormulaKind::Lt) {
        const Term& a = c.term(0);
        const Term& b = c.term(1);
        if (a.kind() == TermKind::Var && a.name() == y && !b.contains(y) && assigned(b, rho))
          tighten(static_cast<long long>(std::min<std::uint64_t>(evalTerm(rho, b), 1ull << 40)) -
                  1);
      }
    }
    return cap;
  }

  Truth quantifier(const Formula& f, Assignment& rho) {
    bool ex = f.kind() == FormulaKind::Exists;
    const std::string& y = f.var();
    auto cap = guard(f, rho);
    long long hi = static_cast<long long>(bound_);
    bool clipped = true;
    if (cap && *cap <= hi) {
      hi = *cap;
      clipped = false;
    }
    std::optional<std::uint64_t> saved;
    if (auto it = rho.find(y); it != rho.end()) saved = it->second;
    bool any = false, allExact = true;
    Truth result{!ex, true};
    bool decided = false;
    for (long long v = 0; v <= hi; ++v) {
      rho[y] = static_cast<std::uint64_t>(v);
      Truth t = eval(f.child(0), rho);
      if (t.value == ex) {
        any = true;
        if (t.exact) {
          result = {ex, true};
          decided = true;
          break;
        }
      }
      allExact = allExact && t.exact;
    }
    if (saved) rho[y] = *saved;
    else rho.erase(y);
    if (decided) return result;
    if (any) return {ex, false};
    return {!ex, allExact && !clipped};
  }

  unsigned bound_;
  const TableMap& tables_;
};

}  // namespace

Truth evalFormula(const Assignment& rho, const Formula& f, unsigned bound, const TableMap& tables) {
  Evaluator ev(bound, tables);
  Assignment r = rho;
  return ev.eval(f, r);
}

Truth evalFormulaAtStage(const Assignment& rho, const Formula& f, unsigned bound,
                         const TableMap& tables, const IndPredPtr& pred, unsigned stage) {
  Evaluator ev(bound, tables);
  ev.stage = std::make_pair(pred->key(), stage);
  Assignment r = rho;
  return ev.eval(f, r);
}

namespace {

Truth evalBody(const IndPred& pred, const SetInterp& x, std::uint64_t m, unsigned bound,
               const TableMap& tables) {
  Evaluator ev(bound, tables);
  ev.sets[pred.setVar()] = x;
  Assignment rho{{pred.indVar(), m}};
  return ev.eval(pred.body(), rho);
}

SetInterp exactSet(const std::vector<bool>& a, bool above = false) {
  return {a, std::vector<bool>(a.size(), true), above};
}

}  // namespace

ApproximantTable approximantIterate(const IndPredPtr& pred, unsigned bound,
                                    const TableMap& tables) {
  ApproximantTable t;
  t.pred = pred;
  t.bound = bound;
  t.entryStage.assign(bound + 1, -1);
  t.entryExact.assign(bound + 1, true);
  t.stages.push_back(std::vector<bool>(bound + 1, false));
  for (unsigned k = 1;; ++k) {
    const std::vector<bool>& prev = t.stages.back();
    SetInterp x{prev, t.entryExact, false};
    std::vector<bool> next = prev;
    bool changed = false;
    for (std::uint64_t m = 0; m <= bound; ++m) {
      if (prev[m]) continue;
      Truth r = evalBody(*pred, x, m, bound, tables);
      if (r.value) {
        next[m] = true;
        t.entryStage[m] = static_cast<int>(k);
        t.entryExact[m] = r.exact;
        changed = true;
      }
    }
    if (!changed) break;
    t.stages.push_back(std::move(next));
  }
  // Non-members are exact when the fixpoint plus everything above the bound
  // is already closed under the operator.
  SetInterp over = exactSet(t.stages.back(), true);
  t.negExact = true;
  for (std::uint64_t m = 0; m <= bound && t.negExact; ++m) {
    if (t.stages.back()[m]) continue;
    Truth r = evalBody(*pred, over, m, bound, tables);
    if (r.value || !r.exact) t.negExact = false;
  }
  return t;
}

void ensureTables(TableMap& tables, const IndPredPtr& pred, unsigned bound) {
  auto it = tables.find(pred->key());
  if (it != tables.end() && it->second.bound == bound) return;
  for (const auto& d : pred->dependencies()) ensureTables(tables, d, bound);
  tables[pred->key()] = approximantIterate(pred, bound, tables);
}

void ensureTables(TableMap& tables, const std::vector<Formula>& fs, unsigned bound) {
  for (const auto& p : indPredClosure(fs)) ensureTables(tables, p, bound);
}

std::vector<ProfileEntry> closureProfile(const ApproximantTable& table) {
  std::vector<ProfileEntry> out;
  for (unsigned k = 1; k < table.stages.size(); ++k) {
    ProfileEntry e{k, {}};
    for (std::uint64_t v = 0; v <= table.bound; ++v)
      if (table.entryStage[v] == static_cast<int>(k)) e.entered.push_back(v);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<bool> applyOperator(const IndPredPtr& pred, const std::vector<bool>& a, unsigned bound,
                                const TableMap& tables, bool* exact) {
  SetInterp x = exactSet(a);
  std::vector<bool> out(bound + 1, false);
  for (std::uint64_t m = 0; m <= bound; ++m) {
    Truth r = evalBody(*pred, x, m, bound, tables);
    out[m] = r.value;
    if (exact && !r.exact) *exact = false;
  }
  return out;
}

namespace {

std::vector<bool> fromMask(std::uint64_t mask, unsigned bound) {
  std::vector<bool> out(bound + 1);
  for (unsigned i = 0; i <= bound; ++i) out[i] = (mask >> i) & 1u;
  return out;
}

bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

std::string showSet(const std::vector<bool>& a) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) {
      out += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
  return out + "}";
}

}  // namespace

FixpointReport fixpointLaws(const IndPredPtr& pred, unsigned bound, const TableMap& tables,
                            unsigned seed) {
  FixpointReport rep;
  auto it = tables.find(pred->key());
  if (it == tables.end())
    throw Error(ErrorCode::MissingTable, "no approximant table for " + pred->displayName());
  const std::vector<bool>& fix = it->second.stages.back();
  auto F = [&](const std::vector<bool>& a) {
    return applyOperator(pred, a, bound, tables, &rep.exact);
  };
  auto violation = [&](std::string what) {
    rep.ok = false;
    if (rep.violations.size() < 16) rep.violations.push_back(std::move(what));
  };

  if (F(fix) != fix) violation("F(fix) != fix");

  std::mt19937_64 rng(seed);
  constexpr std::size_t kSamples = 2000;
  auto randomSet = [&] {
    std::vector<bool> a(bound + 1);
    for (unsigned i = 0; i <= bound; ++i) a[i] = rng() & 1u;
    return a;
  };

  auto checkPreFixed = [&](const std::vector<bool>& a) {
    ++rep.preFixedChecked;
    if (subset(F(a), a) && !subset(fix, a)) violation("pre-fixed " + showSet(a) + " misses fix");
  };
  if (bound <= 12) {
    rep.exhaustivePreFixed = true;
    for (std::uint64_t mask = 0; mask < (1ull << (bound + 1)); ++mask)
      checkPreFixed(fromMask(mask, bound));
  } else {
    for (std::size_t i = 0; i < kSamples; ++i) checkPreFixed(randomSet());
  }

  auto checkMonotone = [&](const std::vector<bool>& a, const std::vector<bool>& b) {
    ++rep.monotonePairsChecked;
    if (!subset(F(a), F(b))) violation("F not monotone on " + showSet(a) + " <= " + showSet(b));
  };
  if (bound <= 6) {
    rep.exhaustiveMonotone = true;
    std::uint64_t full = (1ull << (bound + 1)) - 1;
    for (std::uint64_t b = 0; b <= full; ++b)
      for (std::uint64_t a = b;; a = (a - 1) & b) {
        checkMonotone(fromMask(a, bound), fromMask(b, bound));
        if (a == 0) break;
      }
  } else {
    for (std::size_t i = 0; i < kSamples; ++i) {
      auto b = randomSet();
      auto a = b;
      for (unsigned j = 0; j <= bound; ++j)
        if (a[j] && (rng() & 1u)) a[j] = false;
      checkMonotone(a, b);
    }
  }
  return rep;
}

Truth sequentValue(const Sequent& s, const Assignment& rho, unsigned bound, const TableMap& tables) {
  Truth acc{false, true};
  bool anyExactTrue = false;
  auto add = [&](Truth t) {
    if (t.value && t.exact) anyExactTrue = true;
    acc.value = acc.value || t.value;
    acc.exact = acc.exact && t.exact;
  };
  for (const auto& f : s.ant) {
    Truth t = evalFormula(rho, f, bound, tables);
    add({!t.value, t.exact});
    if (anyExactTrue) return {true, true};
  }
  for (const auto& f : s.suc) {
    add(evalFormula(rho, f, bound, tables));
    if (anyExactTrue) return {true, true};
  }
  if (acc.value) acc.exact = false;
  return acc;
}

SequentTruth sequentTruth(const Sequent& s, unsigned bound, const TableMap& tables) {
  std::vector<std::string> vars;
  for (const auto& v : s.freeVars()) vars.push_back(v);
  SequentTruth out;
  Assignment rho;
  for (const auto& v : vars) rho[v] = 0;
  bool anyExactFalse = false, anyFalse = false, allExact = true;
  while (true) {
    Truth t = sequentValue(s, rho, bound, tables);
    if (!t.value) {
      if (!anyFalse || (t.exact && !anyExactFalse)) out.counterexample = rho;
      anyFalse = true;
      if (t.exact) anyExactFalse = true;
    }
    allExact = allExact && t.exact;
    if (anyExactFalse) break;
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (rho[vars[i]] < bound) {
        ++rho[vars[i]];
        break;
      }
      rho[vars[i]] = 0;
    }
    if (i == vars.size()) break;
  }
  out.value = !anyFalse;
  out.exact = anyExactFalse || (!anyFalse && allExact);
  if (!anyFalse) out.counterexample.reset();
  return out;
}

std::uint64_t cantorPair(std::uint64_t a, std::uint64_t b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

std::pair<std::uint64_t, std::uint64_t> cantorUnpair(std::uint64_t z) {
  std::uint64_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  std::uint64_t b = z - w * (w + 1) / 2;
  return {w - b, b};
}

}  // namespace cidk

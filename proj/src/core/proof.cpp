#include "proof.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace cidk {

std::size_t Proof::find(const std::string& label) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].label == label) return i;
  return npos;
}

bool Proof::hasCycle() const {
  enum { White, Grey, Black };
  std::vector<int> colour(nodes.size(), White);
  std::function<bool(std::size_t)> visit = [&](std::size_t v) {
    colour[v] = Grey;
    for (std::size_t c : nodes[v].premisses) {
      if (c >= nodes.size()) continue;
      if (colour[c] == Grey) return true;
      if (colour[c] == White && visit(c)) return true;
    }
    colour[v] = Black;
    return false;
  };
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (colour[v] == White && visit(v)) return true;
  return false;
}

std::vector<std::size_t> Proof::reachable() const {
  std::vector<std::size_t> order;
  if (root >= nodes.size()) return order;
  std::vector<bool> seen(nodes.size(), false);
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    order.push_back(v);
    const auto& ps = nodes[v].premisses;
    for (auto it = ps.rbegin(); it != ps.rend(); ++it)
      if (*it < nodes.size() && !seen[*it]) stack.push_back(*it);
  }
  return order;
}

//------------------------------------------------------------------------------
// Parsing

namespace {

const std::set<std::string> kReserved = {"not", "or", "and", "ex", "all", "ind", "s"};

std::set<Formula> parseCedent(Reader& r, PredEnv& env) {
  std::set<Formula> out;
  r.expect("[");
  if (r.accept("]")) return out;
  do {
    out.insert(r.formula(env));
  } while (r.accept(","));
  r.expect("]");
  return out;
}

struct PendingNode {
  ProofNode node;
  std::vector<std::string> premissLabels;
  std::optional<std::string> predName;
  int line = 0;
};

void parseParams(Reader& r, PredEnv& env, PendingNode& pn) {
  RuleInstance& rule = pn.node.rule;
  if (r.accept("}")) return;
  do {
    std::string key = r.ident();
    r.expect("=");
    if (key == "f") {
      rule.principal = r.formula(env);
    } else if (key == "inv") {
      rule.invariant = r.formula(env);
    } else if (key == "template") {
      rule.pattern = r.formula(env);
    } else if (key == "t") {
      rule.term = r.term();
    } else if (key == "y") {
      rule.eigen = r.ident();
    } else if (key == "index") {
      rule.index = r.number();
    } else if (key == "pred") {
      pn.predName = r.ident();
    } else if (key == "theta") {
      r.expect("{");
      if (!r.accept("}")) {
        do {
          std::string v = r.ident();
          r.expect(":=");
          rule.theta.insert_or_assign(v, r.term());
        } while (r.accept(","));
        r.expect("}");
      }
    } else {
      r.fail("unknown parameter '" + key + "'");
    }
  } while (r.accept(","));
  r.expect("}");
}

}  // namespace

Proof parseProof(std::string_view text) {
  Proof proof;
  PredEnv env;
  std::optional<Mode> mode;
  std::optional<std::string> rootLabel;
  std::vector<PendingNode> pending;

  std::size_t start = 0;
  int lineNo = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineNo;
    start = end + 1;

    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] == '#') {
      std::string_view c = line.substr(first + 1);
      if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) c.remove_suffix(1);
      proof.comments.emplace_back(c);
      continue;
    }
    Reader r(line, lineNo, 1);
    if (r.atEnd()) {
      if (end == text.size()) break;
      continue;
    }
    if (r.accept("mode")) {
      r.expect(":");
      std::string m = r.ident();
      if (m == "finitary") mode = Mode::Finitary;
      else if (m == "cyclic") mode = Mode::Cyclic;
      else r.fail("unknown mode '" + m + "'");
    } else if (r.accept("root")) {
      r.expect(":");
      rootLabel = r.ident();
    } else if (r.accept("ind")) {
      std::string name = r.ident();
      if (kReserved.count(name)) r.fail("reserved name '" + name + "'");
      r.expect(":=");
      r.expect("(");
      std::string setVar = r.ident();
      r.expect(",");
      std::string indVar = r.ident();
      r.expect(",");
      Formula body = r.formula(env);
      r.expect(")");
      try {
        env[name] = mkIndPred(body, setVar, indVar, name);
      } catch (const Error& e) {
        r.fail(e.what());
      }
    } else {
      PendingNode pn;
      pn.line = lineNo;
      r.accept("node");
      pn.node.label = r.ident();
      r.expect(":");
      std::string tag = r.ident();
      auto parsed = ruleTagFromString(tag);
      if (!parsed) r.fail("unknown rule tag '" + tag + "'");
      pn.node.rule.tag = *parsed;
      if (r.accept("{")) parseParams(r, env, pn);
      if (r.accept("seq")) r.expect(":");
      pn.node.seq.ant = parseCedent(r, env);
      r.expect("=>");
      pn.node.seq.suc = parseCedent(r, env);
      bool keyword = r.accept("premisses");
      if (keyword) r.expect(":");
      if (keyword || r.peek("[")) {
        r.expect("[");
        if (!r.accept("]")) {
          do {
            pn.premissLabels.push_back(r.ident());
          } while (r.accept(","));
          r.expect("]");
        }
      }
      if (!r.atEnd()) r.fail("trailing input");
      if (pn.predName) {
        auto it = env.find(*pn.predName);
        const auto& f = pn.node.rule.principal;
        if (it == env.end()) r.fail("unknown predicate '" + *pn.predName + "'");
        if (!f || f->kind() != FormulaKind::Atom || !f->pred().isInd() ||
            f->pred().indPred()->key() != it->second->key())
          r.fail("pred=" + *pn.predName + " does not match the principal formula");
      }
      pending.push_back(std::move(pn));
    }
    if (end == text.size()) break;
  }

  if (pending.empty()) throw Error(ErrorCode::Parse, "no proof nodes");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!index.emplace(pending[i].node.label, i).second)
      throw Error(ErrorCode::Parse, "line " + std::to_string(pending[i].line) +
                                        ": duplicate label '" + pending[i].node.label + "'");
  }
  for (auto& pn : pending) {
    for (const auto& l : pn.premissLabels) {
      auto it = index.find(l);
      if (it == index.end())
        throw Error(ErrorCode::Parse, "line " + std::to_string(pn.line) +
                                          ": unknown premiss label '" + l + "'");
      pn.node.premisses.push_back(it->second);
    }
    proof.nodes.push_back(std::move(pn.node));
  }
  if (rootLabel) {
    auto it = index.find(*rootLabel);
    if (it == index.end()) throw Error(ErrorCode::Parse, "unknown root label '" + *rootLabel + "'");
    proof.root = it->second;
  }
  proof.preds = env;
  proof.mode = mode ? *mode : (proof.hasCycle() ? Mode::Cyclic : Mode::Finitary);
  return proof;
}

Proof loadProof(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parseProof(buf.str());
}

//------------------------------------------------------------------------------
// Printing

namespace {

void collectFormulas(const Proof& p, std::vector<Formula>& out) {
  for (const auto& n : p.nodes) {
    out.insert(out.end(), n.seq.ant.begin(), n.seq.ant.end());
    out.insert(out.end(), n.seq.suc.begin(), n.seq.suc.end());
    for (const auto* f : {&n.rule.principal, &n.rule.invariant, &n.rule.pattern})
      if (*f) out.push_back(**f);
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "P" + out;
  return out;
}

}  // namespace

std::vector<PredDecl> predDeclarations(const Proof& p) {
  std::vector<Formula> formulas;
  collectFormulas(p, formulas);
  std::map<std::string, std::string> byKey;
  for (const auto& [name, pred] : p.preds) byKey.emplace(pred->key(), name);

  std::vector<PredDecl> out;
  std::set<std::string> taken;
  for (const auto& pred : indPredClosure(formulas)) {
    std::string name;
    auto it = byKey.find(pred->key());
    if (it != byKey.end() && !taken.count(it->second)) {
      name = it->second;
    } else {
      std::string base = sanitize(pred->displayName());
      name = base;
      for (unsigned k = 1; taken.count(name) || kReserved.count(name); ++k)
        name = base + "_" + std::to_string(k);
    }
    taken.insert(name);
    out.push_back({name, pred});
  }
  return out;
}

PredNames predNames(const Proof& p) {
  PredNames names;
  for (const auto& d : predDeclarations(p)) names[d.pred->key()] = d.name;
  return names;
}

std::string printSequent(const Sequent& s, const PredNames& names) {
  auto cedent = [&](const std::set<Formula>& fs) {
    std::string out = "[";
    bool first = true;
    for (const auto& f : fs) {
      if (!first) out += ", ";
      first = false;
      out += printFormula(f, names);
    }
    return out + "]";
  };
  return cedent(s.ant) + " => " + cedent(s.suc);
}

namespace {

std::string printParams(const RuleInstance& r, const PredNames& names) {
  std::vector<std::string> parts;
  if (r.principal) parts.push_back("f=" + printFormula(*r.principal, names));
  if (r.term) parts.push_back("t=" + printTerm(*r.term));
  if (r.eigen) parts.push_back("y=" + *r.eigen);
  if (r.tag == RuleTag::Subst) {
    std::string t = "theta={";
    bool first = true;
    for (const auto& [v, term] : r.theta) {
      if (!first) t += ", ";
      first = false;
      t += v + ":=" + printTerm(term);
    }
    parts.push_back(t + "}");
  }
  if (r.invariant) parts.push_back("inv=" + printFormula(*r.invariant, names));
  if (r.pattern) parts.push_back("template=" + printFormula(*r.pattern, names));
  if (r.index) parts.push_back("index=" + std::to_string(*r.index));
  if ((r.tag == RuleTag::Idl || r.tag == RuleTag::Idr || r.tag == RuleTag::Xind) &&
      r.principal && r.principal->kind() == FormulaKind::Atom && r.principal->pred().isInd()) {
    auto it = names.find(r.principal->pred().indPred()->key());
    if (it != names.end()) parts.push_back("pred=" + it->second);
  }
  if (parts.empty()) return "";
  std::string out = " {";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + "}";
}

}  // namespace

std::string serializeProof(const Proof& p) {
  std::ostringstream out;
  for (const auto& c : p.comments) out << "# " << c << "\n";
  out << "mode: " << toString(p.mode) << "\n";
  PredNames names;
  for (const auto& d : predDeclarations(p)) {
    out << "ind " << d.name << " := " << printIndBody(*d.pred, names) << "\n";
    names[d.pred->key()] = d.name;
  }
  if (p.root < p.nodes.size()) out << "root: " << p.nodes[p.root].label << "\n";
  for (const auto& n : p.nodes) {
    out << "node " << n.label << ": " << toString(n.rule.tag) << printParams(n.rule, names)
        << " seq: " << printSequent(n.seq, names) << " premisses: [";
    for (std::size_t i = 0; i < n.premisses.size(); ++i)
      out << (i ? ", " : "") << p.nodes[n.premisses[i]].label;
    out << "]\n";
  }
  return out.str();
}

//------------------------------------------------------------------------------
// Checking

std::vector<Diagnostic> checkProof(const Proof& p, bool allowOpen) {
  std::vector<Diagnostic> out;
  auto report = [&](std::size_t v, const std::string& kind, const std::string& detail) {
    out.push_back({v, p.nodes[v].label, toString(p.nodes[v].rule.tag), kind, detail});
  };
  if (p.root >= p.nodes.size()) {
    out.push_back({Proof::npos, "", "", "NoRoot", "root index out of range"});
    return out;
  }
  std::vector<bool> reached(p.nodes.size(), false);
  for (std::size_t v : p.reachable()) reached[v] = true;

  for (std::size_t v = 0; v < p.nodes.size(); ++v) {
    const auto& n = p.nodes[v];
    if (!reached[v]) report(v, "Unreachable", "node is not reachable from the root");
    if (n.rule.tag == RuleTag::Open && !allowOpen)
      report(v, "OpenLeaf", "hypothesis leaf in a closed proof");
    std::vector<Sequent> prem;
    for (std::size_t c : n.premisses) prem.push_back(p.nodes[c].seq);
    if (auto e = checkStep(n.seq, n.rule, prem, p.mode)) report(v, toString(e->kind), e->detail);
  }

  if (p.mode == Mode::Finitary && p.hasCycle())
    out.push_back({p.root, p.nodes[p.root].label, toString(p.nodes[p.root].rule.tag),
                   "CycleInFinitaryProof", "finitary proofs must be acyclic"});

  // Every cycle needs a step that is not a substitution.
  Proof substOnly = p;
  for (auto& n : substOnly.nodes)
    if (n.rule.tag != RuleTag::Subst) n.premisses.clear();
  if (substOnly.hasCycle())
    out.push_back({p.root, p.nodes[p.root].label, toString(p.nodes[p.root].rule.tag),
                   "SubstCycle", "a cycle consists of substitution steps only"});
  return out;
}

std::string formatDiagnostic(const Diagnostic& d) {
  return d.label + " (" + d.tag + "): " + d.kind + ": " + d.detail;
}

//------------------------------------------------------------------------------
// Unrolling

namespace {

TreeNode openLeaf(std::size_t source, Sequent seq) {
  TreeNode t;
  t.source = source;
  t.seq = std::move(seq);
  t.rule.tag = RuleTag::Open;
  return t;
}

TreeNode unfoldFrom(const Proof& p, std::size_t v, unsigned d, unsigned depth) {
  const auto& n = p.nodes[v];
  if (d > depth) return openLeaf(v, n.seq);
  TreeNode t;
  t.source = v;
  t.seq = n.seq;
  t.rule = n.rule;
  for (std::size_t c : n.premisses) t.children.push_back(unfoldFrom(p, c, d + 1, depth));
  return t;
}

std::set<std::string> rangeVars(const Substitution& s) {
  std::set<std::string> out;
  for (const auto& [v, t] : s) t.collectVars(out);
  return out;
}

Substitution restrict(const Substitution& s, const std::set<std::string>& vars) {
  Substitution out;
  for (const auto& [v, t] : s)
    if (vars.count(v) && !(t.kind() == TermKind::Var && t.name() == v)) out.insert_or_assign(v, t);
  return out;
}

std::set<std::string> paramVars(const RuleInstance& r) {
  std::set<std::string> out;
  if (r.principal) out.insert(r.principal->freeVars().begin(), r.principal->freeVars().end());
  if (r.invariant) out.insert(r.invariant->freeVars().begin(), r.invariant->freeVars().end());
  if (r.pattern) {
    for (const auto& v : r.pattern->freeVars())
      if (v != kHoleU && v != kHoleV) out.insert(v);
  }
  if (r.term) r.term->collectVars(out);
  if (r.eigen) out.insert(*r.eigen);
  return out;
}

RuleInstance substRule(const RuleInstance& r, const Substitution& s) {
  RuleInstance out = r;
  if (r.principal) out.principal = applySubst(s, *r.principal);
  if (r.invariant) out.invariant = applySubst(s, *r.invariant);
  if (r.term) out.term = applySubst(s, *r.term);
  if (r.pattern) {
    Substitution noHoles = s;
    noHoles.erase(kHoleU);
    noHoles.erase(kHoleV);
    auto range = rangeVars(noHoles);
    if (range.count(kHoleU) || range.count(kHoleV))
      throw Error(ErrorCode::Unsupported, "substitution captures an eqL template hole");
    out.pattern = applySubst(noHoles, *r.pattern);
  }
  if (r.eigen) {
    auto it = s.find(*r.eigen);
    if (it != s.end()) out.eigen = it->second.name();
  }
  return out;
}

TreeNode eliminateFrom(const Proof& p, std::size_t v, Substitution sigma, unsigned d,
                       unsigned depth) {
  std::set<std::size_t> chain;
  while (p.nodes[v].rule.tag == RuleTag::Subst) {
    if (!chain.insert(v).second)
      throw Error(ErrorCode::Unsupported, "cycle of substitution steps");
    const auto& n = p.nodes[v];
    std::size_t c = n.premisses.at(0);
    Substitution next;
    for (const auto& z : p.nodes[c].seq.freeVars()) {
      Term image = applySubst(sigma, applySubst(n.rule.theta, Term::var(z)));
      if (!(image.kind() == TermKind::Var && image.name() == z)) next.insert_or_assign(z, image);
    }
    sigma = std::move(next);
    v = c;
  }
  const auto& n = p.nodes[v];
  std::set<std::string> conclVars = n.seq.freeVars();
  Substitution sr = restrict(sigma, conclVars);
  Sequent seq = applySubst(sr, n.seq);
  if (d > depth) return openLeaf(v, seq);

  // Variables introduced above this step must not clash with the image.
  std::set<std::string> fresh = paramVars(n.rule);
  for (std::size_t c : n.premisses) {
    auto fv = p.nodes[c].seq.freeVars();
    fresh.insert(fv.begin(), fv.end());
  }
  for (const auto& z : conclVars) fresh.erase(z);
  std::set<std::string> avoid = seq.freeVars();
  auto range = rangeVars(sr);
  avoid.insert(range.begin(), range.end());
  avoid.insert(fresh.begin(), fresh.end());
  avoid.insert(conclVars.begin(), conclVars.end());
  Substitution sp = sr;
  std::set<std::string> clash = seq.freeVars();
  clash.insert(range.begin(), range.end());
  for (const auto& z : fresh) {
    if (!clash.count(z)) continue;
    std::string base = z;
    while (base.size() > 1 && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
    std::string z2 = freshVar(avoid, base);
    avoid.insert(z2);
    sp.insert_or_assign(z, Term::var(z2));
  }

  TreeNode t;
  t.source = v;
  t.seq = std::move(seq);
  t.rule = substRule(n.rule, sp);
  for (std::size_t c : n.premisses) t.children.push_back(eliminateFrom(p, c, sp, d + 1, depth));
  return t;
}

}  // namespace

TreeNode unfold(const Proof& p, unsigned depth) { return unfoldFrom(p, p.root, 0, depth); }

TreeNode eliminateSubstPrefix(const Proof& p, unsigned depth) {
  return eliminateFrom(p, p.root, {}, 0, depth);
}

std::size_t treeSize(const TreeNode& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += treeSize(c);
  return n;
}

Proof treeToProof(const TreeNode& t, Mode mode, const PredEnv& preds) {
  Proof p;
  p.mode = mode;
  p.preds = preds;
  std::function<std::size_t(const TreeNode&)> add = [&](const TreeNode& n) {
    std::size_t id = p.nodes.size();
    p.nodes.push_back({"t" + std::to_string(id), n.seq, n.rule, {}});
    for (const auto& c : n.children) {
      std::size_t cid = add(c);
      p.nodes[id].premisses.push_back(cid);
    }
    return id;
  };
  p.root = add(t);
  return p;
}

std::string exportBudCompanion(const Proof& p) {
  PredNames names = predNames(p);
  std::ostringstream out;
  std::vector<bool> onPath(p.nodes.size(), false), done(p.nodes.size(), false);
  std::function<void(std::size_t, int)> visit = [&](std::size_t v, int indent) {
    const auto& n = p.nodes[v];
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (onPath[v]) {
      out << pad << "bud -> " << n.label << "\n";
      return;
    }
    if (done[v]) {
      out << pad << "see " << n.label << "\n";
      return;
    }
    out << pad << n.label << " " << toString(n.rule.tag) << "  " << printSequent(n.seq, names)
        << "\n";
    onPath[v] = true;
    for (std::size_t c : n.premisses) visit(c, indent + 1);
    onPath[v] = false;
    done[v] = true;
  };
  if (p.root < p.nodes.size()) visit(p.root, 0);
  return out.str();
}

}  // namespace cidk

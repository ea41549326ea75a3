#include "doctest.h"

#include <fstream>
#include <functional>
#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "proof.hpp"

using namespace cidk;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool hasKind(const std::vector<Diagnostic>& ds, const std::string& kind) {
  for (const auto& d : ds)
    if (d.kind == kind) return true;
  return false;
}

const char* kTiny = R"(mode: finitary
root: a
node a: orR {f=or(N(x), E(x))} seq: [E(x)] => [or(N(x), E(x))] premisses: [b]
node b: id {f=E(x)} seq: [E(x)] => [N(x), E(x)] premisses: []
)";

}  // namespace

TEST_CASE("corpus entries check as expected") {
  for (const auto& e : corpus::all()) {
    CAPTURE(e.name);
    CHECK(checkProof(e.proof).empty() == e.checks);
  }
}

TEST_CASE("serialization is a fixed point of parsing") {
  for (const auto& e : corpus::all()) {
    CAPTURE(e.name);
    std::string text = serializeProof(e.proof);
    Proof back = parseProof(text);
    CHECK(serializeProof(back) == text);
    CHECK(back.nodes.size() == e.proof.nodes.size());
    CHECK(back.comments == e.proof.comments);
  }
}

TEST_CASE("corpus files are up to date") {
  for (const auto& e : corpus::all()) {
    CAPTURE(e.name);
    CHECK(slurp(std::string(CIDK_CORPUS_DIR) + "/" + e.name + ".proof") == serializeProof(e.proof));
  }
}

const char* corpusDecls = R"(ind N := (X, x, or(=(x, 0), ex y. and(X(y), =(x, s(y)))))
ind E := (X, x, or(=(x, 0), ex y. and(X(y), =(x, s(s(y))))))
)";

TEST_CASE("predicates are parsed from declarations and named on output") {
  Proof p = parseProof(kTiny);
  CHECK(p.nodes.size() == 2);
  CHECK(p.nodes[p.root].label == "a");
  CHECK(checkProof(p).empty());
  // proof files are self-contained: undeclared names are set variables
  CHECK(p.nodes[1].seq.ant.begin()->pred().isSetVar());
  std::string out = serializeProof(p);
  CHECK(out.find("ind ") == std::string::npos);
  CHECK(serializeProof(parseProof(out)) == out);

  Proof declared = parseProof(std::string(corpusDecls) + kTiny);
  bool hasN = false;
  for (const auto& f : declared.nodes[1].seq.suc) hasN = hasN || isNatPred(f.pred().indPred());
  CHECK(hasN);
  std::string text = serializeProof(declared);
  CHECK(text.find("ind N := ") != std::string::npos);
  CHECK(text.find("ind E := ") != std::string::npos);
}

TEST_CASE("malformed proof files") {
  auto parseCode = [](const std::string& text) -> std::optional<ErrorCode> {
    try {
      parseProof(text);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  std::string badRoot = kTiny;
  badRoot.replace(badRoot.find("root: a\n"), 8, "root: q\n");
  CHECK(parseCode(badRoot) == ErrorCode::Parse);
  std::string dangling = kTiny;
  dangling.replace(dangling.find("[b]"), 3, "[c]");
  CHECK(parseCode(dangling) == ErrorCode::Parse);
  std::string dup = std::string(kTiny) + "node b: id seq: [N(x)] => [N(x)] premisses: []\n";
  CHECK(parseCode(dup) == ErrorCode::Parse);
  CHECK(parseCode("mode: sideways\n") == ErrorCode::Parse);
  CHECK(parseCode(std::string(kTiny) + "node q: nope seq: [] => [] premisses: []\n") == ErrorCode::Parse);
  CHECK(parseCode("ind P := (X, x, not X(x))\n") == ErrorCode::Parse);
}

TEST_CASE("the root defaults to the first node") {
  std::string text = kTiny;
  text.replace(text.find("root: a\n"), 8, "");
  Proof p = parseProof(text);
  CHECK(p.nodes[p.root].label == "a");
}

TEST_CASE("structural diagnostics") {
  Proof p = parseProof(std::string(kTiny) + "node c: id seq: [N(x)] => [N(x)] premisses: []\n");
  auto ds = checkProof(p);
  CHECK(hasKind(ds, "Unreachable"));

  Proof cyc = corpus::eSubN();
  cyc.mode = Mode::Finitary;
  CHECK(hasKind(checkProof(cyc), "CycleInFinitaryProof"));

  Proof broken = corpus::mSubNBroken();
  auto bs = checkProof(broken);
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].label == "g0");
  CHECK(bs[0].kind == "SchemaMismatch");
  CHECK(formatDiagnostic(bs[0]).rfind("g0 (weaken): SchemaMismatch", 0) == 0);
}

TEST_CASE("open leaves are tolerated only on request") {
  Proof p = parseProof(kTiny);
  p.nodes[1].rule = RuleInstance{};
  p.nodes[1].rule.tag = RuleTag::Open;
  CHECK(hasKind(checkProof(p), "OpenLeaf"));
  CHECK(checkProof(p, true).empty());
}

TEST_CASE("unrolling matches a direct count of paths") {
  Proof m = corpus::mSubN();
  for (unsigned depth : {0u, 1u, 5u, 12u}) {
    CAPTURE(depth);
    TreeNode t = unfold(m, depth);
    std::map<std::size_t, std::size_t> seen;
    std::function<void(const TreeNode&)> count = [&](const TreeNode& n) {
      ++seen[n.source];
      for (const auto& c : n.children) count(c);
    };
    count(t);
    CHECK(seen == oracle::unrollCounts(m, depth));
    std::size_t total = 0;
    for (const auto& [_, k] : seen) total += k;
    CHECK(treeSize(t) == total);
  }
}

TEST_CASE("an unrolled tree is a proof with open leaves") {
  Proof m = corpus::mSubN();
  Proof t = treeToProof(unfold(m, 6), Mode::Cyclic, m.preds);
  CHECK_FALSE(t.hasCycle());
  CHECK(checkProof(t, true).empty());
  CHECK(t.nodes[t.root].seq == m.nodes[m.root].seq);
}

TEST_CASE("pushing substitutions into the unrolling") {
  Proof m = corpus::mSubN();
  TreeNode t = eliminateSubstPrefix(m, 8);
  std::size_t substs = 0;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    if (n.rule.tag == RuleTag::Subst) ++substs;
    for (const auto& c : n.children) walk(c);
  };
  walk(t);
  CHECK(substs == 0);
  Proof q = treeToProof(t, Mode::Cyclic, m.preds);
  CHECK(checkProof(q, true).empty());
  CHECK(q.nodes[q.root].seq == m.nodes[m.root].seq);
}

TEST_CASE("bud-companion export marks back-edges") {
  std::string s = exportBudCompanion(corpus::eSubN());
  CHECK(s.rfind("a0 idl", 0) == 0);
  CHECK(s.find("bud -> a0") != std::string::npos);
  CHECK(exportBudCompanion(corpus::eSubNFinitary()).find("bud") == std::string::npos);
}

TEST_CASE("reachability and cycles") {
  CHECK(corpus::mSubN().hasCycle());
  CHECK_FALSE(corpus::finitaryInd().hasCycle());
  Proof p = corpus::eSubN();
  auto r = p.reachable();
  CHECK(r.size() == p.nodes.size());
  CHECK(r.front() == p.root);
  CHECK(p.find("a6") != Proof::npos);
  CHECK(p.find("zz") == Proof::npos);
}

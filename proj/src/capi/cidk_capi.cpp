#include "cidk/cidk.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "semantics.hpp"
#include "trace.hpp"
#include "translate.hpp"

struct cidk_proof {
  cidk::Proof proof;
};

namespace {

thread_local std::string lastError;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

cidk_status fail(cidk_status status, const std::string& message) {
  lastError = message;
  return status;
}

cidk_status statusFor(const cidk::Error& e) {
  using cidk::ErrorCode;
  switch (e.code()) {
    case ErrorCode::Parse:
    case ErrorCode::UnassignedVariable:
    case ErrorCode::NotPositive:
    case ErrorCode::IllFormedBody:
      return CIDK_USAGE;
    case ErrorCode::BoundLimited:
      return CIDK_BOUND_LIMITED;
    case ErrorCode::RootNotFalse:
    case ErrorCode::PropertyViolated:
      return CIDK_CHECK_FAILED;
    default:
      return CIDK_INTERNAL;
  }
}

/// Runs `body`, translating exceptions into statuses.
template <typename F>
cidk_status guarded(F&& body) {
  lastError.clear();
  try {
    return body();
  } catch (const cidk::Error& e) {
    return fail(statusFor(e), e.what());
  } catch (const std::exception& e) {
    return fail(CIDK_INTERNAL, e.what());
  }
}

cidk::Assignment parseAssignment(const char* text) {
  cidk::Assignment rho;
  if (!text) return rho;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    std::string name = item.substr(0, eq);
    if (eq == std::string::npos || !cidk::isIdentifier(name) || eq + 1 == item.size() ||
        item.find_first_not_of("0123456789", eq + 1) != std::string::npos)
      throw cidk::Error(cidk::ErrorCode::Parse, "bad assignment item '" + item + "'");
    rho[name] = std::stoull(item.substr(eq + 1));
  }
  return rho;
}

cidk::PredEnv envFor(const cidk_proof* preds) {
  cidk::PredEnv env = cidk::standardEnv();
  if (preds)
    for (const auto& [name, p] : preds->proof.preds) env[name] = p;
  return env;
}

std::string showAssignment(const cidk::Assignment& rho) {
  std::string s = "{";
  bool first = true;
  for (const auto& [v, n] : rho) {
    if (!first) s += ", ";
    first = false;
    s += v + "=" + std::to_string(n);
  }
  return s + "}";
}

const char* exactness(bool exact) { return exact ? "exact" : "bound-limited"; }

}  // namespace

extern "C" {

const char* cidk_version(void) { return "0.1.0"; }

const char* cidk_last_error(void) { return lastError.c_str(); }

void cidk_string_free(char* s) { std::free(s); }

cidk_status cidk_proof_parse(const char* text, cidk_proof** out) {
  if (!text || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    *out = new cidk_proof{cidk::parseProof(text)};
    return CIDK_OK;
  });
}

cidk_status cidk_proof_load(const char* path, cidk_proof** out) {
  if (!path || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    *out = new cidk_proof{cidk::loadProof(path)};
    return CIDK_OK;
  });
}

void cidk_proof_free(cidk_proof* p) { delete p; }

size_t cidk_proof_node_count(const cidk_proof* p) { return p ? p->proof.nodes.size() : 0; }

int cidk_proof_is_cyclic(const cidk_proof* p) { return p && p->proof.hasCycle() ? 1 : 0; }

cidk_status cidk_proof_serialize(const cidk_proof* p, char** out) {
  if (!p || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    *out = dup(cidk::serializeProof(p->proof));
    return CIDK_OK;
  });
}

cidk_status cidk_proof_check(const cidk_proof* p, cidk_mode mode, int require_progress,
                             char** report) {
  if (!p) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    cidk::Proof proof = p->proof;
    if (mode == CIDK_MODE_FINITARY) proof.mode = cidk::Mode::Finitary;
    if (mode == CIDK_MODE_CYCLIC) proof.mode = cidk::Mode::Cyclic;
    std::ostringstream r;
    auto diags = cidk::checkProof(proof);
    for (const auto& d : diags) r << cidk::formatDiagnostic(d) << "\n";
    bool ok = diags.empty();
    if (proof.mode == cidk::Mode::Cyclic) {
      auto v = cidk::checkProgress(proof);
      if (v.progressing) {
        r << "progress: ok (" << v.witnesses.size() << " loops)\n";
      } else {
        r << "progress: violated\n" << cidk::formatLasso(proof, v.lasso) << "\n";
        if (require_progress) ok = false;
      }
    }
    r << (ok ? "ok" : "failed") << " (" << proof.nodes.size() << " nodes, "
      << cidk::toString(proof.mode) << ")\n";
    put(report, r.str());
    return ok ? CIDK_OK : fail(CIDK_CHECK_FAILED, "proof does not check");
  });
}

cidk_status cidk_proof_translate(const cidk_proof* in, cidk_proof** out, char** report) {
  if (!in || !out) return fail(CIDK_USAGE, "null argument");
  *out = nullptr;
  if (in->proof.mode != cidk::Mode::Finitary)
    return fail(CIDK_USAGE, "translation expects a finitary proof");
  return guarded([&] {
    std::ostringstream r;
    auto diags = cidk::checkProof(in->proof);
    if (!diags.empty()) {
      for (const auto& d : diags) r << cidk::formatDiagnostic(d) << "\n";
      r << "failed: input does not check\n";
      put(report, r.str());
      return fail(CIDK_CHECK_FAILED, "input does not check");
    }
    cidk::Proof q = cidk::idToCid(in->proof);
    auto outDiags = cidk::checkProof(q);
    for (const auto& d : outDiags) r << cidk::formatDiagnostic(d) << "\n";
    auto v = cidk::checkProgress(q);
    bool ok = outDiags.empty() && v.progressing;
    if (!v.progressing) r << "progress: violated\n" << cidk::formatLasso(q, v.lasso) << "\n";
    r << (ok ? "ok" : "failed") << " (" << in->proof.nodes.size() << " -> " << q.nodes.size()
      << " nodes)\n";
    *out = new cidk_proof{std::move(q)};
    put(report, r.str());
    return ok ? CIDK_OK : fail(CIDK_CHECK_FAILED, "translation does not check");
  });
}

cidk_status cidk_proof_trace_graphs(const cidk_proof* p, char** out) {
  if (!p || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    const cidk::Proof& proof = p->proof;
    auto sys = cidk::buildTraceSystem(proof);
    auto names = cidk::predNames(proof);
    std::ostringstream r;
    for (const auto& g : sys.edges) {
      r << "edge " << proof.nodes[g.source].label << " -> " << proof.nodes[g.target].label << "\n";
      for (const auto& e : cidk::graphEdges(sys, g))
        r << "  " << cidk::printFormula(e.from, names) << " ~> " << cidk::printFormula(e.to, names)
          << (e.progress ? "  [progress]" : "") << "\n";
    }
    *out = dup(r.str());
    return CIDK_OK;
  });
}

cidk_status cidk_eval(const char* formula, unsigned bound, const char* assignment,
                      const cidk_proof* preds, int strict_exact, char** out) {
  if (!formula || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    cidk::PredEnv env = envFor(preds);
    cidk::Formula f = cidk::parseFormula(formula, env);
    cidk::Assignment rho = parseAssignment(assignment);
    cidk::TableMap tables;
    cidk::ensureTables(tables, std::vector<cidk::Formula>{f}, bound);
    cidk::Truth t = cidk::evalFormula(rho, f, bound, tables);
    *out = dup(std::string(t.value ? "true" : "false") + " " + exactness(t.exact) + "\n");
    if (strict_exact && !t.exact) return fail(CIDK_BOUND_LIMITED, "verdict is bound-limited");
    return CIDK_OK;
  });
}

cidk_status cidk_profile(const char* pred, unsigned bound, const cidk_proof* preds, char** out) {
  if (!pred || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    cidk::PredEnv env = envFor(preds);
    auto it = env.find(pred);
    if (it == env.end() && std::strlen(pred) == 1)
      it = env.find(std::string(1, static_cast<char>(std::toupper(pred[0]))));
    if (it == env.end()) return fail(CIDK_USAGE, std::string("unknown predicate ") + pred);
    cidk::TableMap tables;
    cidk::ensureTables(tables, it->second, bound);
    const auto& table = tables.at(it->second->key());
    std::ostringstream r;
    r << "stage\tentered\n";
    for (const auto& e : cidk::closureProfile(table)) {
      r << e.stage << "\t";
      for (std::size_t i = 0; i < e.entered.size(); ++i) r << (i ? "," : "") << e.entered[i];
      r << "\n";
    }
    *out = dup(r.str());
    return CIDK_OK;
  });
}

cidk_status cidk_countermodel(const cidk_proof* p, unsigned bound, const char* assignment,
                              unsigned max_steps, char** out) {
  if (!p || !out) return fail(CIDK_USAGE, "null argument");
  return guarded([&] {
    const cidk::Proof& proof = p->proof;
    cidk::Assignment rho = parseAssignment(assignment);
    cidk::TableMap tables;
    auto w = cidk::countermodelWalk(proof, rho, bound, tables, max_steps);
    auto names = cidk::predNames(proof);
    std::ostringstream r;
    r << "step\tnode\tassignment\tstages\n";
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
      const auto& s = w.steps[i];
      r << i << "\t" << proof.nodes[s.node].label << "\t" << showAssignment(s.rho) << "\t";
      for (std::size_t k = 0; k < s.stages.size(); ++k)
        r << (k ? "; " : "") << cidk::printFormula(s.stages[k].formula, names) << "@"
          << s.stages[k].stage;
      r << "\n";
    }
    r << "verdict: " << cidk::toString(w.verdict);
    if (w.verdict == cidk::WalkVerdict::LoopDetected) r << " (from step " << w.loopStart << ")";
    r << "\n";
    *out = dup(r.str());
    return CIDK_OK;
  });
}

}  // extern "C"

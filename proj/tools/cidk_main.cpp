// Command-line front end over the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "cidk/cidk.h"

namespace {

struct ProofDeleter {
  void operator()(cidk_proof* p) const { cidk_proof_free(p); }
};
using ProofPtr = std::unique_ptr<cidk_proof, ProofDeleter>;

/// Prints `text` (if any), reports the error for a failing status.
int finish(cidk_status status, char* text) {
  if (text) {
    std::fputs(text, stdout);
    cidk_string_free(text);
  }
  if (status != CIDK_OK && *cidk_last_error()) std::fprintf(stderr, "error: %s\n", cidk_last_error());
  return static_cast<int>(status);
}

int load(const std::string& path, ProofPtr& out) {
  cidk_proof* p = nullptr;
  cidk_status s = cidk_proof_load(path.c_str(), &p);
  if (s != CIDK_OK) return finish(s, nullptr);
  out.reset(p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checker and translator for inductive and cyclic arithmetic proofs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cidk_version()));

  std::string path, out, mode = "declared", formula, pred, assign, preds;
  bool requireProgress = false, strictExact = false;
  unsigned bound = 10, maxSteps = 200;

  auto* check = app.add_subcommand("check", "Check a proof file");
  check->add_option("file", path, "Proof file")->required();
  check->add_option("--mode", mode, "Calculus to check against")
      ->check(CLI::IsMember({"declared", "finitary", "cyclic"}));
  check->add_flag("--require-progress", requireProgress, "Fail unless every infinite path progresses");

  auto* translate = app.add_subcommand("translate", "Compile a finitary proof into a cyclic one");
  translate->add_option("file", path, "Finitary proof file")->required();
  translate->add_option("-o,--output", out, "Output file (default: standard output)");

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on {0..B}");
  eval->add_option("--bound", bound, "Bound B")->required();
  eval->add_option("--formula", formula, "Formula")->required();
  eval->add_option("--assign", assign, "Assignment, e.g. x=1,y=2");
  eval->add_option("--preds", preds, "Proof file whose predicate declarations are visible");
  eval->add_flag("--strict-exact", strictExact, "Exit 3 on bound-limited verdicts");

  auto* profile = app.add_subcommand("profile", "Print the approximant stages of a predicate");
  profile->add_option("--bound", bound, "Bound B")->required();
  profile->add_option("--pred", pred, "Predicate name")->required();
  profile->add_option("--preds", preds, "Proof file whose predicate declarations are visible");

  auto* counter = app.add_subcommand("countermodel", "Follow false premisses from a false root");
  counter->add_option("--bound", bound, "Bound B")->required();
  counter->add_option("--proof", path, "Proof file")->required();
  counter->add_option("--assign", assign, "Initial assignment, e.g. x=1");
  counter->add_option("--max-steps", maxSteps, "Step limit");
  counter->add_flag("--strict-exact", strictExact, "Accepted for symmetry; walks are always exact");

  auto* graphs = app.add_subcommand("dump-trace-graphs", "Print the trace graph of every edge");
  graphs->add_option("file", path, "Proof file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return CIDK_USAGE;
  }

  char* text = nullptr;
  ProofPtr proof;
  ProofPtr env;
  if (!preds.empty())
    if (int rc = load(preds, env)) return rc;

  if (*check) {
    if (int rc = load(path, proof)) return rc;
    cidk_mode m = mode == "finitary" ? CIDK_MODE_FINITARY
                  : mode == "cyclic" ? CIDK_MODE_CYCLIC
                                     : CIDK_MODE_AS_DECLARED;
    cidk_status s = cidk_proof_check(proof.get(), m, requireProgress ? 1 : 0, &text);
    return finish(s, text);
  }
  if (*translate) {
    if (int rc = load(path, proof)) return rc;
    cidk_proof* result = nullptr;
    cidk_status s = cidk_proof_translate(proof.get(), &result, &text);
    ProofPtr owned(result);
    if (text) {
      std::fputs(text, stderr);
      cidk_string_free(text);
    }
    if (owned) {
      char* serialized = nullptr;
      cidk_status w = cidk_proof_serialize(owned.get(), &serialized);
      if (w != CIDK_OK) return finish(w, nullptr);
      if (out.empty()) {
        std::fputs(serialized, stdout);
      } else {
        std::ofstream f(out, std::ios::binary);
        f << serialized;
        if (!f) {
          cidk_string_free(serialized);
          std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
          return CIDK_USAGE;
        }
      }
      cidk_string_free(serialized);
    }
    return finish(s, nullptr);
  }
  if (*eval) {
    cidk_status s = cidk_eval(formula.c_str(), bound, assign.empty() ? nullptr : assign.c_str(),
                              env.get(), strictExact ? 1 : 0, &text);
    return finish(s, text);
  }
  if (*profile) {
    cidk_status s = cidk_profile(pred.c_str(), bound, env.get(), &text);
    return finish(s, text);
  }
  if (*counter) {
    if (int rc = load(path, proof)) return rc;
    cidk_status s = cidk_countermodel(proof.get(), bound, assign.empty() ? nullptr : assign.c_str(),
                                      maxSteps, &text);
    return finish(s, text);
  }
  if (*graphs) {
    if (int rc = load(path, proof)) return rc;
    cidk_status s = cidk_proof_trace_graphs(proof.get(), &text);
    return finish(s, text);
  }
  return CIDK_USAGE;
}

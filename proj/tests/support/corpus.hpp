#pragma once

// The proof corpus: hand-written encodings plus generator output. The files
// under corpus/ are written from here by tools/gen_corpus.

#include <string>
#include <vector>

#include "proof.hpp"

namespace corpus {

struct Entry {
  std::string name;
  cidk::Proof proof;
  /// Every node checks locally.
  bool checks = true;
  /// Cyclic entries: the trace condition holds.
  bool progressing = true;
};

cidk::Proof mSubN();           // M(x) => N(x)
cidk::Proof mSubNBroken();     // the idl step on M replaced by weakening
cidk::Proof eSubN();           // E(x) => N(x), cyclic
cidk::Proof eSubNFinitary();   // E(x) => N(x) by xind
cidk::Proof eOnePreproof();    // => E(1), looping on the right
cidk::Proof finitaryInd();     // one xind and one indPA step
cidk::Proof qAxiomOnly();
cidk::Proof streams();         // gfp declaration, parse/positivity only
cidk::Proof functorialityCyclicPE();  // P_E(x) => P_N(x), hypothesis closed
cidk::Proof functorialityFinitePE();
cidk::Proof deriveIdlClosed(const std::string& pred);
cidk::Proof indFromNClosed();

/// The predicate P_E := I_{E(x) or ex y. X(y) and x = s(y)}.
cidk::IndPredPtr pE();

std::vector<Entry> all();

}  // namespace corpus

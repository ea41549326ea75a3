#pragma once

// Exhaustive enumeration of small, locally correct cyclic proofs over a
// restricted rule set: idl, idr, weaken, subst, orL, cut, nAxiom, id.

#include <cstddef>
#include <functional>
#include <vector>

#include "proof.hpp"

namespace smallproofs {

struct Options {
  std::size_t maxNodes = 6;
  std::vector<cidk::Sequent> roots;
  std::vector<cidk::Formula> cutFormulas;
};

/// Default roots and cut formulas over N, E and two extra predicates whose
/// unfoldings expose predicate atoms directly:
///   P := I_{x = 0 or X(s(x))},  Q := I_{x = 0 or (X(s(x)) or P(x))}.
Options defaultOptions();
cidk::PredEnv predicates();

/// Calls `visit` on every proof; returns the number visited.
std::size_t enumerate(const Options& opts, const std::function<void(const cidk::Proof&)>& visit);

}  // namespace smallproofs

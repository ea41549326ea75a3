#pragma once

// Proof generators and the translation of inductive proofs into cyclic ones.

#include <set>
#include <string>
#include <vector>

#include "proof.hpp"

namespace cidk {

/// A derivation whose leaves may be `open` hypotheses.
struct Fragment {
  Proof proof;
  /// Labels of the open leaves, in creation order.
  std::vector<std::string> openLeaves;
};

/// phi(Y) => phi(Z) from the open hypothesis Y(w) => Z(w), by induction on
/// phi. Y and Z are set variables or inductive predicates; Y must occur only
/// positively in phi and the bodies below it. Uses xind and idr, never idl.
/// Throws Error{NotPositive}.
Fragment functorialityFinite(const Formula& phi, const PredSymbol& y, const PredSymbol& z);
/// Same, in the cyclic system: each inductive predicate mentioning Y gets a
/// loop through idl and idr instead of an xind step.
Fragment functorialityCyclic(const Formula& phi, const PredSymbol& y, const PredSymbol& z);

/// Finitary derivation of gamma, I(t) => delta from the open leaf
/// gamma, body(I, t) => delta, through xind with invariant body(I, -).
Fragment deriveIdl(const IndPredPtr& pred, const std::set<Formula>& gamma,
                   const std::set<Formula>& delta, const Term& t);

/// Cyclic derivation of gamma => delta, inv[t/y] from the open leaves
/// gamma => delta, inv[0/y] and gamma, inv => delta, inv[s(y)/y], via the
/// N axiom and a loop unfolding N on the left.
Fragment deriveIndFromN(const Formula& inv, const std::string& y, const Term& t,
                        const std::set<Formula>& gamma = {},
                        const std::set<Formula>& delta = {});

/// Compiles a checked finitary proof into a cyclic one with the same root
/// sequent: xind steps become idl loops, indPA steps go through the N axiom.
/// Throws Error{Unsupported} when the input is not a checked finitary proof.
Proof idToCid(const Proof& p);

/// Replaces the open leaf `label` of `fragment` by `sub`, whose root sequent
/// must be contained in the leaf's (a weakening step is inserted if needed).
/// Throws Error{Unsupported} otherwise.
Proof graft(const Proof& fragment, const std::string& label, const Proof& sub);

}  // namespace cidk

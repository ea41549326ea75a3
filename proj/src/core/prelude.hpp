#pragma once

// The standard predicates on the naturals used throughout: N, E, O and M.

#include "text.hpp"

namespace cidk {

IndPredPtr natPred();   // N := I_n
IndPredPtr evenPred();  // E := I_e
IndPredPtr oddPred();   // O := I_o
IndPredPtr mPred();     // M := I_m, mentions E
bool isNatPred(const IndPredPtr& p);

/// N, E, O, M by name.
const PredEnv& standardEnv();

/// 2x = (a+b)(a+b+1) + 2b, i.e. x is the Cantor code of (a, b).
Formula pairingGraph(const Term& x, const Term& a, const Term& b);

}  // namespace cidk

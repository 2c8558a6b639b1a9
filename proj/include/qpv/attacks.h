#pragma once

#include <string>
#include <vector>

#include "qpv/protocols.h"
#include "qpv/rng.h"
#include "qpv/spacetime.h"
#include "qpv/strategy.h"

namespace qpv {

/// FIS, q = 0: every V qubit in the Breidbart state, both answer 0...0.
Strategy breidbart_strategy(int m);

/// FIS, q = 0: V in |0...0>, both answer 0...0. Scores 3/4 per round.
Strategy computational_guess_strategy(int m);

/// Routing attack scoring 3/4 per round under the Phi+ check: per round the
/// state (|Phi+>_{V,A}|0>_B + |Phi+>_{V,B}|0>_A)/sqrt(3); Alice returns her
/// qubit when z_i = 0 and Bob his when z_i = 1. One qubit per attacker per
/// round (q = m). Dense evaluation needs m <= 4.
Strategy routing_guess_attack(int m);

/// Routing attack without pre-shared entanglement (q = 0): the intercepted
/// qubit goes toward V_destination, and the other verifier gets one half of
/// a locally created EPR pair. Per round: 1 under a correct guess; 1/2
/// (delayed-basis check) or 1/4 (Phi+ check) otherwise. Dense evaluation
/// needs m <= 3.
Strategy routing_forward_attack(int m, int destination = 0);

struct EprTeleportResult {
    double success = 0;
    double per_round = 0;
    double challenge_arrival = 0;
    ResponseTiming timing;
    bool timing_ok = false;
};

/// Teleportation attack on plain BB84 (z = y): one pre-shared EPR pair per
/// qubit. Alice Bell-measures the intercepted qubit with her half; Bob
/// measures his half in basis y; they swap (corrections) and (y, outcomes);
/// both answer outcome XOR (y ? z-correction : x-correction). Success is
/// computed exactly by branch enumeration. Rejects every variant except
/// plain-bb84, since z = f(x, y) is not known locally.
EprTeleportResult epr_teleport_attack(ProtocolVariant variant, int m, const Geometry& geom);

/// One sampled round of the same attack on the statevector simulator.
bool epr_teleport_round(int m, Rng& rng);

/// The m = 1 teleportation attack as a register-model strategy (n = 1,
/// by_pair responses); pair it with FunctionTable::select_y(1).
Strategy epr_teleport_strategy();

/// Names accepted by make_named_attack.
std::vector<std::string> named_attacks();

/// "breidbart", "computational-guess", "routing-guess", "routing-forward".
Strategy make_named_attack(const std::string& name, int m);

}  // namespace qpv

#include "qpv/attacks.h"

#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {

std::vector<Matrix> answer_zero_family() {
    return {Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
}

Strategy constant_answer_component(const StateVector& v_state, const std::string& name) {
    Strategy c;
    c.kind = StrategyKind::bb84;
    c.name = name;
    c.m = 1;
    c.state = StateVector(Strategy::make_layout(1, 0, 0, 0, 0), v_state.amplitudes());
    c.response_index = ResponseIndex::constant;
    c.alice_povms = {answer_zero_family()};
    c.bob_povms = {answer_zero_family()};
    return c;
}

void check_m(int m) {
    if (m < 1) {
        throw std::invalid_argument("attack needs m >= 1");
    }
}

}  // namespace

Strategy breidbart_strategy(int m) {
    check_m(m);
    return tensor_rounds(constant_answer_component(breidbart_state(), "breidbart"), m);
}

Strategy computational_guess_strategy(int m) {
    check_m(m);
    Amplitudes zero = Amplitudes::Zero(2);
    zero[0] = 1;
    return tensor_rounds(constant_answer_component(StateVector(zero), "computational-guess"), m);
}

Strategy routing_guess_attack(int m) {
    check_m(m);
    Strategy c;
    c.kind = StrategyKind::routing;
    c.name = "routing-guess";
    c.m = 1;
    c.q = 1;
    c.a_keep = 1;
    c.b_keep = 1;
    // Qubits: V = 0, A = 1, B = 2.
    Amplitudes a = Amplitudes::Zero(8);
    a[0b000] += 1;
    a[0b011] += 1;  // V = A = 1
    a[0b000] += 1;
    a[0b101] += 1;  // V = B = 1
    c.state = StateVector(Strategy::make_layout(1, 1, 0, 1, 0), a / a.norm());
    c.response_index = ResponseIndex::constant;
    c.alice_routing = {gates::identity(1)};
    c.bob_routing = {gates::identity(1)};
    c.alice_outputs = {0};
    c.bob_outputs = {0};
    return tensor_rounds(c, m);
}

Strategy routing_forward_attack(int m, int destination) {
    check_m(m);
    if (destination != 0 && destination != 1) {
        throw std::invalid_argument("routing_forward_attack: destination must be 0 or 1");
    }
    Strategy c;
    c.kind = StrategyKind::routing;
    c.name = "routing-forward";
    c.m = 1;
    c.q = 0;
    c.response_index = ResponseIndex::constant;
    c.alice_outputs = {0};
    c.bob_outputs = {0};
    // EPR pairs: verifier half with the intercepted qubit, and a local dummy pair.
    StateVector epr_real = epr_pair();
    StateVector dummy = epr_pair();
    if (destination == 0) {
        // V, Ak = {real}, Bk = {dummy, dummy partner}.
        c.a_keep = 1;
        c.b_keep = 2;
        c.state = StateVector(Strategy::make_layout(1, 1, 0, 2, 0), tensor(epr_real, dummy).amplitudes());
        c.alice_routing = {gates::identity(1)};
        c.bob_routing = {gates::identity(2)};
    } else {
        // V, Ak = {dummy, dummy partner}, Ac = {real}: the real qubit travels to Bob.
        c.a_keep = 2;
        c.a_comm = 1;
        // Order of the product: (V, real) then (dummy, partner); move real to qubit 3.
        Amplitudes amps = tensor(epr_real, dummy).amplitudes();
        amps = permute_qubits(amps, {0, 3, 1, 2});
        c.state = StateVector(Strategy::make_layout(1, 2, 1, 0, 0), amps);
        c.alice_routing = {gates::identity(2)};
        c.bob_routing = {gates::identity(1)};
    }
    return tensor_rounds(c, m);
}

namespace {

// Exact success of one teleportation round averaged over (a, y).
double teleport_round_success() {
    const Matrix rot = gates::bell_rotation();
    double total = 0;
    for (int a = 0; a < 2; a++) {
        for (int y = 0; y < 2; y++) {
            BitString ba(1), by(1);
            ba.set(0, a);
            by.set(0, y);
            // Qubit 0: intercepted H^y|a>; qubits 1, 2: Alice's and Bob's EPR halves.
            Amplitudes amps = tensor(bb84_encode(ba, by), epr_pair()).amplitudes();
            int alice[2] = {0, 1};
            apply_matrix(amps, rot, alice);
            if (y) {
                int bob = 2;
                apply_matrix(amps, gates::hadamard(), {&bob, 1});
            }
            for (int k = 0; k < 8; k++) {
                int m1 = k & 1;         // z-correction
                int m2 = (k >> 1) & 1;  // x-correction
                int r = (k >> 2) & 1;
                int answer = r ^ (y ? m1 : m2);
                total += std::norm(amps[k]) * (answer == a);
            }
        }
    }
    return total / 4;
}

}  // namespace

EprTeleportResult epr_teleport_attack(ProtocolVariant variant, int m, const Geometry& geom) {
    if (variant != ProtocolVariant::plain_bb84) {
        throw std::invalid_argument("epr_teleport_attack applies to plain-bb84 only: under " + to_string(variant) +
                                    " Bob cannot compute the basis z = f(x, y) before the exchange");
    }
    check_m(m);
    Geometry g = geom.has_attackers() ? geom : with_midpoint_attackers(geom);
    g.validate();
    EprTeleportResult res;
    res.per_round = teleport_round_success();
    res.success = std::pow(res.per_round, m);
    res.challenge_arrival = default_challenge_arrival(g, 1.0);
    res.timing = attack_responses(g, res.challenge_arrival, 1.0);
    res.timing_ok = verify_timing(g, res.timing.arrival_v0, res.timing.arrival_v1, res.challenge_arrival);
    return res;
}

bool epr_teleport_round(int m, Rng& rng) {
    check_m(m);
    Layout layout({{"Q", 1}, {"EA", 1}, {"EB", 1}});
    for (int i = 0; i < m; i++) {
        BitString a = rng.bits(1);
        BitString y = rng.bits(1);
        StateVector s(layout, tensor(bb84_encode(a, y), epr_pair()).amplitudes());
        BellMeasurement bell = bell_measure(s, 0, 1, rng);
        Measurement bob = measure_basis(bell.state, 2, y[0], rng);
        int correction = y[0] ? bell.z_correction : bell.x_correction;
        int alice_answer = bob.outcome ^ correction;
        int bob_answer = bob.outcome ^ correction;
        if (alice_answer != bob_answer || alice_answer != a[0]) {
            return false;
        }
    }
    return true;
}

Strategy epr_teleport_strategy() {
    Strategy s;
    s.kind = StrategyKind::bb84;
    s.name = "epr-teleport";
    s.n = 1;
    s.m = 1;
    s.q = 1;
    // V = 0 | Ak = {Q 1, EA 2} | Ac = {c1 3, c2 4} | Bk = {EB 5} | Bc = {d 6}.
    s.a_keep = 2;
    s.a_comm = 2;
    s.b_keep = 1;
    s.b_comm = 1;
    Amplitudes amps = Amplitudes::Zero(128);
    for (int u = 0; u < 2; u++) {
        for (int w = 0; w < 2; w++) {
            amps[(u << 0) | (u << 1) | (w << 2) | (w << 5)] = 0.5;
        }
    }
    s.state = StateVector(Strategy::make_layout(1, 2, 2, 1, 1), amps);

    // Alice: Bell rotation on (Q, EA), then copy both bits into (c1, c2).
    Matrix ua(16, 16);
    for (int k = 0; k < 16; k++) {
        Amplitudes e = Amplitudes::Zero(16);
        e[k] = 1;
        int qa[2] = {0, 1};
        apply_matrix(e, gates::bell_rotation(), qa);
        int c1[2] = {0, 2};
        apply_matrix(e, gates::cnot(), c1);
        int c2[2] = {1, 3};
        apply_matrix(e, gates::cnot(), c2);
        ua.col(k) = e;
    }
    s.alice_unitaries = {ua, ua};
    // Bob: H^y on EB, then copy into d.
    for (int y = 0; y < 2; y++) {
        Matrix out(4, 4);
        for (int k = 0; k < 4; k++) {
            Amplitudes e = Amplitudes::Zero(4);
            e[k] = 1;
            if (y) {
                int t = 0;
                apply_matrix(e, gates::hadamard(), {&t, 1});
            }
            int c[2] = {0, 1};
            apply_matrix(e, gates::cnot(), c);
            out.col(k) = e;
        }
        s.bob_unitaries.push_back(out);
    }
    // A' = [Q, EA, d] holds (m1, m2, r); B' = [EB, c1, c2] holds (r, m1, m2).
    s.response_index = ResponseIndex::by_pair;
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            std::vector<Matrix> af(2, Matrix::Zero(8, 8));
            std::vector<Matrix> bf(2, Matrix::Zero(8, 8));
            for (int k = 0; k < 8; k++) {
                int a_m1 = k & 1, a_m2 = (k >> 1) & 1, a_r = (k >> 2) & 1;
                af[a_r ^ (y ? a_m1 : a_m2)](k, k) = 1;
                int b_r = k & 1, b_m1 = (k >> 1) & 1, b_m2 = (k >> 2) & 1;
                bf[b_r ^ (y ? b_m1 : b_m2)](k, k) = 1;
            }
            s.alice_povms.push_back(af);
            s.bob_povms.push_back(bf);
        }
    }
    s.validate();
    return s;
}

std::vector<std::string> named_attacks() {
    return {"breidbart", "computational-guess", "routing-guess", "routing-forward", "epr-teleport"};
}

Strategy make_named_attack(const std::string& name, int m) {
    if (name == "breidbart") {
        return breidbart_strategy(m);
    }
    if (name == "computational-guess") {
        return computational_guess_strategy(m);
    }
    if (name == "routing-guess") {
        return routing_guess_attack(m);
    }
    if (name == "routing-forward") {
        return routing_forward_attack(m, 0);
    }
    if (name == "epr-teleport") {
        if (m != 1) {
            throw std::invalid_argument("the register-model teleportation strategy is built for m = 1");
        }
        return epr_teleport_strategy();
    }
    throw std::invalid_argument("unknown attack '" + name + "'");
}

}  // namespace qpv

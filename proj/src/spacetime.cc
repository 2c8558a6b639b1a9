#include "qpv/spacetime.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {

// Rounding slack on deadline comparisons; all inputs are small decimals.
constexpr double kTimeSlack = 1e-12;

}  // namespace

std::string actor_name(Actor a) {
    switch (a) {
        case Actor::v0:
            return "V0";
        case Actor::v1:
            return "V1";
        case Actor::prover:
            return "P";
        case Actor::alice:
            return "A";
        case Actor::bob:
            return "B";
    }
    return "?";
}

void Geometry::validate() const {
    if (!(v0 < pos && pos < v1)) {
        throw std::invalid_argument("geometry requires V0 < pos < V1");
    }
    if (alice.has_value() != bob.has_value()) {
        throw std::invalid_argument("geometry requires both attacker positions or neither");
    }
    if (alice && !(v0 < *alice && *alice < pos)) {
        throw std::invalid_argument("geometry requires V0 < A < pos");
    }
    if (bob && !(pos < *bob && *bob < v1)) {
        throw std::invalid_argument("geometry requires pos < B < V1");
    }
    if (tolerance < 0 || prover_delay < 0 || alice_delay < 0 || bob_delay < 0) {
        throw std::invalid_argument("tolerance and processing delays must be non-negative");
    }
}

double Geometry::position(Actor a) const {
    switch (a) {
        case Actor::v0:
            return v0;
        case Actor::v1:
            return v1;
        case Actor::prover:
            return pos;
        case Actor::alice:
            if (!alice) {
                throw std::invalid_argument("geometry has no attacker A");
            }
            return *alice;
        case Actor::bob:
            if (!bob) {
                throw std::invalid_argument("geometry has no attacker B");
            }
            return *bob;
    }
    throw std::invalid_argument("unknown actor");
}

Geometry symmetric_geometry(double half_width) {
    Geometry g;
    g.v0 = 0;
    g.pos = half_width;
    g.v1 = 2 * half_width;
    g.validate();
    return g;
}

Geometry with_midpoint_attackers(Geometry g) {
    g.alice = (g.v0 + g.pos) / 2;
    g.bob = (g.pos + g.v1) / 2;
    g.validate();
    return g;
}

void TimedMessage::validate() const {
    if (!(speed > 0 && speed <= 1)) {
        throw std::invalid_argument("message speed must lie in (0, 1]");
    }
    if (kind == PayloadKind::classical && speed != 1.0) {
        throw std::invalid_argument("classical message '" + label + "' must travel at light speed");
    }
}

double arrival_time(const Geometry& geom, const TimedMessage& msg) {
    msg.validate();
    double d = std::abs(geom.position(msg.receiver) - geom.position(msg.sender));
    return msg.send_time + d / msg.speed;
}

ChallengeSchedule plan_simultaneous(const Geometry& geom, double arrival, double quantum_speed) {
    geom.validate();
    if (!(quantum_speed > 0 && quantum_speed <= 1)) {
        throw std::invalid_argument("quantum speed must lie in (0, 1]");
    }
    ChallengeSchedule s;
    s.v0_classical_send = arrival - (geom.pos - geom.v0);
    s.v1_classical_send = arrival - (geom.v1 - geom.pos);
    s.v0_quantum_send = arrival - (geom.pos - geom.v0) / quantum_speed;
    s.messages = {
        {Actor::v0, Actor::prover, PayloadKind::classical, "x", s.v0_classical_send, 1.0},
        {Actor::v1, Actor::prover, PayloadKind::classical, "y", s.v1_classical_send, 1.0},
        {Actor::v0, Actor::prover, PayloadKind::quantum, "qubits", s.v0_quantum_send, quantum_speed},
    };
    return s;
}

double response_deadline(const Geometry& geom, Actor verifier, double challenge_arrival) {
    double d = std::abs(geom.position(verifier) - geom.pos);
    return challenge_arrival + d + geom.tolerance;
}

bool verify_timing(const Geometry& geom, double arrival_v0, double arrival_v1, double challenge_arrival) {
    return arrival_v0 <= response_deadline(geom, Actor::v0, challenge_arrival) + kTimeSlack &&
           arrival_v1 <= response_deadline(geom, Actor::v1, challenge_arrival) + kTimeSlack;
}

ResponseTiming honest_responses(const Geometry& geom, double challenge_arrival) {
    geom.validate();
    double send = challenge_arrival + geom.prover_delay;
    ResponseTiming r;
    r.messages = {
        {Actor::prover, Actor::v0, PayloadKind::classical, "response", send, 1.0},
        {Actor::prover, Actor::v1, PayloadKind::classical, "response", send, 1.0},
    };
    r.arrival_v0 = arrival_time(geom, r.messages[0]);
    r.arrival_v1 = arrival_time(geom, r.messages[1]);
    return r;
}

ResponseTiming attack_responses(const Geometry& geom, double challenge_arrival, double quantum_speed) {
    geom.validate();
    if (!geom.has_attackers()) {
        throw std::invalid_argument("attack_responses requires attacker positions");
    }
    ChallengeSchedule c = plan_simultaneous(geom, challenge_arrival, quantum_speed);
    TimedMessage x_to_a{Actor::v0, Actor::alice, PayloadKind::classical, "x", c.v0_classical_send, 1.0};
    TimedMessage q_to_a{Actor::v0, Actor::alice, PayloadKind::quantum, "qubits", c.v0_quantum_send, quantum_speed};
    TimedMessage y_to_b{Actor::v1, Actor::bob, PayloadKind::classical, "y", c.v1_classical_send, 1.0};
    double alice_ready = std::max(arrival_time(geom, x_to_a), arrival_time(geom, q_to_a)) + geom.alice_delay;
    double bob_ready = arrival_time(geom, y_to_b) + geom.bob_delay;

    TimedMessage a_to_b{Actor::alice, Actor::bob, PayloadKind::classical, "exchange", alice_ready, 1.0};
    TimedMessage b_to_a{Actor::bob, Actor::alice, PayloadKind::classical, "exchange", bob_ready, 1.0};
    double alice_answer = std::max(alice_ready, arrival_time(geom, b_to_a)) + geom.alice_delay;
    double bob_answer = std::max(bob_ready, arrival_time(geom, a_to_b)) + geom.bob_delay;

    ResponseTiming r;
    r.messages = {x_to_a, q_to_a, y_to_b, a_to_b, b_to_a,
                  {Actor::alice, Actor::v0, PayloadKind::classical, "response", alice_answer, 1.0},
                  {Actor::bob, Actor::v1, PayloadKind::classical, "response", bob_answer, 1.0}};
    r.arrival_v0 = arrival_time(geom, r.messages[5]);
    r.arrival_v1 = arrival_time(geom, r.messages[6]);
    return r;
}

}  // namespace qpv

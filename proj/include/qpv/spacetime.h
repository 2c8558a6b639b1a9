#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qpv {

/// Positions are in light-seconds and times in seconds, so light speed is 1.
enum class Actor { v0, v1, prover, alice, bob };

std::string actor_name(Actor a);

struct Geometry {
    double v0 = 0.0;
    double pos = 1.0;
    double v1 = 2.0;
    std::optional<double> alice;
    std::optional<double> bob;
    double tolerance = 0.0;
    /// Local processing time between receiving the last input and sending.
    double prover_delay = 0.0;
    double alice_delay = 0.0;
    double bob_delay = 0.0;

    /// Throws std::invalid_argument unless V0 < pos < V1, V0 < A < pos,
    /// pos < B < V1, and all times are non-negative.
    void validate() const;

    double position(Actor a) const;
    bool has_attackers() const { return alice.has_value() && bob.has_value(); }
};

/// V0 at 0, V1 at 2 * half_width, pos in the middle.
Geometry symmetric_geometry(double half_width = 1.0);

/// Places A and B halfway between pos and their verifier.
Geometry with_midpoint_attackers(Geometry g);

enum class PayloadKind { classical, quantum };

struct TimedMessage {
    Actor sender;
    Actor receiver;
    PayloadKind kind;
    std::string label;
    double send_time;
    double speed = 1.0;

    /// Throws for speed outside (0, 1] or classical speed != 1.
    void validate() const;
};

/// send_time + |x_receiver - x_sender| / speed.
double arrival_time(const Geometry& geom, const TimedMessage& msg);

struct ChallengeSchedule {
    double v0_classical_send;
    double v1_classical_send;
    double v0_quantum_send;
    std::vector<TimedMessage> messages;
};

/// Send times making x (from V0), y (from V1) and the qubits (from V0, at
/// quantum_speed) all reach pos at `arrival`. Negative send times mean the
/// caller should move the time origin.
ChallengeSchedule plan_simultaneous(const Geometry& geom, double arrival, double quantum_speed = 1.0);

/// Latest acceptable arrival of a response at `verifier`.
double response_deadline(const Geometry& geom, Actor verifier, double challenge_arrival);

/// True iff each response reaches its verifier no later than
/// challenge_arrival + d(pos, verifier) + tolerance.
bool verify_timing(const Geometry& geom, double arrival_v0, double arrival_v1, double challenge_arrival);

struct ResponseTiming {
    double arrival_v0;
    double arrival_v1;
    std::vector<TimedMessage> messages;
};

/// Honest prover at pos answers both verifiers at light speed.
ResponseTiming honest_responses(const Geometry& geom, double challenge_arrival);

/// Attackers intercept at A and B, do one simultaneous exchange of
/// classical messages, then answer their nearest verifier.
ResponseTiming attack_responses(const Geometry& geom, double challenge_arrival, double quantum_speed = 1.0);

}  // namespace qpv

#include "qpv/spacetime.h"

#include "gtest/gtest.h"

#include "qpv/rng.h"

using namespace qpv;

namespace {

Geometry line(double v0, double pos, double v1) {
    Geometry g;
    g.v0 = v0;
    g.pos = pos;
    g.v1 = v1;
    g.validate();
    return g;
}

}  // namespace

TEST(geometry, validation) {
    EXPECT_THROW(line(1, 0, 2), std::invalid_argument);
    Geometry g = symmetric_geometry();
    g.alice = 1.5;
    g.bob = 1.5;
    EXPECT_THROW(g.validate(), std::invalid_argument);
    g.alice = 0.5;
    EXPECT_NO_THROW(g.validate());
    g.tolerance = -1;
    EXPECT_THROW(g.validate(), std::invalid_argument);
    g = symmetric_geometry();
    g.alice = 0.5;
    EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(arrival_time, examples) {
    Geometry g = line(0, 1, 3);
    EXPECT_DOUBLE_EQ(arrival_time(g, {Actor::v0, Actor::prover, PayloadKind::classical, "x", 0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(arrival_time(g, {Actor::prover, Actor::v1, PayloadKind::quantum, "q", 0, 0.5}), 4.0);
    EXPECT_DOUBLE_EQ(arrival_time(g, {Actor::prover, Actor::prover, PayloadKind::classical, "x", 2.5, 1}), 2.5);
}

TEST(arrival_time, errors) {
    Geometry g = line(0, 1, 3);
    EXPECT_THROW(arrival_time(g, {Actor::v0, Actor::prover, PayloadKind::quantum, "q", 0, 0}), std::invalid_argument);
    EXPECT_THROW(arrival_time(g, {Actor::v0, Actor::prover, PayloadKind::quantum, "q", 0, 1.5}),
                 std::invalid_argument);
    EXPECT_THROW(arrival_time(g, {Actor::v0, Actor::prover, PayloadKind::classical, "x", 0, 0.5}),
                 std::invalid_argument);
    EXPECT_THROW(arrival_time(g, {Actor::v0, Actor::alice, PayloadKind::classical, "x", 0, 1}),
                 std::invalid_argument);
}

TEST(plan_simultaneous, examples) {
    auto s = plan_simultaneous(symmetric_geometry(2.0), 10.0);
    EXPECT_DOUBLE_EQ(s.v0_classical_send, s.v1_classical_send);

    Geometry g = line(0, 1, 3);
    s = plan_simultaneous(g, 5.0);
    EXPECT_DOUBLE_EQ(s.v0_classical_send, 4.0);
    EXPECT_DOUBLE_EQ(s.v1_classical_send, 3.0);

    s = plan_simultaneous(g, 20.0, 0.1);
    EXPECT_DOUBLE_EQ(s.v0_quantum_send, 10.0);
    for (const auto& m : s.messages) {
        EXPECT_DOUBLE_EQ(arrival_time(g, m), 20.0);
    }
}

TEST(plan_simultaneous, classical_messages_at_light_speed) {
    auto s = plan_simultaneous(line(0, 0.3, 1), 4.0, 0.25);
    for (const auto& m : s.messages) {
        if (m.kind == PayloadKind::classical) {
            EXPECT_EQ(m.speed, 1.0);
        }
    }
}

TEST(verify_timing, honest_prover) {
    Geometry g = line(0, 1, 3);
    auto r = honest_responses(g, 5.0);
    EXPECT_DOUBLE_EQ(r.arrival_v0, 6.0);
    EXPECT_DOUBLE_EQ(r.arrival_v1, 7.0);
    EXPECT_TRUE(verify_timing(g, r.arrival_v0, r.arrival_v1, 5.0));
}

TEST(verify_timing, late_response) {
    Geometry g = line(0, 1, 3);
    g.tolerance = 0.01;
    EXPECT_TRUE(verify_timing(g, 6.01, 7.0, 5.0));
    EXPECT_FALSE(verify_timing(g, 6.02, 7.0, 5.0));
    EXPECT_FALSE(verify_timing(g, 6.0, 7.02, 5.0));
}

TEST(verify_timing, slow_prover_rejected) {
    Geometry g = line(0, 1, 3);
    g.prover_delay = 0.5;
    auto r = honest_responses(g, 5.0);
    EXPECT_FALSE(verify_timing(g, r.arrival_v0, r.arrival_v1, 5.0));
    g.tolerance = 0.5;
    EXPECT_TRUE(verify_timing(g, r.arrival_v0, r.arrival_v1, 5.0));
}

TEST(verify_timing, monotone) {
    Rng rng(5);
    Geometry g = line(0, 1, 3);
    g.tolerance = 0.1;
    for (int i = 0; i < 1000; i++) {
        double a0 = 5 + 2 * rng.uniform();
        double a1 = 6 + 2 * rng.uniform();
        if (verify_timing(g, a0, a1, 5.0)) {
            EXPECT_TRUE(verify_timing(g, a0 - rng.uniform(), a1, 5.0));
            EXPECT_TRUE(verify_timing(g, a0, a1 - rng.uniform(), 5.0));
        }
    }
}

TEST(attack_responses, midpoint_attackers_meet_deadline) {
    Geometry g = with_midpoint_attackers(symmetric_geometry());
    auto r = attack_responses(g, 3.0);
    EXPECT_DOUBLE_EQ(r.arrival_v0, 4.0);
    EXPECT_DOUBLE_EQ(r.arrival_v1, 4.0);
    EXPECT_TRUE(verify_timing(g, r.arrival_v0, r.arrival_v1, 3.0));
}

TEST(attack_responses, any_placement_meets_deadline) {
    Rng rng(77);
    for (int i = 0; i < 500; i++) {
        Geometry g;
        g.v0 = -rng.uniform() * 5 - 0.01;
        g.pos = 0;
        g.v1 = rng.uniform() * 5 + 0.01;
        g.alice = g.v0 * (0.01 + 0.98 * rng.uniform());
        g.bob = g.v1 * (0.01 + 0.98 * rng.uniform());
        g.validate();
        double q_speed = 0.05 + 0.95 * rng.uniform();
        auto r = attack_responses(g, 10.0, q_speed);
        EXPECT_TRUE(verify_timing(g, r.arrival_v0, r.arrival_v1, 10.0));
        for (const auto& m : r.messages) {
            if (m.kind == PayloadKind::classical) {
                EXPECT_EQ(m.speed, 1.0);
            }
        }
    }
}

TEST(attack_responses, processing_delay_breaks_deadline) {
    Geometry g = with_midpoint_attackers(symmetric_geometry());
    g.alice_delay = 0.1;
    auto r = attack_responses(g, 3.0);
    EXPECT_FALSE(verify_timing(g, r.arrival_v0, r.arrival_v1, 3.0));
    g.tolerance = 0.2;
    EXPECT_TRUE(verify_timing(g, r.arrival_v0, r.arrival_v1, 3.0));
}

TEST(attack_responses, requires_attackers) {
    EXPECT_THROW(attack_responses(symmetric_geometry(), 3.0), std::invalid_argument);
}

#include "qpv/protocols.h"

#include <cmath>

#include "gtest/gtest.h"

#include "qpv/fgen.h"
#include "qpv/stats.h"

using namespace qpv;

namespace {

ProtocolParams params(ProtocolVariant v, int n, int m, double gamma, Noise noise = {}) {
    ProtocolParams p;
    p.variant = v;
    p.n = n;
    p.m = m;
    p.gamma = gamma;
    p.noise = noise;
    return p;
}

double acceptance_rate(const ProtocolParams& p, const FunctionTable& f, int trials, std::uint64_t seed,
                       RoundOptions opts = {}) {
    Geometry g = symmetric_geometry();
    Rng rng(seed);
    int acc = 0;
    for (int t = 0; t < trials; t++) {
        acc += run_round(p, f, g, rng, opts).verdict == Verdict::accept;
    }
    return static_cast<double>(acc) / trials;
}

}  // namespace

TEST(accept_decision, examples) {
    BitString a = BitString::parse("0000000000");
    EXPECT_EQ(accept_decision(ProtocolVariant::fbb84, a, BitString::parse("1100000000"), 0.2, 10), Verdict::accept);
    EXPECT_EQ(accept_decision(ProtocolVariant::fbb84, a, BitString::parse("1110000000"), 0.2, 10), Verdict::reject);
    EXPECT_EQ(accept_decision(ProtocolVariant::frouting, a, std::nullopt, 0.0, 10), Verdict::accept);
    EXPECT_EQ(accept_decision(ProtocolVariant::frouting, BitString::parse("0100000000"), std::nullopt, 0.0, 10),
              Verdict::reject);
    EXPECT_THROW(accept_decision(ProtocolVariant::fbb84, a, std::nullopt, 0.2, 10), std::invalid_argument);
    EXPECT_THROW(accept_decision(ProtocolVariant::fbb84, a, BitString::parse("0"), 0.2, 10), std::invalid_argument);
}

TEST(error_budget, floor) {
    EXPECT_EQ(error_budget(0.2, 10), 2);
    EXPECT_EQ(error_budget(0.29, 100), 29);
    EXPECT_EQ(error_budget(0.05, 100), 5);
    EXPECT_EQ(error_budget(0.49, 3), 1);
    EXPECT_EQ(error_budget(0.0, 50), 0);
}

TEST(protocol_params, validation) {
    auto p = params(ProtocolVariant::fbb84, 1, 1, 0.5);
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.gamma = 0;
    p.m = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.m = 1;
    p.n = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.variant = ProtocolVariant::plain_bb84;
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.input_bits(), 1);
    EXPECT_THROW(parse_noise("flip:1.5"), std::invalid_argument);
    EXPECT_THROW(parse_noise("bogus"), std::invalid_argument);
    EXPECT_EQ(parse_noise("depolarizing:0.25").kind, NoiseKind::depolarizing);
    EXPECT_DOUBLE_EQ(parse_noise("flip:0.02").p, 0.02);
}

TEST(run_fbb84_round, noiseless_accepts) {
    auto p = params(ProtocolVariant::fbb84, 3, 8, 0);
    auto f = sample_function(3, 8, 1);
    Geometry g = symmetric_geometry();
    Rng rng(5);
    for (auto picture : {Picture::prepare_and_measure, Picture::purified}) {
        for (int t = 0; t < 200; t++) {
            auto tr = run_fbb84_round(p, f, g, rng, {picture});
            EXPECT_EQ(tr.verdict, Verdict::accept);
            EXPECT_EQ(hamming_distance(tr.a, *tr.v), 0u);
            EXPECT_EQ(tr.z, f(tr.x, tr.y));
            EXPECT_TRUE(tr.timing.on_time);
        }
    }
}

TEST(run_fbb84_round, full_flip_rejects) {
    auto p = params(ProtocolVariant::fbb84, 2, 5, 0, Noise{NoiseKind::flip, 1.0});
    auto f = sample_function(2, 5, 2);
    Geometry g = symmetric_geometry();
    Rng rng(6);
    for (auto picture : {Picture::prepare_and_measure, Picture::purified}) {
        for (int t = 0; t < 100; t++) {
            auto tr = run_fbb84_round(p, f, g, rng, {picture});
            EXPECT_EQ(tr.verdict, Verdict::reject);
            EXPECT_EQ(tr.reason, RejectReason::outcome);
            EXPECT_EQ(hamming_distance(tr.a, *tr.v), 5u);
        }
    }
}

TEST(run_fbb84_round, binomial_tail) {
    auto p = params(ProtocolVariant::fbb84, 4, 100, 0.05, Noise{NoiseKind::flip, 0.02});
    double exact = analytic_acceptance(p);
    EXPECT_NEAR(exact, 0.9845163594, 1e-9);
    auto f = sample_function(4, 100, 3, FunctionForm::seeded);
    const int trials = 20000;
    double rate = acceptance_rate(p, f, trials, 77);
    EXPECT_NEAR(rate, exact, 3 * std::sqrt(exact * (1 - exact) / trials));
}

TEST(run_frouting_round, noiseless_accepts) {
    auto p = params(ProtocolVariant::frouting, 3, 6, 0);
    auto f = sample_function(3, 6, 4);
    Geometry g = symmetric_geometry();
    Rng rng(8);
    for (auto picture : {Picture::prepare_and_measure, Picture::purified}) {
        for (auto check : {RoutingCheck::bell_projection, RoutingCheck::delayed_basis}) {
            for (int t = 0; t < 100; t++) {
                auto tr = run_frouting_round(p, f, g, rng, {picture, check});
                EXPECT_EQ(tr.a.weight(), 0u);
                EXPECT_EQ(tr.verdict, Verdict::accept);
                for (int i = 0; i < 6; i++) {
                    EXPECT_EQ(tr.destinations[i], tr.z[i]);
                }
            }
        }
    }
}

TEST(run_frouting_round, depolarizing_rate) {
    auto p = params(ProtocolVariant::frouting, 2, 1, 0, Noise{NoiseKind::depolarizing, 0.1});
    EXPECT_NEAR(analytic_acceptance(p), 0.95, 1e-15);
    auto f = sample_function(2, 1, 9);
    const int trials = 40000;
    double rate = acceptance_rate(p, f, trials, 10);
    EXPECT_NEAR(rate, 0.95, 4 * std::sqrt(0.95 * 0.05 / trials));
}

TEST(run_frouting_round, misroute_is_missing_qubit) {
    auto p = params(ProtocolVariant::frouting, 2, 3, 0.4);
    auto f = FunctionTable::constant(2, BitString::parse("010"));
    Geometry g = symmetric_geometry();
    Rng rng(1);
    RoundOptions opts;
    opts.routing_override = std::vector<int>{0, 0, 0};
    auto tr = run_frouting_round(p, f, g, rng, opts);
    EXPECT_EQ(tr.verdict, Verdict::reject);
    EXPECT_EQ(tr.reason, RejectReason::missing_qubit);
    EXPECT_EQ(tr.a[1], 1);
}

TEST(run_round, wrong_variant) {
    auto p = params(ProtocolVariant::frouting, 1, 1, 0);
    auto f = FunctionTable::xor_function(1);
    Geometry g = symmetric_geometry();
    Rng rng(1);
    EXPECT_THROW(run_fbb84_round(p, f, g, rng), std::invalid_argument);
    p.variant = ProtocolVariant::fbb84;
    EXPECT_THROW(run_frouting_round(p, f, g, rng), std::invalid_argument);
    p.m = 2;
    EXPECT_THROW(run_fbb84_round(p, f, g, rng), std::invalid_argument);
}

TEST(run_round, plain_matches_select_y) {
    const int m = 5;
    auto f = FunctionTable::select_y(m);
    for (auto [plain, fv] : {std::pair{ProtocolVariant::plain_bb84, ProtocolVariant::fbb84},
                             std::pair{ProtocolVariant::plain_routing, ProtocolVariant::frouting}}) {
        auto pp = params(plain, 0, m, 0.2, Noise{NoiseKind::depolarizing, 0.3});
        auto pf = params(fv, m, m, 0.2, Noise{NoiseKind::depolarizing, 0.3});
        Geometry g = symmetric_geometry();
        for (auto picture : {Picture::prepare_and_measure, Picture::purified}) {
            Rng r1(123);
            Rng r2(123);
            for (int t = 0; t < 200; t++) {
                auto a = run_round(pp, f, g, r1, {picture});
                auto b = run_round(pf, f, g, r2, {picture});
                EXPECT_EQ(a.x, b.x);
                EXPECT_EQ(a.y, b.y);
                EXPECT_EQ(a.z, b.z);
                EXPECT_EQ(a.a, b.a);
                EXPECT_EQ(a.v, b.v);
                EXPECT_EQ(a.prepared_value, b.prepared_value);
                EXPECT_EQ(a.verdict, b.verdict);
            }
        }
    }
}

TEST(run_round, timing_violation_rejects) {
    auto p = params(ProtocolVariant::fbb84, 1, 1, 0);
    auto f = FunctionTable::xor_function(1);
    Geometry g = symmetric_geometry();
    g.prover_delay = 0.5;
    Rng rng(2);
    auto tr = run_fbb84_round(p, f, g, rng);
    EXPECT_FALSE(tr.timing.on_time);
    EXPECT_EQ(tr.verdict, Verdict::reject);
    EXPECT_EQ(tr.reason, RejectReason::timing);
    g.tolerance = 0.5;
    EXPECT_EQ(run_fbb84_round(p, f, g, rng).verdict, Verdict::accept);
}

TEST(purified_verifier_measurement, bb84_matches_prover) {
    Layout layout({{"V", 2}, {"Q", 2}});
    Rng rng(3);
    for (int t = 0; t < 200; t++) {
        BitString z = rng.bits(2);
        // V_i (qubit i) paired with Q_i (qubit 2 + i).
        Amplitudes amps = Amplitudes::Zero(16);
        for (int v = 0; v < 4; v++) {
            amps[v | (v << 2)] = 0.5;
        }
        StateVector s(layout, amps);
        BitString v(2);
        for (int i = 0; i < 2; i++) {
            auto meas = measure_basis(s, 2 + i, z[i], rng);
            v.set(i, meas.outcome);
            s = meas.state;
        }
        EXPECT_EQ(purified_verifier_measurement(ProtocolVariant::fbb84, z, s, rng), v);
    }
}

TEST(purified_verifier_measurement, routing_checks) {
    Layout layout({{"V", 1}, {"R", 1}});
    Rng rng(4);
    StateVector phi(layout, epr_pair().amplitudes());
    for (int t = 0; t < 100; t++) {
        EXPECT_EQ(purified_verifier_measurement(ProtocolVariant::frouting, BitString::parse("1"), phi, rng)[0], 0);
    }
    // Returned qubit is half of an unrelated EPR pair: the (V, R) marginal is I/4.
    Layout big({{"V", 1}, {"R", 1}, {"S", 1}, {"T", 1}});
    Amplitudes amps = Amplitudes::Zero(16);
    for (int v = 0; v < 2; v++) {
        for (int r = 0; r < 2; r++) {
            amps[v | (r << 1) | (v << 2) | (r << 3)] = 0.5;
        }
    }
    StateVector mixed(big, amps);
    int bell_ok = 0;
    int delayed_ok = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; t++) {
        bell_ok += purified_verifier_measurement(ProtocolVariant::frouting, BitString::parse("0"), mixed, rng,
                                                 RoutingCheck::bell_projection)[0] == 0;
        delayed_ok += purified_verifier_measurement(ProtocolVariant::frouting, BitString::parse("0"), mixed, rng,
                                                    RoutingCheck::delayed_basis)[0] == 0;
    }
    EXPECT_NEAR(bell_ok / double(trials), 0.25, 4 * std::sqrt(0.25 * 0.75 / trials));
    EXPECT_NEAR(delayed_ok / double(trials), 0.5, 4 * std::sqrt(0.25 / trials));
    // Analytic: tr(|Phi+><Phi+| I/4) = 1/4.
    OperatorMatrix proj = projector_onto(epr_pair());
    int targets[2] = {0, 1};
    EXPECT_NEAR(project_probability(mixed, proj, targets), 0.25, 1e-12);
}

TEST(purified_verifier_measurement, register_errors) {
    Rng rng(1);
    StateVector flat(epr_pair().amplitudes());
    EXPECT_THROW(purified_verifier_measurement(ProtocolVariant::fbb84, BitString::parse("0"), flat, rng),
                 std::invalid_argument);
    Layout layout({{"V", 1}, {"Q", 1}});
    StateVector s(layout, epr_pair().amplitudes());
    EXPECT_THROW(purified_verifier_measurement(ProtocolVariant::fbb84, BitString::parse("00"), s, rng),
                 std::invalid_argument);
    EXPECT_THROW(purified_verifier_measurement(ProtocolVariant::frouting, BitString::parse("0"), s, rng),
                 std::invalid_argument);
}

TEST(pair_success, table) {
    EXPECT_EQ(pair_success(RoutingCheck::bell_projection, 0), 1.0);
    EXPECT_EQ(pair_success(RoutingCheck::bell_projection, 2), 0.0);
    EXPECT_EQ(pair_success(RoutingCheck::delayed_basis, 1), 0.5);
    EXPECT_EQ(pair_success(RoutingCheck::delayed_basis, 3), 0.0);
    EXPECT_THROW(pair_success(RoutingCheck::delayed_basis, 4), std::invalid_argument);
}

TEST(properties, honest_completeness_analytic) {
    // Every BB84 state is accepted by its own measurement with probability exactly 1.
    for (int a = 0; a < 2; a++) {
        for (int z = 0; z < 2; z++) {
            BitString ba(1), bz(1);
            ba.set(0, a);
            bz.set(0, z);
            StateVector s = bb84_encode(ba, bz);
            int q = 0;
            EXPECT_NEAR(project_probability(s, projector_onto(s), {&q, 1}), 1.0, 1e-15);
        }
    }
    Layout layout({{"V", 1}, {"R", 1}});
    StateVector phi(layout, epr_pair().amplitudes());
    int targets[2] = {0, 1};
    EXPECT_NEAR(project_probability(phi, projector_onto(epr_pair()), targets), 1.0, 1e-15);
    for (auto v : {ProtocolVariant::fbb84, ProtocolVariant::frouting, ProtocolVariant::plain_bb84}) {
        EXPECT_EQ(analytic_acceptance(params(v, 2, 7, 0)), 1.0);
    }
}

TEST(properties, pictures_agree) {
    const int trials = 20000;
    for (auto v : {ProtocolVariant::fbb84, ProtocolVariant::frouting}) {
        for (Noise noise : {Noise{NoiseKind::flip, 0.2}, Noise{NoiseKind::depolarizing, 0.3}}) {
            auto p = params(v, 2, 3, 0.34, noise);
            auto f = sample_function(2, 3, 11);
            double pm = acceptance_rate(p, f, trials, 1, {Picture::prepare_and_measure});
            double pu = acceptance_rate(p, f, trials, 2, {Picture::purified, RoutingCheck::delayed_basis});
            double sigma = std::sqrt((pm * (1 - pm) + pu * (1 - pu)) / trials);
            EXPECT_NEAR(pm, pu, 4 * sigma + 1e-12) << to_string(v) << " " << to_string(noise);
            double exact = analytic_acceptance(p);
            EXPECT_NEAR(pm, exact, 4 * std::sqrt(exact * (1 - exact) / trials) + 1e-12);
        }
    }
    // The Bell-projection check sees 3p/4 depolarizing error.
    auto p = params(ProtocolVariant::frouting, 1, 1, 0, Noise{NoiseKind::depolarizing, 0.4});
    double exact = analytic_acceptance(p, Picture::purified, RoutingCheck::bell_projection);
    EXPECT_NEAR(exact, 0.7, 1e-15);
    double rate = acceptance_rate(p, FunctionTable::xor_function(1), trials, 3,
                                  {Picture::purified, RoutingCheck::bell_projection});
    EXPECT_NEAR(rate, exact, 4 * std::sqrt(exact * (1 - exact) / trials));
}

TEST(properties, monotone_in_gamma) {
    for (auto v : {ProtocolVariant::fbb84, ProtocolVariant::frouting}) {
        double prev = 0;
        for (int k = 0; k < 50; k++) {
            auto p = params(v, 3, 40, 0.01 * k, Noise{NoiseKind::depolarizing, 0.2});
            double cur = analytic_acceptance(p);
            EXPECT_GE(cur, prev);
            prev = cur;
        }
    }
}

#include "qpv/protocols.h"

#include <cmath>
#include <stdexcept>

#include "qpv/stats.h"

namespace qpv {

std::string to_string(ProtocolVariant v) {
    switch (v) {
        case ProtocolVariant::fbb84:
            return "fbb84";
        case ProtocolVariant::frouting:
            return "frouting";
        case ProtocolVariant::plain_bb84:
            return "plain-bb84";
        case ProtocolVariant::plain_routing:
            return "plain-routing";
    }
    return "?";
}

ProtocolVariant parse_protocol_variant(const std::string& s) {
    if (s == "fbb84" || s == "bb84") {
        return ProtocolVariant::fbb84;
    }
    if (s == "frouting" || s == "routing") {
        return ProtocolVariant::frouting;
    }
    if (s == "plain-bb84" || s == "plain_bb84") {
        return ProtocolVariant::plain_bb84;
    }
    if (s == "plain-routing" || s == "plain_routing") {
        return ProtocolVariant::plain_routing;
    }
    throw std::invalid_argument("unknown protocol variant '" + s + "'");
}

bool is_routing(ProtocolVariant v) {
    return v == ProtocolVariant::frouting || v == ProtocolVariant::plain_routing;
}

bool is_plain(ProtocolVariant v) {
    return v == ProtocolVariant::plain_bb84 || v == ProtocolVariant::plain_routing;
}

std::string to_string(const Noise& n) {
    switch (n.kind) {
        case NoiseKind::none:
            return "none";
        case NoiseKind::flip:
            return "flip:" + std::to_string(n.p);
        case NoiseKind::depolarizing:
            return "depolarizing:" + std::to_string(n.p);
    }
    return "?";
}

Noise parse_noise(const std::string& s) {
    if (s == "none") {
        return {};
    }
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("noise must be 'none', 'flip:<p>' or 'depolarizing:<p>', got '" + s + "'");
    }
    std::string kind = s.substr(0, colon);
    Noise n;
    if (kind == "flip") {
        n.kind = NoiseKind::flip;
    } else if (kind == "depolarizing" || kind == "depol") {
        n.kind = NoiseKind::depolarizing;
    } else {
        throw std::invalid_argument("unknown noise kind '" + kind + "'");
    }
    try {
        std::size_t used = 0;
        std::string num = s.substr(colon + 1);
        n.p = std::stod(num, &used);
        if (used != num.size()) {
            throw std::invalid_argument("trailing characters");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad noise probability in '" + s + "'");
    }
    if (!(n.p >= 0 && n.p <= 1)) {
        throw std::invalid_argument("noise probability must lie in [0, 1]");
    }
    return n;
}

void ProtocolParams::validate() const {
    if (!(gamma >= 0 && gamma < 0.5)) {
        throw std::invalid_argument("gamma must lie in [0, 0.5)");
    }
    if (m < 1) {
        throw std::invalid_argument("m must be at least 1");
    }
    if (!is_plain(variant) && n < 1) {
        throw std::invalid_argument("n must be at least 1 for f-variants");
    }
    if (!(noise.p >= 0 && noise.p <= 1)) {
        throw std::invalid_argument("noise probability must lie in [0, 1]");
    }
    if (!(quantum_speed > 0 && quantum_speed <= 1)) {
        throw std::invalid_argument("quantum_speed must lie in (0, 1]");
    }
}

int ProtocolParams::input_bits() const {
    return is_plain(variant) ? m : n;
}

std::string to_string(RoutingCheck c) {
    return c == RoutingCheck::bell_projection ? "bell-projection" : "delayed-basis";
}

RoutingCheck parse_routing_check(const std::string& s) {
    if (s == "bell-projection" || s == "bell_projection") {
        return RoutingCheck::bell_projection;
    }
    if (s == "delayed-basis" || s == "delayed_basis") {
        return RoutingCheck::delayed_basis;
    }
    throw std::invalid_argument("unknown routing check '" + s + "'");
}

double pair_success(RoutingCheck check, int bell_label) {
    if (bell_label < 0 || bell_label > 3) {
        throw std::invalid_argument("bell label must be in 0..3");
    }
    if (check == RoutingCheck::bell_projection) {
        return bell_label == 0 ? 1.0 : 0.0;
    }
    static constexpr double kDelayed[4] = {1.0, 0.5, 0.5, 0.0};
    return kDelayed[bell_label];
}

std::string to_string(Verdict v) {
    return v == Verdict::accept ? "accept" : "reject";
}

std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::none:
            return "none";
        case RejectReason::outcome:
            return "outcome";
        case RejectReason::timing:
            return "timing";
        case RejectReason::missing_qubit:
            return "missing-qubit";
    }
    return "?";
}

int error_budget(double gamma, int m) {
    return static_cast<int>(std::floor(gamma * m + 1e-9));
}

Verdict accept_decision(ProtocolVariant variant, const BitString& a, const std::optional<BitString>& v, double gamma,
                        int m) {
    if (a.size() != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("accept_decision: a must have m bits");
    }
    int budget = error_budget(gamma, m);
    std::size_t errors;
    if (is_routing(variant)) {
        errors = hamming_weight(a);
    } else {
        if (!v) {
            throw std::invalid_argument("accept_decision: BB84 variants need the prover response v");
        }
        if (v->size() != a.size()) {
            throw std::invalid_argument("accept_decision: v must have m bits");
        }
        errors = hamming_distance(a, *v);
    }
    return static_cast<int>(errors) <= budget ? Verdict::accept : Verdict::reject;
}

double default_challenge_arrival(const Geometry& geom, double quantum_speed) {
    return std::max((geom.pos - geom.v0) / quantum_speed, geom.v1 - geom.pos);
}

namespace {

void check_variant(const ProtocolParams& params, bool routing, const char* who) {
    params.validate();
    if (is_routing(params.variant) != routing) {
        throw std::invalid_argument(std::string(who) + ": wrong protocol variant " + to_string(params.variant));
    }
}

BitString draw_basis(const ProtocolParams& params, const FunctionTable& f, Transcript& t, Rng& rng) {
    int bits = params.input_bits();
    t.x = rng.bits(bits);
    t.y = rng.bits(bits);
    if (is_plain(params.variant)) {
        return t.y;
    }
    if (f.n() != params.n || f.m() != params.m) {
        throw std::invalid_argument("function table shape does not match (n, m)");
    }
    return f(t.x, t.y);
}

// 0 for no error, else the Pauli index 1 (X), 2 (Y), 3 (Z).
int draw_depolarizing(const Noise& noise, Rng& rng) {
    if (noise.kind != NoiseKind::depolarizing || !rng.bernoulli(noise.p)) {
        return 0;
    }
    return static_cast<int>(rng.below(4));
}

// Does Pauli `pauli` flip the outcome of a measurement in `basis`?
bool pauli_flips(int pauli, int basis) {
    if (pauli == 2) {
        return true;
    }
    return basis == 0 ? pauli == 1 : pauli == 3;
}

Matrix pauli_matrix(int pauli) {
    switch (pauli) {
        case 1:
            return gates::pauli_x();
        case 2:
            return gates::pauli_y();
        case 3:
            return gates::pauli_z();
        default:
            return gates::identity(1);
    }
}

TimingRecord honest_timing(const ProtocolParams& params, const Geometry& geom, bool quantum_replies) {
    geom.validate();
    TimingRecord rec;
    rec.challenge_arrival = default_challenge_arrival(geom, params.quantum_speed);
    ChallengeSchedule plan = plan_simultaneous(geom, rec.challenge_arrival, params.quantum_speed);
    ResponseTiming resp = honest_responses(geom, rec.challenge_arrival);
    rec.arrival_v0 = resp.arrival_v0;
    rec.arrival_v1 = resp.arrival_v1;
    rec.messages = plan.messages;
    for (auto msg : resp.messages) {
        if (quantum_replies) {
            msg.kind = PayloadKind::quantum;
        }
        rec.messages.push_back(msg);
    }
    rec.on_time = verify_timing(geom, rec.arrival_v0, rec.arrival_v1, rec.challenge_arrival);
    return rec;
}

void finish(Transcript& t, bool missing, double gamma, int m) {
    bool outcome_ok = accept_decision(t.variant, t.a, t.v, gamma, m) == Verdict::accept;
    if (missing) {
        t.reason = RejectReason::missing_qubit;
    } else if (!t.timing.on_time) {
        t.reason = RejectReason::timing;
    } else if (!outcome_ok) {
        t.reason = RejectReason::outcome;
    } else {
        t.reason = RejectReason::none;
    }
    t.verdict = t.reason == RejectReason::none ? Verdict::accept : Verdict::reject;
}

StateVector pair_state(const Layout& layout, const StateVector& pair) {
    return StateVector(layout, pair.amplitudes());
}

}  // namespace

Transcript run_fbb84_round(const ProtocolParams& params, const FunctionTable& f, const Geometry& geom, Rng& rng,
                           const RoundOptions& options) {
    check_variant(params, false, "run_fbb84_round");
    const int m = params.m;
    Transcript t;
    t.variant = params.variant;
    t.z = draw_basis(params, f, t, rng);
    BitString v(static_cast<std::size_t>(m));

    if (options.picture == Picture::prepare_and_measure) {
        t.a = rng.bits(static_cast<std::size_t>(m));
        for (int i = 0; i < m; i++) {
            // The prover measures H^z|a> in basis z: outcome a unless the channel flips it.
            bool flipped = false;
            if (params.noise.kind == NoiseKind::flip) {
                flipped = rng.bernoulli(params.noise.p);
            } else {
                flipped = pauli_flips(draw_depolarizing(params.noise, rng), t.z[i]);
            }
            v.set(i, t.a[i] ^ static_cast<int>(flipped));
        }
    } else {
        Layout layout({{"V", 1}, {"Q", 1}});
        BitString a(static_cast<std::size_t>(m));
        for (int i = 0; i < m; i++) {
            StateVector s = pair_state(layout, epr_pair());
            int pauli = draw_depolarizing(params.noise, rng);
            if (pauli != 0) {
                int q = 1;
                s = apply_operator(s, OperatorMatrix(pauli_matrix(pauli), OperatorKind::unitary), {&q, 1});
            }
            Measurement pm = measure_basis(s, 1, t.z[i], rng);
            int out = pm.outcome;
            if (params.noise.kind == NoiseKind::flip && rng.bernoulli(params.noise.p)) {
                out ^= 1;
            }
            v.set(i, out);
            BitString zi(1);
            zi.set(0, t.z[i]);
            a.set(i, purified_verifier_measurement(params.variant, zi, pm.state, rng)[0]);
        }
        t.a = a;
    }
    t.v = v;
    t.timing = honest_timing(params, geom, false);
    finish(t, false, params.gamma, m);
    return t;
}

Transcript run_frouting_round(const ProtocolParams& params, const FunctionTable& f, const Geometry& geom, Rng& rng,
                              const RoundOptions& options) {
    check_variant(params, true, "run_frouting_round");
    const int m = params.m;
    Transcript t;
    t.variant = params.variant;
    t.z = draw_basis(params, f, t, rng);
    if (options.routing_override) {
        if (options.routing_override->size() != static_cast<std::size_t>(m)) {
            throw std::invalid_argument("routing override must have m entries");
        }
        t.destinations = *options.routing_override;
    } else {
        for (int i = 0; i < m; i++) {
            t.destinations.push_back(t.z[i]);
        }
    }
    for (int d : t.destinations) {
        if (d != 0 && d != 1) {
            throw std::invalid_argument("routing destinations must be 0 or 1");
        }
    }

    BitString a(static_cast<std::size_t>(m));
    bool missing = false;
    if (options.picture == Picture::prepare_and_measure) {
        t.prepared_value = rng.bits(static_cast<std::size_t>(m));
        t.prepared_basis = rng.bits(static_cast<std::size_t>(m));
        for (int i = 0; i < m; i++) {
            int pauli = 0;
            if (params.noise.kind == NoiseKind::flip) {
                pauli = rng.bernoulli(params.noise.p) ? 1 : 0;
            } else {
                pauli = draw_depolarizing(params.noise, rng);
            }
            if (t.destinations[i] != t.z[i]) {
                missing = true;
                a.set(i, true);
                continue;
            }
            // Projection onto H^c|b> of P H^c|b> succeeds iff P commutes with the basis observable.
            a.set(i, pauli_flips(pauli, t.prepared_basis[i]));
        }
    } else {
        Layout layout({{"V", 1}, {"R", 1}});
        for (int i = 0; i < m; i++) {
            StateVector s = pair_state(layout, epr_pair());
            int pauli = 0;
            if (params.noise.kind == NoiseKind::flip) {
                pauli = rng.bernoulli(params.noise.p) ? 1 : 0;
            } else {
                pauli = draw_depolarizing(params.noise, rng);
            }
            if (pauli != 0) {
                int q = 1;
                s = apply_operator(s, OperatorMatrix(pauli_matrix(pauli), OperatorKind::unitary), {&q, 1});
            }
            if (t.destinations[i] != t.z[i]) {
                missing = true;
                a.set(i, true);
                continue;
            }
            BitString zi(1);
            zi.set(0, t.z[i]);
            a.set(i, purified_verifier_measurement(params.variant, zi, s, rng, options.check)[0]);
        }
    }
    t.a = a;
    t.timing = honest_timing(params, geom, true);
    finish(t, missing, params.gamma, m);
    return t;
}

Transcript run_round(const ProtocolParams& params, const FunctionTable& f, const Geometry& geom, Rng& rng,
                     const RoundOptions& options) {
    if (is_routing(params.variant)) {
        return run_frouting_round(params, f, geom, rng, options);
    }
    return run_fbb84_round(params, f, geom, rng, options);
}

BitString purified_verifier_measurement(ProtocolVariant variant, const BitString& z, const StateVector& joint,
                                        Rng& rng, RoutingCheck check) {
    const Layout& layout = joint.layout();
    if (!layout.has("V")) {
        throw std::invalid_argument("purified_verifier_measurement: layout has no 'V' register");
    }
    std::vector<int> vq = layout.qubits("V");
    if (vq.size() != z.size()) {
        throw std::invalid_argument("purified_verifier_measurement: V register width differs from |z|");
    }
    const std::size_t m = z.size();
    BitString a(m);
    if (!is_routing(variant)) {
        StateVector s = joint;
        for (std::size_t i = 0; i < m; i++) {
            Measurement meas = measure_basis(s, vq[i], z[i], rng);
            a.set(i, meas.outcome);
            s = meas.state;
        }
        return a;
    }
    if (!layout.has("R")) {
        throw std::invalid_argument("purified_verifier_measurement: routing needs the returned qubits in 'R'");
    }
    std::vector<int> rq = layout.qubits("R");
    if (rq.size() != m) {
        throw std::invalid_argument("purified_verifier_measurement: R register width differs from |z|");
    }
    Amplitudes amps = joint.amplitudes();
    const Matrix rot = gates::bell_rotation();
    for (std::size_t i = 0; i < m; i++) {
        int targets[2] = {vq[i], rq[i]};
        apply_matrix(amps, rot, targets);
        double probs[4] = {0, 0, 0, 0};
        for (Eigen::Index k = 0; k < amps.size(); k++) {
            int label = static_cast<int>((k >> vq[i]) & 1) + 2 * static_cast<int>((k >> rq[i]) & 1);
            probs[label] += std::norm(amps[k]);
        }
        double u = rng.uniform();
        int label = 3;
        double acc = 0;
        for (int l = 0; l < 4; l++) {
            acc += probs[l];
            if (u < acc) {
                label = l;
                break;
            }
        }
        while (probs[label] <= 0) {
            label--;
        }
        double norm = std::sqrt(probs[label]);
        for (Eigen::Index k = 0; k < amps.size(); k++) {
            int l = static_cast<int>((k >> vq[i]) & 1) + 2 * static_cast<int>((k >> rq[i]) & 1);
            amps[k] = l == label ? amps[k] / norm : Complex(0, 0);
        }
        double ps = pair_success(check, label);
        bool success = ps == 1.0 ? true : ps == 0.0 ? false : rng.bernoulli(ps);
        a.set(i, !success);
    }
    return a;
}

double honest_error_rate(const ProtocolParams& params, Picture picture, RoutingCheck check) {
    const double p = params.noise.p;
    switch (params.noise.kind) {
        case NoiseKind::none:
            return 0.0;
        case NoiseKind::flip:
            if (is_routing(params.variant) &&
                (picture == Picture::prepare_and_measure || check == RoutingCheck::delayed_basis)) {
                return p / 2;
            }
            return p;
        case NoiseKind::depolarizing:
            if (is_routing(params.variant) && picture == Picture::purified && check == RoutingCheck::bell_projection) {
                return 3 * p / 4;
            }
            return p / 2;
    }
    return 0.0;
}

double analytic_acceptance(const ProtocolParams& params, Picture picture, RoutingCheck check) {
    params.validate();
    return binomial_cdf(params.m, error_budget(params.gamma, params.m), honest_error_rate(params, picture, check));
}

}  // namespace qpv

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpv/bitstring.h"
#include "qpv/function_table.h"
#include "qpv/qcore.h"
#include "qpv/rng.h"
#include "qpv/spacetime.h"

namespace qpv {

enum class ProtocolVariant { fbb84, frouting, plain_bb84, plain_routing };

std::string to_string(ProtocolVariant v);
ProtocolVariant parse_protocol_variant(const std::string& s);
bool is_routing(ProtocolVariant v);
bool is_plain(ProtocolVariant v);

enum class NoiseKind { none, flip, depolarizing };

/// Channel noise on the V0 -> prover quantum channel, per qubit.
///  flip(p): BB84 outcome bit flipped / routing X error, with probability p.
///  depolarizing(p): uniformly random Pauli (I, X, Y, Z) with probability p.
struct Noise {
    NoiseKind kind = NoiseKind::none;
    double p = 0.0;
};

std::string to_string(const Noise& n);
/// "none", "flip:0.02", "depolarizing:0.1".
Noise parse_noise(const std::string& s);

struct ProtocolParams {
    ProtocolVariant variant = ProtocolVariant::fbb84;
    int n = 1;
    int m = 1;
    double gamma = 0.0;
    Noise noise;
    /// Speed of the V0 -> prover quantum message, in (0, 1].
    double quantum_speed = 1.0;

    void validate() const;
    /// n for f-variants; m for plain variants (z = y).
    int input_bits() const;
};

/// How the purified routing verifier checks a returned qubit against its
/// EPR half.
///  bell_projection: {|Phi+><Phi+|, I - |Phi+><Phi+|} per qubit.
///  delayed_basis: measure both in a uniformly random common basis and
///  compare; equivalent to the prepare-and-measure protocol.
enum class RoutingCheck { bell_projection, delayed_basis };

std::string to_string(RoutingCheck c);
RoutingCheck parse_routing_check(const std::string& s);

/// Probability that one (verifier half, returned qubit) pair passes, given
/// the pair's Bell label in bell_rotation order (0: Phi+, 1: Phi-, 2: Psi+, 3: Psi-).
double pair_success(RoutingCheck check, int bell_label);

enum class Picture { prepare_and_measure, purified };

enum class Verdict { accept, reject };
enum class RejectReason { none, outcome, timing, missing_qubit };

std::string to_string(Verdict v);
std::string to_string(RejectReason r);

struct TimingRecord {
    double challenge_arrival = 0;
    double arrival_v0 = 0;
    double arrival_v1 = 0;
    bool on_time = false;
    std::vector<TimedMessage> messages;
};

struct Transcript {
    ProtocolVariant variant;
    BitString x;
    BitString y;
    /// BB84: verifier's secret bits (or purified outcome). Routing: failure record.
    BitString a;
    BitString z;
    /// BB84 prover response.
    std::optional<BitString> v;
    /// Routing: prepared BB84 states H^{basis_i}|value_i>.
    BitString prepared_value;
    BitString prepared_basis;
    /// Routing: verifier index (0 or 1) each qubit was sent to.
    std::vector<int> destinations;
    TimingRecord timing;
    Verdict verdict = Verdict::reject;
    RejectReason reason = RejectReason::none;
};

struct RoundOptions {
    Picture picture = Picture::prepare_and_measure;
    RoutingCheck check = RoutingCheck::delayed_basis;
    /// Routing: replaces the honest destinations z_i.
    std::optional<std::vector<int>> routing_override;
};

/// floor(gamma * m) with a guard against representation error.
int error_budget(double gamma, int m);

/// BB84: accept iff d_H(a, v) <= floor(gamma m). Routing: w_H(a) <= floor(gamma m).
Verdict accept_decision(ProtocolVariant variant, const BitString& a, const std::optional<BitString>& v,
                        double gamma, int m);

Transcript run_fbb84_round(const ProtocolParams& params, const FunctionTable& f, const Geometry& geom, Rng& rng,
                           const RoundOptions& options = {});

Transcript run_frouting_round(const ProtocolParams& params, const FunctionTable& f, const Geometry& geom, Rng& rng,
                              const RoundOptions& options = {});

/// Dispatches on params.variant.
Transcript run_round(const ProtocolParams& params, const FunctionTable& f, const Geometry& geom, Rng& rng,
                     const RoundOptions& options = {});

/// Purified verifier outcome. BB84: samples a from {H^z|a><a|H^z} on register
/// "V". Routing: per qubit i checks (V_i, R_i) with `check` and returns the
/// failure bits; register "R" holds the returned qubits.
BitString purified_verifier_measurement(ProtocolVariant variant, const BitString& z, const StateVector& joint,
                                        Rng& rng, RoutingCheck check = RoutingCheck::bell_projection);

/// Per-qubit error probability of the honest protocol under `params.noise`.
double honest_error_rate(const ProtocolParams& params, Picture picture = Picture::prepare_and_measure,
                         RoutingCheck check = RoutingCheck::delayed_basis);

/// P[Bin(m, e) <= floor(gamma m)] with e = honest_error_rate.
double analytic_acceptance(const ProtocolParams& params, Picture picture = Picture::prepare_and_measure,
                           RoutingCheck check = RoutingCheck::delayed_basis);

/// Earliest challenge arrival at pos with all send times >= 0.
double default_challenge_arrival(const Geometry& geom, double quantum_speed);

}  // namespace qpv

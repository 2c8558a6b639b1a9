#pragma once

#include <string>

#include "qpv/stats.h"

namespace qpv {

enum class BoundVariant { bb84, routing };

std::string to_string(BoundVariant v);
BoundVariant parse_bound_variant(const std::string& s);

/// Every knob of the soundness theorems.
struct BoundParams {
    int n = 100;
    int m = 1;
    double gamma = 0.0;
    double epsilon = 0.25;
    double delta = 1e-5;
    double c = 0.999;
    BoundVariant variant = BoundVariant::bb84;
    /// Routing with m = 1 uses base 3/4 instead of mu_0.
    bool tight_routing_m1 = true;

    /// Range checks. With `theorem` set, also n > m and epsilon <= 2^{-m-1}.
    void validate(bool theorem = false) const;
};

/// cos^2(pi/8) = 1/2 + 1/(2 sqrt 2).
double lambda0();

/// -p log2 p - (1-p) log2(1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// bb84: 2^{h(gamma)} lambda0. routing: 2^{gamma + h(gamma)} lambda0.
double rate_constant(BoundVariant variant, double gamma);

/// Per-round base r_gamma used by the theorem; 3/4 for tightened routing m=1.
double base_rate(const BoundParams& p);

/// 2^{-m} -/+ sqrt(3 ln(2/eps)) / 2^{n + m/2}, lower end clamped at 0.
Interval chernoff_interval(int n, int m, double epsilon);

/// sqrt(3 ln(2/eps)) 2^{-n + m/2} < 1/4.
bool f_star_condition(int n, int m, double epsilon);

struct SoundnessBound {
    double value;
    /// value >= 1: the bound says nothing.
    bool trivial;
};

/// (r + Delta)^{cm} (1 + 3 sqrt(3 ln(2/eps)) 2^{-n+m/2}) + 21 Delta^m.
SoundnessBound soundness_bound(const BoundParams& p);

/// n -> infinity limit: (r + Delta)^{cm} + 21 Delta^m.
double soundness_asymptote(const BoundParams& p);

/// Upper bound on 2q:
/// n - c m log2(1/(r+Delta)) + log2[(1 - (r+Delta)^{1-c}) log2((r+Delta)/r) / (8 log2(1/Delta))].
double qubit_threshold(const BoundParams& p);

/// qubit_threshold / 2, the bound on q itself.
double max_qubits(const BoundParams& p);

/// Root of rate_constant(variant, gamma) + Delta = 1 on [0, 0.5), by
/// bisection to `tol`. Returns 0 when Delta >= 1 - lambda0.
double critical_gamma(BoundVariant variant, double delta, double tol = 1e-6);

/// 1 minus the one-round (m = 1, gamma = 0) soundness asymptote.
double sequential_tolerance(BoundVariant variant, double delta = 1e-5, double c = 0.999);

struct RoundingSizes {
    double k1;
    double k2;
    double k3;
    /// delta = 3 Delta^m.
    double net_delta;
    /// log2 of the net cardinality bound for states of 2q+m qubits (N = 2^{2q+m+1}).
    double state_net_log2;
    /// log2 of the net cardinality bound for q-qubit unitaries (N = 2 * 4^q).
    double unitary_net_log2;
};

/// k1 = k2 = log2(1/Delta) m 2^{2q+1}, k3 = log2(1/Delta) m 2^{2q+m+1}.
RoundingSizes rounding_sizes(int q, int m, double delta);

/// log2 of (3/delta)^N.
double net_size_log2(double N, double delta);

/// log2 of the inner exponent n - c m log2(1/(r+Delta)).
double failure_inner_exponent(const BoundParams& p);

/// The failure probability is 2^{-E}; returns -E = -m 2^{inner exponent}.
double failure_probability_log2(const BoundParams& p);

/// Markov-type lower bound (omega1 - omega0)/(1 - omega0) on the fraction of
/// input pairs with success at least omega0.
double markov_fraction_bound(double omega1, double omega0);

}  // namespace qpv

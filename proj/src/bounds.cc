#include "qpv/bounds.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpv {

std::string to_string(BoundVariant v) {
    return v == BoundVariant::bb84 ? "bb84" : "routing";
}

BoundVariant parse_bound_variant(const std::string& s) {
    if (s == "bb84" || s == "fbb84") {
        return BoundVariant::bb84;
    }
    if (s == "routing" || s == "frouting") {
        return BoundVariant::routing;
    }
    throw std::invalid_argument("unknown bound variant '" + s + "' (expected bb84 or routing)");
}

void BoundParams::validate(bool theorem) const {
    if (n < 1 || m < 1) {
        throw std::invalid_argument("bound params need n >= 1 and m >= 1");
    }
    if (!(gamma >= 0 && gamma < 0.5)) {
        throw std::invalid_argument("gamma must lie in [0, 0.5)");
    }
    if (!(epsilon > 0 && epsilon < 2)) {
        throw std::invalid_argument("epsilon must lie in (0, 2)");
    }
    if (!(delta > 0)) {
        throw std::invalid_argument("Delta must be positive");
    }
    if (!(c > 0 && c < 1)) {
        throw std::invalid_argument("c must lie in (0, 1)");
    }
    if (theorem) {
        if (n <= m) {
            throw std::invalid_argument("theorem requires n > m");
        }
        if (epsilon > std::ldexp(1.0, -m - 1)) {
            throw std::invalid_argument("theorem requires epsilon <= 2^{-m-1}");
        }
    }
}

double lambda0() {
    return 0.5 + 1.0 / (2.0 * std::numbers::sqrt2);
}

double binary_entropy(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
    }
    if (p == 0 || p == 1) {
        return 0.0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

double rate_constant(BoundVariant variant, double gamma) {
    if (!(gamma >= 0 && gamma < 0.5)) {
        throw std::invalid_argument("rate_constant: gamma must lie in [0, 0.5)");
    }
    double e = binary_entropy(gamma);
    if (variant == BoundVariant::routing) {
        e += gamma;
    }
    return std::exp2(e) * lambda0();
}

double base_rate(const BoundParams& p) {
    if (p.variant == BoundVariant::routing && p.m == 1 && p.tight_routing_m1) {
        return 0.75;
    }
    // A single round accepts only on a correct answer, so gamma plays no role.
    double gamma = p.m == 1 ? 0.0 : p.gamma;
    return rate_constant(p.variant, gamma);
}

namespace {

// sqrt(3 ln(2/eps)) 2^{-n + m/2}; ldexp keeps large n exact.
double chernoff_radius(int n, int m, double epsilon) {
    if (!(epsilon > 0 && epsilon <= 2)) {
        throw std::invalid_argument("epsilon must lie in (0, 2]");
    }
    return std::sqrt(3 * std::log(2 / epsilon)) * std::ldexp(std::exp2(m / 2.0), -n);
}

}  // namespace

Interval chernoff_interval(int n, int m, double epsilon) {
    double center = std::ldexp(1.0, -m);
    double half = chernoff_radius(n, m, epsilon) * std::ldexp(1.0, -m);
    return {std::max(0.0, center - half), center + half};
}

bool f_star_condition(int n, int m, double epsilon) {
    return chernoff_radius(n, m, epsilon) < 0.25;
}

SoundnessBound soundness_bound(const BoundParams& p) {
    p.validate();
    double base = base_rate(p) + p.delta;
    double value = std::pow(base, p.c * p.m) * (1 + 3 * chernoff_radius(p.n, p.m, p.epsilon)) +
                   21 * std::pow(p.delta, p.m);
    return {value, value >= 1};
}

double soundness_asymptote(const BoundParams& p) {
    p.validate();
    return std::pow(base_rate(p) + p.delta, p.c * p.m) + 21 * std::pow(p.delta, p.m);
}

double qubit_threshold(const BoundParams& p) {
    p.validate();
    double r = base_rate(p);
    double b = r + p.delta;
    if (b >= 1) {
        throw std::invalid_argument("qubit_threshold requires r + Delta < 1");
    }
    if (p.delta >= 1) {
        throw std::invalid_argument("qubit_threshold requires Delta < 1");
    }
    double inner = (1 - std::pow(b, 1 - p.c)) * std::log2(b / r) / (8 * std::log2(1 / p.delta));
    return p.n - p.c * p.m * std::log2(1 / b) + std::log2(inner);
}

double max_qubits(const BoundParams& p) {
    return qubit_threshold(p) / 2;
}

double critical_gamma(BoundVariant variant, double delta, double tol) {
    auto g = [&](double gamma) { return rate_constant(variant, gamma) + delta - 1; };
    if (g(0) >= 0) {
        return 0.0;
    }
    double lo = 0;
    double hi = std::nextafter(0.5, 0.0);
    if (g(hi) < 0) {
        return hi;
    }
    while (hi - lo > tol) {
        double mid = (lo + hi) / 2;
        if (g(mid) < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

double sequential_tolerance(BoundVariant variant, double delta, double c) {
    BoundParams p;
    p.variant = variant;
    p.m = 1;
    p.gamma = 0;
    p.delta = delta;
    p.c = c;
    return 1 - soundness_asymptote(p);
}

RoundingSizes rounding_sizes(int q, int m, double delta) {
    if (!(delta > 0 && delta < 1)) {
        throw std::invalid_argument("rounding_sizes: Delta must lie in (0, 1)");
    }
    if (q < 0 || m < 1) {
        throw std::invalid_argument("rounding_sizes: need q >= 0 and m >= 1");
    }
    double l = std::log2(1 / delta) * m;
    RoundingSizes r;
    r.k1 = l * std::exp2(2 * q + 1);
    r.k2 = r.k1;
    r.k3 = l * std::exp2(2 * q + m + 1);
    r.net_delta = 3 * std::pow(delta, m);
    r.state_net_log2 = net_size_log2(std::exp2(2 * q + m + 1), r.net_delta);
    r.unitary_net_log2 = net_size_log2(2 * std::exp2(2 * q), r.net_delta);
    return r;
}

double net_size_log2(double N, double delta) {
    if (!(delta > 0) || N < 0) {
        throw std::invalid_argument("net_size_log2: need N >= 0 and delta > 0");
    }
    return N * std::log2(3 / delta);
}

double failure_inner_exponent(const BoundParams& p) {
    p.validate();
    double b = base_rate(p) + p.delta;
    return p.n - p.c * p.m * std::log2(1 / b);
}

double failure_probability_log2(const BoundParams& p) {
    return -p.m * std::exp2(failure_inner_exponent(p));
}

double markov_fraction_bound(double omega1, double omega0) {
    if (!(omega0 > 0 && omega0 < 1)) {
        throw std::invalid_argument("omega0 must lie in (0, 1)");
    }
    return (omega1 - omega0) / (1 - omega0);
}

}  // namespace qpv

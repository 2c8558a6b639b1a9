#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qpv/function_table.h"
#include "qpv/protocols.h"
#include "qpv/rng.h"
#include "qpv/strategy.h"

namespace qpv {

/// Full tables enumerate all 2^{2n} pairs up to this n.
inline constexpr int kMaxTableN = 6;

using InputPair = std::pair<std::uint64_t, std::uint64_t>;

struct SuccessTable {
    int n = 0;
    /// Lex indices (x, y) of each entry; all pairs in x-major order when exhaustive.
    std::vector<InputPair> pairs;
    std::vector<double> p;
    double mean = 0;
    bool exhaustive = true;
};

struct EvalOptions {
    /// Routing only. The default is the per-qubit Phi+ projection.
    RoutingCheck check = RoutingCheck::bell_projection;
    /// Restrict to these pairs (needed for n > kMaxTableN).
    std::optional<std::vector<InputPair>> pairs;
};

/// Exact success probability of a BB84-kind strategy for every input pair.
SuccessTable attack_success_bb84(const Strategy& s, const FunctionTable& f, double gamma,
                                 const EvalOptions& options = {});

/// Exact success probability of a routing-kind strategy for every input pair.
SuccessTable attack_success_routing(const Strategy& s, const FunctionTable& f, double gamma,
                                    const EvalOptions& options = {});

/// Dispatches on the strategy kind.
SuccessTable attack_success(const Strategy& s, const FunctionTable& f, double gamma, const EvalOptions& options = {});

/// Success for one input triple; z must equal f(x, y) for the result to mean anything.
double pair_attack_success(const Strategy& s, std::uint64_t x, std::uint64_t y, std::uint64_t z, double gamma,
                           RoutingCheck check = RoutingCheck::bell_projection);

/// m independent rounds of a one-round, input-independent component
/// evaluated without building the m-round state.
SuccessTable product_success(const Strategy& component, int m, const FunctionTable& f, double gamma,
                             const EvalOptions& options = {});

/// Samples attack rounds: draws (x, y), measures the verifier register and
/// both attackers, and reports whether the verifiers accept the outcome.
class AttackSampler {
public:
    AttackSampler(Strategy s, FunctionTable f, double gamma, RoutingCheck check = RoutingCheck::bell_projection);
    bool sample(Rng& rng) const;

private:
    Strategy s_;
    FunctionTable f_;
    double gamma_;
    RoutingCheck check_;
    std::vector<std::vector<Matrix>> alice_sqrt_;
    std::vector<std::vector<Matrix>> bob_sqrt_;
};

/// Returns a delta-approximation: state within 2-norm delta, every unitary
/// (U^x, V^y, and routing K, L) within operator norm delta. POVMs unchanged.
Strategy perturb_strategy(const Strategy& s, double delta, Rng& rng);

/// Largest singular value of a - b.
double operator_distance(const Matrix& a, const Matrix& b);

/// Fraction of entries with p >= omega0.
double good_fraction(const SuccessTable& table, double omega0);

/// Fraction of entries with p < w.
double empirical_cdf(const SuccessTable& table, double w);

struct FisOptimum {
    double best = 0;
    double theta = 0;
    double phi = 0;
    int answer_basis0 = 0;
    int answer_basis1 = 0;
    /// |<breidbart|psi>|^2 at the maximizer.
    double breidbart_fidelity = 0;
    std::uint64_t points = 0;
    /// Largest value seen anywhere on the grid.
    double max_seen = 0;
};

/// Grid search over single-qubit V states cos(t/2)|0> + e^{i p} sin(t/2)|1>
/// with t = pi k / resolution (k = 0..resolution) and p = 2 pi j / resolution
/// (j < resolution), and over the four deterministic answer pairs.
/// `computational_only` restricts to t in {0, pi}.
FisOptimum brute_force_fis_m1(int resolution, bool computational_only = false);

/// Success of (state psi, answer c0 in basis 0, answer c1 in basis 1).
double fis_m1_value(const StateVector& psi, int c0, int c1);

}  // namespace qpv

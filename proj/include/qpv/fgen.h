#pragma once

#include <cstdint>
#include <vector>

#include "qpv/function_table.h"
#include "qpv/rng.h"
#include "qpv/stats.h"

namespace qpv {

enum class FunctionForm { explicit_table, seeded };

/// Uniformly random f determined by (n, m, seed). The explicit form is the
/// enumeration of the seeded form, so both agree on every input.
FunctionTable sample_function(int n, int m, std::uint64_t seed, FunctionForm form = FunctionForm::explicit_table);

/// Exact output distribution of f.
struct FunctionStats {
    int n;
    int m;
    /// n_z, indexed by lex index of z.
    std::vector<std::uint64_t> counts;
    /// q_f(z) = n_z / 2^{2n}.
    std::vector<double> probabilities;
    /// q_f(z) - 2^{-m}.
    std::vector<double> deviations;
};

inline constexpr int kMaxEnumerationBits = 30;
inline constexpr int kMaxDistributionM = 20;

/// Requires 2n <= 30 and m <= 20.
FunctionStats distribution(const FunctionTable& f);

/// q_f(z) inside the concentration interval for every z; with `star` the
/// side condition on (n, m, epsilon) must also hold.
bool membership(const FunctionTable& f, double epsilon, bool star = false);
bool membership(const FunctionStats& stats, double epsilon, bool star = false);

struct MemberSample {
    FunctionTable f;
    std::uint64_t seed;
    int attempts;
};

/// Draws f with seeds derive_seed(seed, 0), derive_seed(seed, 1), ... until
/// membership holds. Throws std::runtime_error after max_attempts.
MemberSample resample_until_member(
    int n, int m, double epsilon, bool star, std::uint64_t seed, int max_attempts = 1000);

/// Streaming estimate of q_f from uniformly sampled (x, y) pairs.
struct DistributionEstimate {
    std::uint64_t samples;
    std::vector<double> q_hat;
    std::vector<Interval> intervals;
    /// Every Wilson interval meets the concentration interval.
    bool consistent_with_membership;
};

DistributionEstimate estimate_distribution(const FunctionTable& f, std::uint64_t samples, double epsilon, Rng& rng);

}  // namespace qpv

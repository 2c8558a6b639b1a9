#pragma once

#include <cstdint>
#include <functional>

#include "qpv/rng.h"
#include "qpv/stats.h"

namespace qpv {

/// One Bernoulli trial. Called concurrently; must not share mutable state.
using Estimator = std::function<bool(Rng&)>;

struct MonteCarloResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double mean = 0;
    /// 95% Wilson interval.
    Interval interval{0, 1};
};

/// Thread count for `requested` workers (0 means hardware concurrency),
/// capped by the QPV_THREADS environment variable. Throws ConfigError when
/// QPV_THREADS is set but not a positive integer.
int effective_threads(int requested = 0);

/// Trial i runs on Rng(derive_seed(master_seed, i)). Successes are summed in
/// trial order, so the result does not depend on `threads`. An exception from
/// a trial is rethrown (lowest failing block first).
MonteCarloResult monte_carlo(const Estimator& estimator, std::uint64_t trials, std::uint64_t master_seed,
                             int threads = 0);

}  // namespace qpv

#include "qpv/experiment/monte_carlo.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "qpv/experiment/config.h"

namespace qpv {

int effective_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(n, 1);
    if (const char* env = std::getenv("QPV_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (*env == '\0' || *end != '\0' || cap < 1) {
            throw ConfigError("QPV_THREADS must be a positive integer, got '" + std::string(env) + "'");
        }
        n = std::min<long>(n, cap);
    }
    return n;
}

MonteCarloResult monte_carlo(const Estimator& estimator, std::uint64_t trials, std::uint64_t master_seed,
                             int threads) {
    MonteCarloResult r;
    r.trials = trials;
    if (trials == 0) {
        r.interval = wilson_interval(0, 0);
        return r;
    }
    auto workers = static_cast<std::uint64_t>(effective_threads(threads));
    workers = std::min(workers, trials);
    std::vector<std::uint64_t> counts(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    auto run_block = [&](std::uint64_t w) {
        std::uint64_t begin = trials * w / workers;
        std::uint64_t end = trials * (w + 1) / workers;
        try {
            for (std::uint64_t i = begin; i < end; i++) {
                Rng rng(derive_seed(master_seed, i));
                counts[w] += estimator(rng) ? 1 : 0;
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < workers; w++) {
            pool.emplace_back(run_block, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    for (auto c : counts) {
        r.successes += c;
    }
    r.mean = static_cast<double>(r.successes) / static_cast<double>(trials);
    r.interval = wilson_interval(r.successes, trials);
    return r;
}

}  // namespace qpv

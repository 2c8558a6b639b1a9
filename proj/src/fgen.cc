#include "qpv/fgen.h"

#include <cmath>
#include <stdexcept>

#include "qpv/bounds.h"

namespace qpv {

FunctionTable sample_function(int n, int m, std::uint64_t seed, FunctionForm form) {
    FunctionTable f = FunctionTable::seeded(n, m, seed);
    if (form == FunctionForm::seeded) {
        return f;
    }
    return f.materialize();
}

FunctionStats distribution(const FunctionTable& f) {
    if (2 * f.n() > kMaxEnumerationBits) {
        throw std::invalid_argument(
            "distribution: enumerating 2^" + std::to_string(2 * f.n()) + " inputs is infeasible");
    }
    if (f.m() > kMaxDistributionM) {
        throw std::invalid_argument("distribution: m must be at most " + std::to_string(kMaxDistributionM));
    }
    FunctionStats s;
    s.n = f.n();
    s.m = f.m();
    s.counts.assign(std::size_t{1} << f.m(), 0);
    if (f.is_seeded()) {
        const std::uint64_t side = std::uint64_t{1} << f.n();
        for (std::uint64_t x = 0; x < side; x++) {
            for (std::uint64_t y = 0; y < side; y++) {
                s.counts[f.eval_index(x, y)]++;
            }
        }
    } else {
        for (auto z : f.outputs()) {
            s.counts[z]++;
        }
    }
    const double total = std::ldexp(1.0, 2 * f.n());
    const double uniform = std::ldexp(1.0, -f.m());
    s.probabilities.resize(s.counts.size());
    s.deviations.resize(s.counts.size());
    for (std::size_t z = 0; z < s.counts.size(); z++) {
        s.probabilities[z] = static_cast<double>(s.counts[z]) / total;
        s.deviations[z] = s.probabilities[z] - uniform;
    }
    return s;
}

bool membership(const FunctionStats& stats, double epsilon, bool star) {
    Interval ci = chernoff_interval(stats.n, stats.m, epsilon);
    if (star && !f_star_condition(stats.n, stats.m, epsilon)) {
        return false;
    }
    for (double q : stats.probabilities) {
        if (!ci.contains(q)) {
            return false;
        }
    }
    return true;
}

bool membership(const FunctionTable& f, double epsilon, bool star) {
    return membership(distribution(f), epsilon, star);
}

MemberSample resample_until_member(int n, int m, double epsilon, bool star, std::uint64_t seed, int max_attempts) {
    if (star && !f_star_condition(n, m, epsilon)) {
        throw std::invalid_argument("no function is a member: the side condition fails for these (n, m, epsilon)");
    }
    for (int attempt = 0; attempt < max_attempts; attempt++) {
        std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(attempt));
        FunctionTable f = sample_function(n, m, s, n <= kMaxExplicitN ? FunctionForm::explicit_table
                                                                      : FunctionForm::seeded);
        if (membership(f, epsilon, star)) {
            return MemberSample{std::move(f), s, attempt + 1};
        }
    }
    throw std::runtime_error("resample_until_member: no member after " + std::to_string(max_attempts) + " attempts");
}

DistributionEstimate estimate_distribution(const FunctionTable& f, std::uint64_t samples, double epsilon, Rng& rng) {
    if (f.m() > kMaxDistributionM) {
        throw std::invalid_argument("estimate_distribution: m must be at most " + std::to_string(kMaxDistributionM));
    }
    std::vector<std::uint64_t> hits(std::size_t{1} << f.m(), 0);
    for (std::uint64_t i = 0; i < samples; i++) {
        BitString x = rng.bits(f.n());
        BitString y = rng.bits(f.n());
        hits[f(x, y).lex_index()]++;
    }
    DistributionEstimate e;
    e.samples = samples;
    e.consistent_with_membership = true;
    Interval ci = chernoff_interval(f.n(), f.m(), epsilon);
    for (auto h : hits) {
        e.q_hat.push_back(samples ? static_cast<double>(h) / samples : 0.0);
        Interval w = wilson_interval(h, samples);
        e.intervals.push_back(w);
        if (w.hi < ci.lo || w.lo > ci.hi) {
            e.consistent_with_membership = false;
        }
    }
    return e;
}

}  // namespace qpv

#pragma once

#include <cstdint>

namespace qpv {

struct Interval {
    double lo = 0;
    double hi = 0;

    bool contains(double v) const { return lo <= v && v <= hi; }
    double width() const { return hi - lo; }
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
/// Zero trials give [0, 1].
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// C(n, k) p^k (1-p)^(n-k), evaluated in log space.
double binomial_pmf(int n, int k, double p);

/// P[Bin(n, p) <= k]; 0 for k < 0 and 1 for k >= n.
double binomial_cdf(int n, int k, double p);

}  // namespace qpv

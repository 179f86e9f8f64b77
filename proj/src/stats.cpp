#include "trendlink/stats.hpp"

#include "trendlink/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trendlink::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw InputError("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double percentile(std::span<const double> xs, double p) {
    if (xs.empty()) throw InputError("percentile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("percentile rank must lie in [0, 1]");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<Summary> summarize(std::span<const double> xs) {
    if (xs.empty()) return std::nullopt;
    Summary s;
    s.count = xs.size();
    s.mean = mean(xs);
    s.p25 = percentile(xs, 0.25);
    s.median = percentile(xs, 0.5);
    s.p75 = percentile(xs, 0.75);
    return s;
}

}  // namespace trendlink::stats

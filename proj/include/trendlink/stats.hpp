#pragma once

#include <optional>
#include <span>
#include <vector>

namespace trendlink::stats {

double mean(std::span<const double> xs);

/// Linear interpolation between order statistics: h = (n - 1) p.
/// `p` in [0, 1]; input need not be sorted.
double percentile(std::span<const double> xs, double p);

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
};

/// Empty optional for an empty sample.
std::optional<Summary> summarize(std::span<const double> xs);

}  // namespace trendlink::stats

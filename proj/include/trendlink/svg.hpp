#pragma once

#include "trendlink/correlate.hpp"
#include "trendlink/portfolio.hpp"
#include "trendlink/preprocess.hpp"

#include <string>

namespace trendlink::svg {

struct RenderOptions {
    /// Omits the generation timestamp so identical inputs give identical files.
    bool reproducible = false;
};

/// Bar chart of binned best taus. Throws InputError on an empty histogram.
std::string histogram(const portfolio::Histogram& h, const RenderOptions& opt);

/// Normalized interest and valuation on a shared calendar-week axis, y in
/// [0, 1]. When the result carries a lag, the valuation is also drawn moved
/// by that lag and the chart is annotated with it.
std::string overlay(const WeeklySeries& interest, const WeeklySeries& valuation,
                    const CorrelationResult& result, const RenderOptions& opt);

/// "lag = -97 weeks"
std::string lag_label(std::int64_t lag);

}  // namespace trendlink::svg

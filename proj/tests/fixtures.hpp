#pragma once

#include "trendlink/correlate.hpp"
#include "trendlink/portfolio.hpp"

#include <fmt/format.h>

#include <vector>

namespace fixture {

struct QcaFixture {
    std::vector<trendlink::CorrelationResult> results;
    trendlink::portfolio::FeatureMap features;
};

/// Three crisp ventures per configuration of (b2c, platform, unicorn). Every
/// unicorn configuration and the b2c platform non-unicorns correlate strongly;
/// the remaining configurations mix weak and middling taus, so neither their
/// high nor their low outcome is consistent.
inline QcaFixture table9_pattern() {
    QcaFixture f;
    for (unsigned cfg = 0; cfg < 8; ++cfg) {
        const bool b2c = cfg & 1U;
        const bool platform = cfg & 2U;
        const bool unicorn = cfg & 4U;
        const bool strong = unicorn || (b2c && platform);
        const double taus_strong[] = {0.85, 0.9, 0.95};
        const double taus_mixed[] = {0.3, 0.45, 0.6};
        for (int i = 0; i < 3; ++i) {
            trendlink::CorrelationResult r;
            r.company_id = fmt::format("q{}{}", cfg, i);
            r.tau_best = strong ? taus_strong[i] : taus_mixed[i];
            r.tau_zero = r.tau_best;
            r.group = r.tau_best >= 0.5 ? trendlink::Group::G1 : trendlink::Group::G3;
            r.n = 100;
            f.results.push_back(r);
            f.features[r.company_id] = {unicorn, b2c, platform};
        }
    }
    return f;
}

}  // namespace fixture

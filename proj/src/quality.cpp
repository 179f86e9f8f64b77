#include "trendlink/quality.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace trendlink::quality {

namespace {

double mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::Good ? "good" : "bad"; }

double score_brand_category(bool unique, CategoryGroup group) {
    if (group == CategoryGroup::A) return unique ? 1.0 : 0.7;
    return unique ? 0.3 : 0.0;
}

SystematicNoise score_systematic_noise(std::span<const double> series) {
    if (series.empty()) throw InputError("systematic noise: empty series");
    const double overall = mean(series);
    if (!(overall > 0.0)) throw InputError("no signal");
    SystematicNoise out;
    const auto first = std::min(series.size(), kFirstYearWeeks);
    out.short_series = series.size() < kFirstYearWeeks;
    out.ratio = mean(series.first(first)) / overall;
    if (out.ratio <= 0.5)
        out.points = 1.0;
    else if (out.ratio <= 0.85)
        out.points = 0.5;
    else
        out.points = 0.0;
    return out;
}

FastNoise score_fast_noise(std::span<const double> series) {
    if (series.empty()) throw InputError("fast noise: empty series");
    FastNoise out;
    out.overall_mean = mean(series);
    // At exactly 4 the upper band wins.
    if (out.overall_mean >= 4.0)
        out.points = 1.0;
    else if (out.overall_mean >= 2.0)
        out.points = 0.5;
    else
        out.points = 0.0;
    return out;
}

double score_related_queries(int count) {
    if (count < 0) throw InputError("related query count must be nonnegative");
    if (count >= 10) return 1.0;
    if (count >= 5) return 0.5;
    return 0.0;
}

QualityScore total_quality(double brand_category, double systematic_noise, double fast_noise,
                           double related_queries) {
    QualityScore q;
    q.brand_category_points = brand_category;
    q.systematic_noise_points = systematic_noise;
    q.fast_noise_points = fast_noise;
    q.related_query_points = related_queries;
    q.total = ((brand_category + fast_noise + related_queries) / 3.0 + systematic_noise) / 2.0;
    // Thirds are inexact in binary; allow rounding slack at the threshold.
    q.verdict = q.total >= kGoodThreshold - 1e-12 ? Verdict::Good : Verdict::Bad;
    return q;
}

QualityScore score_company(const std::string& company_id, std::span<const double> series,
                           std::span<const GtMetadata> variants, Warnings& warnings) {
    if (variants.empty()) throw InputError(fmt::format("{}: no quality metadata", company_id));
    const auto sys = score_systematic_noise(series);
    const auto fast = score_fast_noise(series);
    if (sys.short_series)
        warnings.push_back({company_id, fmt::format("series has {} weeks; first-year mean uses "
                                                    "the available prefix",
                                                    series.size())});
    QualityScore best;
    bool have = false;
    for (const auto& m : variants) {
        auto q = total_quality(score_brand_category(m.brand_unique, m.category_group), sys.points,
                               fast.points, score_related_queries(m.related_query_count));
        q.ratio_of_means = sys.ratio;
        q.overall_mean = fast.overall_mean;
        if (!have || q.total > best.total) {
            best = q;
            have = true;
        }
    }
    return best;
}

}  // namespace trendlink::quality

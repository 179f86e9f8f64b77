#pragma once

#include "trendlink/core.hpp"
#include "trendlink/ingest.hpp"

#include <span>
#include <string>
#include <vector>

namespace trendlink::quality {

// Search-interest data-quality index. Four sub-scores are combined in two
// steps: brand/category, fast noise and related queries are averaged first,
// then that average is averaged with the systematic-noise score, so the
// "interest grows from a low start" signal weighs as much as the other three
// together. Totals of at least 0.6 pass.

inline constexpr double kGoodThreshold = 0.6;
inline constexpr std::size_t kFirstYearWeeks = 52;

enum class Verdict { Good, Bad };

struct QualityScore {
    double brand_category_points = 0.0;
    double systematic_noise_points = 0.0;
    double fast_noise_points = 0.0;
    double related_query_points = 0.0;
    double total = 0.0;
    Verdict verdict = Verdict::Bad;
    double ratio_of_means = 0.0;
    double overall_mean = 0.0;
};

struct SystematicNoise {
    double points = 0.0;
    double ratio = 0.0;
    bool short_series = false;  // fewer than 52 weeks were available
};

struct FastNoise {
    double points = 0.0;
    double overall_mean = 0.0;
};

double score_brand_category(bool unique, CategoryGroup group);

/// Ratio of the first-year mean to the overall mean. `series` starts at the
/// founding week. Throws InputError("no signal") on an all-zero series.
SystematicNoise score_systematic_noise(std::span<const double> series);

FastNoise score_fast_noise(std::span<const double> series);

double score_related_queries(int count);

QualityScore total_quality(double brand_category, double systematic_noise, double fast_noise,
                           double related_queries);

/// Scores every metadata variant against the same series and keeps the best
/// total (ties keep the earliest variant). Short-series warnings are appended
/// to `warnings`.
QualityScore score_company(const std::string& company_id, std::span<const double> series,
                           std::span<const GtMetadata> variants, Warnings& warnings);

std::string to_string(Verdict v);

}  // namespace trendlink::quality

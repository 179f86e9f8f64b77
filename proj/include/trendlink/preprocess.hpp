#pragma once

#include "trendlink/core.hpp"
#include "trendlink/ingest.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trendlink {

enum class SeriesKind {
    RawInterest,
    StitchedInterest,
    FilteredInterest,
    RawValuation,
    FilteredValuation,
    InterpolatedValuation,
    Normalized,
};

/// Values on a weekly grid; value k belongs to week `first_week + k`.
struct WeeklySeries {
    std::int64_t first_week = 0;  // see week_index()
    std::vector<double> values;
    SeriesKind kind = SeriesKind::RawInterest;

    Date start_date() const { return week_start(first_week); }
    std::int64_t last_week() const {
        return first_week + static_cast<std::int64_t>(values.size()) - 1;
    }
    bool operator==(const WeeklySeries&) const = default;
};

struct FilterConfig {
    double alpha_interest = 0.2;
    double alpha_valuation_raw = 0.99;
    double alpha_valuation_weekly = 0.9;

    /// Throws InputError unless every alpha lies in (0, 1].
    void validate() const;
};

inline constexpr std::int64_t kMinStitchOverlap = 4;
inline constexpr std::size_t kMinAlignedWeeks = 10;

struct StitchResult {
    WeeklySeries series;                // StitchedInterest, global max 100
    std::vector<double> window_scales;  // factor applied to each window before the final rescale
    double final_scale = 1.0;           // divisor that brought the global max to 100
};

/// Merges overlapping windows into one series. Each later window is scaled by
/// the ratio of overlap means (earlier / later, over weeks where both are
/// positive), overlapping weeks keep the earlier values, and the result is
/// rescaled to a single global maximum of 100.
StitchResult stitch_windows(std::span<const GtWindow> windows, Warnings& warnings);

/// Two cascaded exponential passes; alpha = 1 is the identity.
std::vector<double> des_filter(std::span<const double> values, double alpha);
WeeklySeries des_filter(const WeeklySeries& series, double alpha, SeriesKind kind);

/// Round values filtered in date order, interpolated linearly onto the weekly
/// grid between the first and last round weeks, then filtered weekly.
WeeklySeries interpolate_valuation(const ValuationSeries& rounds, const FilterConfig& filter);

/// (x - min) / (max - min); a constant series maps to 0.5 with a warning.
WeeklySeries minmax_normalize(const WeeklySeries& series, Warnings* warnings = nullptr,
                              const std::string& company_id = {});

struct AlignedPair {
    std::vector<double> interest;
    std::vector<double> valuation;
    std::int64_t first_week = 0;  // interest week of the first pair
    std::size_t n() const { return interest.size(); }
};

/// Pairs interest week w with valuation week w - lag (negative lag moves the
/// valuation back in time). The translated valuation span must lie inside the
/// interest span and give at least 10 pairs.
AlignedPair align(const WeeklySeries& interest, const WeeklySeries& valuation, std::int64_t lag);

/// Everything the correlation stage needs for one company.
struct PreparedCompany {
    std::string company_id;
    StitchResult stitched;
    WeeklySeries interest;   // filtered + normalized
    WeeklySeries valuation;  // interpolated + filtered + normalized
    std::int64_t founding_week = 0;
    Warnings warnings;
};

PreparedCompany prepare_company(const CompanyRecord& company, const ValuationSeries& rounds,
                                const StitchResult& stitched, const FilterConfig& filter);

}  // namespace trendlink

#pragma once

#include "trendlink/correlate.hpp"
#include "trendlink/ingest.hpp"
#include "trendlink/stats.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trendlink::portfolio {

/// Maximum valuation over the years it took to reach it ($M per year).
struct McapGr {
    std::string company_id;
    double max_valuation = 0.0;
    Date date_of_max;
    double years_to_max = 0.0;
    double rate = 0.0;
};

inline constexpr double kDaysPerYear = 365.25;

/// Uses the earliest round reaching the maximum. Throws InputError when that
/// round is less than one week after founding.
McapGr mcap_gr(const ValuationSeries& rounds, Date founded);

/// Per-company flags the dimension tables split on.
struct Features {
    bool is_unicorn = false;
    bool is_b2c = false;
    bool is_platform = false;
};

using FeatureMap = std::map<std::string, Features>;

FeatureMap features_from(const Corpus& corpus);

struct Dimension {
    std::string name;        // "success"
    std::string pole_true;   // "unicorn"
    std::string pole_false;  // "non-unicorn"
    std::function<bool(const Features&)> predicate;
};

/// The three two-pole dimensions: success, customer type, product type.
std::vector<Dimension> standard_dimensions();

struct GroupStats {
    std::string dimension;  // empty for the corpus-level table
    std::string pole;
    std::string label;  // "Total sample", "G1", "G2", "G3", "Lag", "Positive shift", ...
    std::size_t count = 0;
    std::size_t denominator = 0;  // pole size (dimension rows) or the parent group size
    double share_sample = 0.0;
    std::optional<double> share_dimension;
    std::optional<double> share_group;
    std::optional<stats::Summary> tau;
    std::optional<stats::Summary> lag;  // G2 shift rows only
};

/// Corpus table: total, G1..G3, then G2 split by shift sign.
std::vector<GroupStats> group_stats(const std::vector<CorrelationResult>& results);

/// Per pole: G1, G2, Lag (G2 lags), G3. Companies missing from `features`
/// throw InputError.
std::vector<GroupStats> dimension_stats(const std::vector<CorrelationResult>& results,
                                        const FeatureMap& features, const Dimension& dimension);

enum class IndustryLevel { Sector, Industry, SubIndustry };

IndustryLevel parse_industry_level(const std::string& s);
std::string to_string(IndustryLevel level);

struct IndustryRow {
    std::string tag;
    std::size_t high = 0;  // G1 + G2
    std::size_t total = 0;
    double share = 0.0;
};

inline constexpr const char* kUntagged = "(untagged)";

/// Rows sorted by total (descending) then tag.
std::vector<IndustryRow> industry_rollup(const std::vector<CorrelationResult>& results,
                                         const std::vector<CompanyRecord>& companies,
                                         IndustryLevel level);

struct Histogram {
    double width = 0.0;
    std::vector<double> lower_edges;
    std::vector<std::size_t> counts;
};

/// Bins of `width` from -1; the last bin is closed at 1.
Histogram tau_histogram(const std::vector<CorrelationResult>& results, double width);

struct McapRow {
    std::string label;  // SAMPLE, G1, G2, G3
    std::optional<stats::Summary> rate;
    /// Relative deviation of each statistic from the sample's (mean, p25, median, p75).
    std::optional<std::array<double, 4>> deviation;
};

std::vector<McapRow> mcap_table(const std::vector<CorrelationResult>& results,
                                const std::map<std::string, McapGr>& mcaps);

void write_group_report(const std::filesystem::path& path, const std::vector<GroupStats>& rows);
void write_industry_report(const std::filesystem::path& path,
                           const std::map<IndustryLevel, std::vector<IndustryRow>>& levels);
void write_mcap_report(const std::filesystem::path& path, const std::map<std::string, McapGr>& mcaps,
                       const std::vector<CorrelationResult>& results);
void write_mcap_summary(const std::filesystem::path& path, const std::vector<McapRow>& rows);
void write_histogram(const std::filesystem::path& path, const Histogram& h);

}  // namespace trendlink::portfolio

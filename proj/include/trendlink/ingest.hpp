#pragma once

#include "trendlink/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trendlink {

struct CompanyRecord {
    std::string id;
    std::string name;
    Date founded;
    bool is_b2c = false;
    bool is_platform = false;
    std::string sector;
    std::string industry;
    std::string sub_industry;
    bool operator==(const CompanyRecord&) const = default;
};

/// One funding round; valuation in millions of US dollars.
struct ValuationRound {
    std::string company_id;
    Date date;
    double valuation = 0.0;
    bool operator==(const ValuationRound&) const = default;
};

struct ValuationSeries {
    std::string company_id;
    std::vector<ValuationRound> rounds;  // strictly increasing dates
    bool is_unicorn = false;
    bool operator==(const ValuationSeries&) const = default;
};

struct GtPoint {
    Date week;
    int value = 0;          // 0..100
    bool sub_unit = false;  // exported as "<1"; value is 0
    bool operator==(const GtPoint&) const = default;
};

inline constexpr std::size_t kMaxWindowPoints = 200;
inline constexpr double kUnicornThreshold = 1000.0;  // $M

/// One search-interest export window, normalized to its own maximum.
struct GtWindow {
    std::string company_id;
    int index = 0;
    std::vector<GtPoint> points;
    /// Window has no point at 100 (a partial export that was cut from a
    /// longer one); stitching does not require the local maximum.
    bool fragment = false;
    bool operator==(const GtWindow&) const = default;
};

enum class CategoryGroup { A, B };

struct GtMetadata {
    std::string company_id;
    bool brand_unique = false;
    CategoryGroup category_group = CategoryGroup::B;
    int related_query_count = 0;
    bool operator==(const GtMetadata&) const = default;
};

/// Everything read from a corpus directory. Maps are keyed by company id so
/// iteration order is deterministic.
struct Corpus {
    std::vector<CompanyRecord> companies;
    std::map<std::string, ValuationSeries> valuations;
    std::map<std::string, std::vector<GtMetadata>> metadata;  // variants per company
    std::map<std::string, std::vector<GtWindow>> windows;     // sorted by index
    bool operator==(const Corpus&) const = default;
};

namespace corpus_files {
inline constexpr const char* kCompanies = "companies.csv";
inline constexpr const char* kValuations = "valuations.csv";
inline constexpr const char* kMetadata = "gt_metadata.csv";
inline constexpr const char* kWindowsDir = "gt";
}  // namespace corpus_files

/// `YYYY` maps to January 1 of that year; `YYYY-MM-DD` passes through.
Date resolve_founding_date(std::string_view raw);

/// True iff any round reaches the $1B mark. Throws InputError on empty input.
bool derive_unicorn(std::span<const ValuationRound> rounds);

std::vector<CompanyRecord> parse_companies(const std::filesystem::path& path, Date analysis_end);
std::map<std::string, ValuationSeries> parse_valuations(const std::filesystem::path& path);
std::map<std::string, std::vector<GtMetadata>> parse_metadata(const std::filesystem::path& path);

/// Parses one `<company_id>.w<index>.csv` export.
GtWindow parse_gt_export(const std::filesystem::path& path);
/// Parses the body of a window export; id and index supplied by the caller.
GtWindow parse_gt_export(std::istream& in, const std::string& source, std::string company_id,
                         int index);

/// Splits `<company_id>.w<index>.csv`; nullopt for names not following it.
std::optional<std::pair<std::string, int>> parse_window_filename(const std::string& filename);

Corpus load_corpus(const std::filesystem::path& dir, Date analysis_end);

void write_companies(const std::filesystem::path& path, const std::vector<CompanyRecord>& rows);
void write_valuations(const std::filesystem::path& path,
                      const std::map<std::string, ValuationSeries>& series);
void write_metadata(const std::filesystem::path& path,
                    const std::map<std::string, std::vector<GtMetadata>>& metadata);
void write_gt_window(const std::filesystem::path& path, const GtWindow& window);
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);

/// Companies whose founding date falls after one of their own rounds.
Warnings check_founding_vs_rounds(const Corpus& corpus);

std::string to_string(CategoryGroup g);

}  // namespace trendlink

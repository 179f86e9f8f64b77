#pragma once

#include "trendlink/correlate.hpp"
#include "trendlink/fsqca.hpp"
#include "trendlink/ingest.hpp"
#include "trendlink/preprocess.hpp"
#include "trendlink/quality.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace trendlink::pipeline {

struct RunConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path out_dir;
    FilterConfig filter;
    ThresholdConfig thresholds;
    bool quality_gate = true;
    Date analysis_start{2004, 1, 1};
    Date analysis_end{2019, 8, 31};
    int min_rounds = 6;
    fsqca::CalibrationAnchors anchors;
    fsqca::Thresholds qca;
    double histogram_width = 0.1;
    bool plots = true;
    bool reproducible = false;

    /// Throws InputError on out-of-range settings or a missing corpus directory.
    void validate() const;
};

struct Exclusion {
    std::string company_id;
    std::string stage;
    std::string reason;
};

/// Companies that passed sampling, with the reasons others did not.
struct Sample {
    Corpus corpus;
    std::vector<std::string> ids;  // sorted
    std::vector<Exclusion> exclusions;
    Warnings warnings;
};

/// Loads the corpus and applies the sampling rules: founding inside the
/// analysis window, at least `min_rounds` rounds, search-interest windows present.
Sample ingest_stage(const RunConfig& cfg);

struct QualityStage {
    std::map<std::string, quality::QualityScore> scores;
    std::map<std::string, StitchResult> stitched;
    std::vector<std::string> passed;
    std::vector<Exclusion> exclusions;
    Warnings warnings;
};

/// Stitches every company's windows and scores them. With the gate off all
/// scored companies pass.
QualityStage quality_stage(const Sample& sample, bool gate);

struct PreprocessStage {
    std::map<std::string, PreparedCompany> prepared;
    std::vector<Exclusion> exclusions;
};

PreprocessStage preprocess_stage(const Sample& sample, const QualityStage& quality,
                                 const FilterConfig& filter);

struct CorrelateStage {
    std::vector<CorrelationResult> results;  // sorted by company id
    std::vector<Exclusion> exclusions;
};

/// Companies with 10 or fewer aligned weeks are excluded.
CorrelateStage correlate_stage(const PreprocessStage& pre, const ThresholdConfig& thresholds);

void write_quality(const std::filesystem::path& path, const QualityStage& q);
void write_series(const std::filesystem::path& dir, const PreparedCompany& company);
void write_stitch_report(const std::filesystem::path& path, const PreprocessStage& pre);
void write_exclusions(const std::filesystem::path& path, const std::vector<Exclusion>& rows);

/// Portfolio tables (and plots when enabled) into `out_dir`.
std::vector<std::string> write_portfolio_reports(const std::filesystem::path& out_dir,
                                                 const std::vector<CorrelationResult>& results,
                                                 const Corpus& corpus, const RunConfig& cfg);

/// fsQCA tables into `out_dir`; returns the files written.
std::vector<std::string> write_fsqca_reports(const std::filesystem::path& out_dir,
                                             const std::vector<CorrelationResult>& results,
                                             const Corpus& corpus, const RunConfig& cfg);

struct StageCount {
    std::string stage;
    std::size_t companies = 0;
};

struct RunSummary {
    std::vector<StageCount> funnel;
    std::vector<Exclusion> exclusions;
    std::vector<CorrelationResult> results;
};

/// Runs every stage and writes all artifacts plus manifest.json. A failing
/// stage throws StageError after the manifest records it and marks that
/// stage's outputs invalid.
RunSummary run_pipeline(const RunConfig& cfg);

inline constexpr const char* kManifest = "manifest.json";

}  // namespace trendlink::pipeline

#pragma once

#include "trendlink/correlate.hpp"
#include "trendlink/ingest.hpp"
#include "trendlink/preprocess.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace trendlink::synth {

enum class Latent { Logistic, PiecewiseExponential };

std::string to_string(Latent l);
Latent parse_latent(const std::string& s);

struct SynthConfig {
    std::uint64_t seed = 1;
    std::string company_id = "v0001";
    int weeks = 520;  // length of the search-interest history
    Latent latent = Latent::Logistic;
    /// Valuation week v mirrors interest week v + lag_weeks; negative lags
    /// delay the valuation behind interest.
    int lag_weeks = 0;
    double noise_sigma = 0.0;  // fraction of the latent range
    int round_count = 8;
    Group target_group = Group::G1;
    bool unicorn_scale = false;
    /// Uninformative metadata plus a flat early interest level, so the
    /// venture fails the quality gate.
    bool poor_quality = false;
    Date analysis_end{2019, 8, 31};
    FilterConfig filter;

    /// Throws InputError on infeasible settings.
    void validate() const;
};

/// Shortest planted shift the generator will tag as G2.
inline constexpr int kMinPlantedShift = 20;

struct SynthTruth {
    std::string company_id;
    Group planted_group = Group::G1;
    int planted_lag = 0;
    Latent latent = Latent::Logistic;
    double noise_sigma = 0.0;
    int weeks = 0;
    int round_count = 0;
    bool unicorn = false;
    bool poor_quality = false;
    /// Logistic: growth rate per week. Piecewise: mean |segment rate|.
    double latent_rate = 0.0;
    /// Logistic: midpoint week offset. Piecewise: segment count.
    double latent_shape = 0.0;
    int attempts = 0;  // draws needed to satisfy the planted group
};

struct Venture {
    CompanyRecord company;
    std::vector<GtWindow> windows;
    ValuationSeries valuation;
    GtMetadata metadata;
    SynthTruth truth;
};

/// Deterministic in cfg. The curves are redrawn until the noise-free pair
/// exhibits the planted group and lag; InputError if no draw succeeds.
Venture generate_venture(const SynthConfig& cfg);

struct CorpusConfig {
    std::uint64_t seed = 42;
    int venture_count = 200;
    std::array<double, 3> group_mix = {0.67, 0.16, 0.17};
    double noise_sigma = 0.0;
    int min_weeks = 400;
    int max_weeks = 700;
    int min_rounds = 6;
    int max_rounds = 10;
    int min_shift = 40;  // |lag| range for G2 ventures
    int max_shift = 120;
    double unicorn_share = 0.4;
    int poor_quality_count = 0;
    int short_round_count = 0;  // ventures given fewer rounds than the corpus filter
    Date analysis_end{2019, 8, 31};

    void validate() const;
};

struct SyntheticCorpus {
    Corpus corpus;
    std::vector<SynthTruth> truths;  // sorted by company id
};

SyntheticCorpus generate_corpus(const CorpusConfig& cfg);

/// Writes the ingest files plus truth.csv.
void write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus);
void write_truth(const std::filesystem::path& path, const std::vector<SynthTruth>& truths);
std::vector<SynthTruth> read_truth(const std::filesystem::path& path);

struct RecoveryReport {
    std::array<std::array<std::size_t, 3>, 3> confusion{};  // [planted][recovered]
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::vector<std::int64_t> lag_errors;  // recovered - planted, planted G2 only
    double mean_abs_lag_error = 0.0;
    std::int64_t max_abs_lag_error = 0;
};

/// Id sets must match exactly; InputError otherwise.
RecoveryReport evaluate_recovery(const std::vector<SynthTruth>& truths,
                                 const std::vector<CorrelationResult>& results);

}  // namespace trendlink::synth

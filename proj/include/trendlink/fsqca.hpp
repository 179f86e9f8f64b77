#pragma once

#include "trendlink/correlate.hpp"
#include "trendlink/portfolio.hpp"
#include "trendlink/qmc.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trendlink::fsqca {

/// Direct-method calibration anchors on the raw score scale.
struct CalibrationAnchors {
    double full_non_membership = 0.1;
    double crossover = 0.499;
    double full_membership = 0.9;

    void validate() const;
};

/// Log-odds are scaled to +-3 at the full-membership / full-non-membership
/// anchors and 0 at the crossover, then mapped through the logistic.
double calibrate_direct(double score, const CalibrationAnchors& anchors);

double negate(double membership);

enum class Outcome { High, Low };

std::string to_string(Outcome o);

struct Case {
    std::string id;
    std::vector<double> conditions;  // memberships, one per condition name
    double outcome_high = 0.0;
    double outcome_low = 0.0;  // negation of outcome_high

    double outcome(Outcome o) const { return o == Outcome::High ? outcome_high : outcome_low; }
};

struct CaseSet {
    std::vector<std::string> condition_names;
    std::vector<Case> cases;
};

/// Condition order used for the venture analysis.
inline const std::vector<std::string> kConditionNames = {"b2c", "platform", "unicorn"};

/// One case per correlation result: crisp b2c/platform/unicorn conditions,
/// outcome = calibrated best tau.
CaseSet build_cases(const std::vector<CorrelationResult>& results,
                    const portfolio::FeatureMap& features, const CalibrationAnchors& anchors);

struct NecessityThresholds {
    double consistency = 0.9;
    double relevance = 0.6;
};

struct NecessityRow {
    std::string condition;  // name, or "~name" for the negation
    double consistency = 0.0;
    std::optional<double> coverage;  // undefined when the condition set is empty
    double relevance = 0.0;
    bool necessary = false;
};

/// Single conditions and their negations. Throws InputError when the outcome
/// set is empty.
std::vector<NecessityRow> necessity_analysis(const CaseSet& cases, Outcome outcome,
                                             const NecessityThresholds& thresholds);

struct SufficiencyThresholds {
    double consistency = 0.75;
    std::size_t frequency = 1;
};

struct TruthTableRow {
    std::uint32_t configuration = 0;  // bit i = condition i present
    std::size_t case_count = 0;       // cases with membership > 0.5 in the row
    std::optional<double> consistency;
    bool included = false;
    std::vector<std::string> case_ids;
};

/// All 2^k rows, empty ones included (never marked included).
std::vector<TruthTableRow> build_truth_table(const CaseSet& cases, Outcome outcome,
                                             const SufficiencyThresholds& thresholds);

struct TermMetrics {
    qmc::Implicant term;
    std::string label;
    std::optional<double> consistency;
    double raw_coverage = 0.0;
    double unique_coverage = 0.0;
};

struct Solution {
    std::vector<TermMetrics> terms;
    std::optional<double> consistency;
    double coverage = 0.0;
    std::size_t cases_covered = 0;
    std::size_t cases_not_covered = 0;
    bool exact_minimization = true;
};

/// Conservative minimization of included configurations; no remainders.
qmc::Cover minimize_configurations(const std::vector<TruthTableRow>& table, int k);

Solution solution_metrics(const std::vector<qmc::Implicant>& terms, const CaseSet& cases,
                          Outcome outcome);

struct OutcomeAnalysis {
    Outcome outcome = Outcome::High;
    std::vector<NecessityRow> necessity;
    std::vector<TruthTableRow> truth_table;
    std::optional<Solution> solution;  // empty: no configuration passed the thresholds
};

struct Thresholds {
    NecessityThresholds necessity;
    SufficiencyThresholds sufficiency;
};

OutcomeAnalysis analyze_outcome(const CaseSet& cases, Outcome outcome, const Thresholds& t);

/// High and low outcomes analyzed independently of each other.
std::pair<OutcomeAnalysis, OutcomeAnalysis> analyze_both_outcomes(const CaseSet& cases,
                                                                  const Thresholds& t);

void write_necessity(const std::filesystem::path& path,
                     const std::vector<const OutcomeAnalysis*>& analyses);
void write_truth_table(const std::filesystem::path& path, const CaseSet& cases,
                       const std::vector<const OutcomeAnalysis*>& analyses);
/// Human-readable solution table: one column per solution term.
std::string render_solution_text(const CaseSet& cases,
                                 const std::vector<const OutcomeAnalysis*>& analyses);
std::string render_solution_json(const CaseSet& cases,
                                 const std::vector<const OutcomeAnalysis*>& analyses);

}  // namespace trendlink::fsqca

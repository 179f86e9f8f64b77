#pragma once

#include "trendlink/core.hpp"
#include "trendlink/preprocess.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trendlink {

enum class Group { G1, G2, G3 };

std::string to_string(Group g);
Group parse_group(const std::string& s);

struct ThresholdConfig {
    double strong_tau = 0.5;
    double min_improvement = 0.5;  // relative increase demanded from a lag shift
    double significance_alpha = 0.01;
    /// Baselines at or below this make the relative improvement meaningless;
    /// such cases pass the improvement gate.
    double near_zero_baseline = 0.05;

    void validate() const;
};

/// Pair counts behind tau-b. `ties_x`/`ties_y` include pairs tied in both.
struct TauCounts {
    std::int64_t pairs = 0;
    std::int64_t ties_x = 0;
    std::int64_t ties_y = 0;
    std::int64_t ties_xy = 0;
    std::int64_t discordant = 0;

    std::int64_t concordant_minus_discordant() const {
        return pairs - ties_x - ties_y + ties_xy - 2 * discordant;
    }
};

/// O(n log n) pair counts (sort on x, merge sort on y counting inversions).
TauCounts kendall_counts(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b. Empty optional when either input is constant (tau-b is
/// undefined there). Throws InputError on length mismatch, n < 2 or NaN.
std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y);

/// Greiner's relation between tau and Pearson's r for bivariate normals.
double tau_to_pearson(double tau);

struct Significance {
    bool significant = false;
    double threshold = 0.0;  // z_{1-alpha} * sigma_tau
    double sigma = 0.0;      // null standard deviation of tau
};

/// One-sided normal-approximation test of tau > 0. Requires n > 10.
Significance tau_significance(double tau, std::size_t n, double alpha);

struct LagBounds {
    std::int64_t min = 0;
    std::int64_t max = 0;
};

/// Feasible lags: the shifted valuation may not start before the founding
/// week nor end after the last interest week.
LagBounds acc_lag_bounds(const WeeklySeries& interest, const WeeklySeries& valuation,
                         std::int64_t founding_week);

struct LagResult {
    std::int64_t lag = 0;
    double tau = 0.0;
    std::size_t n = 0;
};

/// Scans every integer lag in the feasible range and keeps the one with the
/// largest tau; ties go to the smaller |lag|, then to the earlier lag.
/// Callers apply it only when the unshifted tau is below the strong threshold.
LagResult acc_lag_search(const WeeklySeries& interest, const WeeklySeries& valuation,
                         std::int64_t founding_week);

struct Classification {
    Group group = Group::G3;
    double improvement = 0.0;  // +inf when the baseline is near zero
    double tau_best = 0.0;
    std::int64_t lag = 0;  // lag that produced tau_best
};

/// `shifted` must be present iff tau_zero < cfg.strong_tau.
Classification classify_group(double tau_zero, const std::optional<LagResult>& shifted,
                              const ThresholdConfig& cfg);

struct CorrelationResult {
    std::string company_id;
    double tau_zero = 0.0;
    double tau_best = 0.0;
    std::int64_t lag_weeks = 0;
    std::size_t n = 0;
    bool significant = false;
    double significance_threshold = 0.0;
    Group group = Group::G3;
    double improvement = 0.0;
};

CorrelationResult correlate_company(const PreparedCompany& company, const ThresholdConfig& cfg);

void write_correlations(const std::filesystem::path& path,
                        const std::vector<CorrelationResult>& results);
std::vector<CorrelationResult> read_correlations(const std::filesystem::path& path);

}  // namespace trendlink

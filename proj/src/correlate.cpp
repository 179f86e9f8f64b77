#include "trendlink/correlate.hpp"

#include "trendlink/csv.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace trendlink {

namespace {

const std::vector<std::string> kCorrelationsHeader = {
    "company_id", "tau_zero",  "tau_best", "lag_weeks",  "n",
    "significant", "threshold", "group",    "improvement"};

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts `v` in place, returning the number of strict inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                         std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += static_cast<std::int64_t>(mid - i);
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
              buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

double parse_number(const std::string& s, const std::string& source, std::size_t line) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw InputError(fmt::format("{}:{}: malformed number '{}'", source, line, s));
    return v;
}

}  // namespace

std::string to_string(Group g) {
    switch (g) {
        case Group::G1: return "G1";
        case Group::G2: return "G2";
        case Group::G3: return "G3";
    }
    return "G3";
}

Group parse_group(const std::string& s) {
    if (s == "G1") return Group::G1;
    if (s == "G2") return Group::G2;
    if (s == "G3") return Group::G3;
    throw InputError(fmt::format("unknown group '{}'", s));
}

void ThresholdConfig::validate() const {
    if (!(strong_tau > 0.0 && strong_tau < 1.0))
        throw InputError(fmt::format("strong_tau must lie in (0, 1), got {}", strong_tau));
    if (!(significance_alpha > 0.0 && significance_alpha < 0.5))
        throw InputError(
            fmt::format("significance_alpha must lie in (0, 0.5), got {}", significance_alpha));
    if (!(min_improvement >= 0.0))
        throw InputError(fmt::format("min_improvement must be >= 0, got {}", min_improvement));
    if (!(near_zero_baseline >= 0.0))
        throw InputError("near_zero_baseline must be >= 0");
}

TauCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InputError(fmt::format("kendall_tau: length mismatch ({} vs {})", x.size(), y.size()));
    if (x.size() < 2) throw InputError("kendall_tau: need at least 2 points");
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
        if (std::isnan(x[i]) || std::isnan(y[i])) throw InputError("kendall_tau: NaN input");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    TauCounts c;
    c.pairs = tied_pairs(static_cast<std::int64_t>(n));

    std::int64_t run_x = 1;
    std::int64_t run_xy = 1;
    for (std::size_t i = 1; i < n; ++i) {
        const auto a = order[i - 1];
        const auto b = order[i];
        if (x[a] == x[b]) {
            ++run_x;
            if (y[a] == y[b]) {
                ++run_xy;
            } else {
                c.ties_xy += tied_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            c.ties_x += tied_pairs(run_x);
            c.ties_xy += tied_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    c.ties_x += tied_pairs(run_x);
    c.ties_xy += tied_pairs(run_xy);

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    std::vector<double> buf(n);
    c.discordant = merge_count(ys, buf, 0, n);

    std::int64_t run_y = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (ys[i] == ys[i - 1]) {
            ++run_y;
        } else {
            c.ties_y += tied_pairs(run_y);
            run_y = 1;
        }
    }
    c.ties_y += tied_pairs(run_y);
    return c;
}

std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y) {
    const auto c = kendall_counts(x, y);
    const auto dx = c.pairs - c.ties_x;
    const auto dy = c.pairs - c.ties_y;
    if (dx == 0 || dy == 0) return std::nullopt;
    const double tau = static_cast<double>(c.concordant_minus_discordant()) /
                       std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
    return std::clamp(tau, -1.0, 1.0);
}

double tau_to_pearson(double tau) {
    if (!(tau >= -1.0 && tau <= 1.0))
        throw InputError(fmt::format("tau must lie in [-1, 1], got {}", tau));
    return std::sin(0.5 * std::numbers::pi * tau);
}

Significance tau_significance(double tau, std::size_t n, double alpha) {
    if (n <= 10)
        throw InputError(fmt::format("significance test needs more than 10 points, got {}", n));
    if (!(alpha > 0.0 && alpha < 0.5))
        throw InputError(fmt::format("significance alpha must lie in (0, 0.5), got {}", alpha));
    const double nn = static_cast<double>(n);
    Significance s;
    s.sigma = std::sqrt(2.0 * (2.0 * nn + 5.0) / (9.0 * nn * (nn - 1.0)));
    const boost::math::normal_distribution<double> standard;
    s.threshold = boost::math::quantile(standard, 1.0 - alpha) * s.sigma;
    s.significant = tau > s.threshold;
    return s;
}

LagBounds acc_lag_bounds(const WeeklySeries& interest, const WeeklySeries& valuation,
                         std::int64_t founding_week) {
    LagBounds b;
    b.min = -(valuation.first_week - founding_week);
    b.max = interest.last_week() - valuation.last_week();
    // Interest data may start after founding; the shifted valuation must stay inside it.
    b.min = std::max(b.min, interest.first_week - valuation.first_week);
    return b;
}

LagResult acc_lag_search(const WeeklySeries& interest, const WeeklySeries& valuation,
                         std::int64_t founding_week) {
    const auto bounds = acc_lag_bounds(interest, valuation, founding_week);
    if (bounds.min > bounds.max || valuation.values.size() < kMinAlignedWeeks)
        throw InputError(fmt::format("empty feasible lag range [{}, {}]", bounds.min, bounds.max));

    std::optional<LagResult> best;
    auto better = [](const LagResult& cand, const LagResult& cur) {
        if (cand.tau != cur.tau) return cand.tau > cur.tau;
        const auto ac = std::abs(cand.lag);
        const auto au = std::abs(cur.lag);
        if (ac != au) return ac < au;
        return cand.lag < cur.lag;
    };
    for (std::int64_t lag = bounds.min; lag <= bounds.max; ++lag) {
        const auto pair = align(interest, valuation, lag);
        const auto tau = kendall_tau(pair.interest, pair.valuation);
        if (!tau) continue;
        const LagResult cand{lag, *tau, pair.n()};
        if (!best || better(cand, *best)) best = cand;
    }
    if (!best) throw InputError("every feasible lag gives a degenerate tau");
    return *best;
}

Classification classify_group(double tau_zero, const std::optional<LagResult>& shifted,
                              const ThresholdConfig& cfg) {
    Classification out;
    if (tau_zero >= cfg.strong_tau) {
        out.group = Group::G1;
        out.tau_best = tau_zero;
        out.lag = 0;
        out.improvement = 0.0;
        return out;
    }
    if (!shifted) throw InputError("classify_group: weak unshifted tau requires a lag search");

    const bool shift_wins = shifted->tau > tau_zero;
    out.tau_best = shift_wins ? shifted->tau : tau_zero;
    out.lag = shift_wins ? shifted->lag : 0;
    if (tau_zero <= cfg.near_zero_baseline)
        out.improvement = std::numeric_limits<double>::infinity();
    else
        out.improvement = (out.tau_best - tau_zero) / tau_zero;

    if (shift_wins && out.lag != 0 && shifted->tau >= cfg.strong_tau &&
        out.improvement >= cfg.min_improvement)
        out.group = Group::G2;
    else
        out.group = Group::G3;
    return out;
}

CorrelationResult correlate_company(const PreparedCompany& company, const ThresholdConfig& cfg) {
    const auto zero = align(company.interest, company.valuation, 0);
    const auto tau_zero = kendall_tau(zero.interest, zero.valuation);
    if (!tau_zero) throw InputError("degenerate tau: constant series at lag 0");

    std::optional<LagResult> shifted;
    if (*tau_zero < cfg.strong_tau)
        shifted = acc_lag_search(company.interest, company.valuation, company.founding_week);
    const auto cls = classify_group(*tau_zero, shifted, cfg);

    CorrelationResult r;
    r.company_id = company.company_id;
    r.tau_zero = *tau_zero;
    r.tau_best = cls.tau_best;
    r.lag_weeks = cls.lag;
    // Containment keeps the pair count equal to the valuation length at every lag.
    r.n = zero.n();
    r.group = cls.group;
    r.improvement = cls.improvement;
    const auto sig = tau_significance(r.tau_best, r.n, cfg.significance_alpha);
    r.significant = sig.significant;
    r.significance_threshold = sig.threshold;
    return r;
}

void write_correlations(const std::filesystem::path& path,
                        const std::vector<CorrelationResult>& results) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(results.size());
    for (const auto& r : results)
        rows.push_back({r.company_id, csv::format_fixed(r.tau_zero, 10),
                        csv::format_fixed(r.tau_best, 10), std::to_string(r.lag_weeks),
                        std::to_string(r.n), r.significant ? "true" : "false",
                        csv::format_fixed(r.significance_threshold, 10), to_string(r.group),
                        csv::format_fixed(r.improvement, 10)});
    csv::write(path, kCorrelationsHeader, rows);
}

std::vector<CorrelationResult> read_correlations(const std::filesystem::path& path) {
    const auto source = path.string();
    const auto table = csv::read(path);
    csv::require_header(table, kCorrelationsHeader, source);
    std::vector<CorrelationResult> out;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        CorrelationResult r;
        r.company_id = f[0];
        r.tau_zero = parse_number(f[1], source, row.line);
        r.tau_best = parse_number(f[2], source, row.line);
        r.lag_weeks = static_cast<std::int64_t>(parse_number(f[3], source, row.line));
        r.n = static_cast<std::size_t>(parse_number(f[4], source, row.line));
        if (f[5] != "true" && f[5] != "false")
            throw InputError(fmt::format("{}:{}: unknown boolean token '{}'", source, row.line, f[5]));
        r.significant = f[5] == "true";
        r.significance_threshold = parse_number(f[6], source, row.line);
        r.group = parse_group(f[7]);
        r.improvement = parse_number(f[8], source, row.line);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace trendlink

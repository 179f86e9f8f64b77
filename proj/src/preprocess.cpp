#include "trendlink/preprocess.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace trendlink {

void FilterConfig::validate() const {
    auto check = [](double a, const char* name) {
        if (!(a > 0.0 && a <= 1.0))
            throw InputError(fmt::format("{} must lie in (0, 1], got {}", name, a));
    };
    check(alpha_interest, "alpha_interest");
    check(alpha_valuation_raw, "alpha_valuation_raw");
    check(alpha_valuation_weekly, "alpha_valuation_weekly");
}

StitchResult stitch_windows(std::span<const GtWindow> windows, Warnings& warnings) {
    if (windows.empty()) throw InputError("stitch: no windows");
    StitchResult out;
    auto& acc = out.series;
    acc.kind = SeriesKind::StitchedInterest;

    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        if (w.points.empty())
            throw InputError(fmt::format("{}: window {} is empty", w.company_id, w.index));
        const auto first = week_index(w.points.front().week);
        std::vector<double> vals;
        vals.reserve(w.points.size());
        for (const auto& p : w.points) vals.push_back(static_cast<double>(p.value));

        if (i == 0) {
            acc.first_week = first;
            acc.values = std::move(vals);
            out.window_scales.push_back(1.0);
            continue;
        }
        if (first < acc.first_week)
            throw InputError(fmt::format("{}: windows not sorted by start date", w.company_id));
        const auto last = first + static_cast<std::int64_t>(vals.size()) - 1;
        const auto overlap = std::min(acc.last_week(), last) - first + 1;
        if (overlap < kMinStitchOverlap)
            throw InputError(fmt::format("{}: insufficient overlap between windows {} and {} "
                                         "({} weeks, need {})",
                                         w.company_id, windows[i - 1].index, w.index,
                                         std::max<std::int64_t>(overlap, 0), kMinStitchOverlap));

        double sum_earlier = 0.0;
        double sum_later = 0.0;
        for (std::int64_t k = 0; k < overlap; ++k) {
            const double a = acc.values[static_cast<std::size_t>(first - acc.first_week + k)];
            const double b = vals[static_cast<std::size_t>(k)];
            if (a > 0.0 && b > 0.0) {
                sum_earlier += a;
                sum_later += b;
            }
        }
        double scale = 1.0;
        if (sum_later > 0.0) {
            scale = sum_earlier / sum_later;
        } else {
            warnings.push_back({w.company_id, fmt::format("window {} overlap has no common "
                                                          "nonzero weeks; scale 1 used",
                                                          w.index)});
        }
        out.window_scales.push_back(scale);
        for (std::size_t k = static_cast<std::size_t>(overlap); k < vals.size(); ++k)
            acc.values.push_back(vals[k] * scale);
    }

    const double peak = *std::max_element(acc.values.begin(), acc.values.end());
    if (!(peak > 0.0))
        throw InputError(fmt::format("{}: no signal in search-interest windows",
                                     windows.front().company_id));
    out.final_scale = peak / 100.0;
    for (auto& v : acc.values) v = v / out.final_scale;
    // Division can land a ulp off; the maximum is defined to be exactly 100.
    *std::max_element(acc.values.begin(), acc.values.end()) = 100.0;
    return out;
}

std::vector<double> des_filter(std::span<const double> values, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InputError(fmt::format("filter alpha must lie in (0, 1], got {}", alpha));
    if (values.empty()) throw InputError("filter: empty series");
    std::vector<double> first(values.size());
    std::vector<double> second(values.size());
    first[0] = values[0];
    second[0] = values[0];
    for (std::size_t t = 1; t < values.size(); ++t) {
        first[t] = alpha * values[t] + (1.0 - alpha) * first[t - 1];
        second[t] = alpha * first[t] + (1.0 - alpha) * second[t - 1];
    }
    return second;
}

WeeklySeries des_filter(const WeeklySeries& series, double alpha, SeriesKind kind) {
    return WeeklySeries{series.first_week, des_filter(series.values, alpha), kind};
}

WeeklySeries interpolate_valuation(const ValuationSeries& rounds, const FilterConfig& filter) {
    if (rounds.rounds.size() < 2)
        throw InputError(fmt::format("{}: interpolation needs at least 2 rounds, got {}",
                                     rounds.company_id, rounds.rounds.size()));
    std::vector<double> raw;
    raw.reserve(rounds.rounds.size());
    for (const auto& r : rounds.rounds) raw.push_back(r.valuation);
    const auto smoothed = des_filter(raw, filter.alpha_valuation_raw);

    // Knots on the weekly grid; two rounds in one week keep the later value.
    std::vector<std::pair<std::int64_t, double>> knots;
    for (std::size_t i = 0; i < rounds.rounds.size(); ++i) {
        const auto w = week_index(rounds.rounds[i].date);
        if (!knots.empty() && knots.back().first == w)
            knots.back().second = smoothed[i];
        else
            knots.emplace_back(w, smoothed[i]);
    }
    if (knots.size() < 2)
        throw InputError(fmt::format("{}: all rounds fall in one week", rounds.company_id));

    WeeklySeries weekly;
    weekly.first_week = knots.front().first;
    weekly.kind = SeriesKind::InterpolatedValuation;
    weekly.values.reserve(static_cast<std::size_t>(knots.back().first - knots.front().first + 1));
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const auto [w0, v0] = knots[k];
        const auto [w1, v1] = knots[k + 1];
        const double span = static_cast<double>(w1 - w0);
        for (std::int64_t w = w0; w < w1; ++w)
            weekly.values.push_back(v0 + (v1 - v0) * static_cast<double>(w - w0) / span);
    }
    weekly.values.push_back(knots.back().second);
    return des_filter(weekly, filter.alpha_valuation_weekly, SeriesKind::FilteredValuation);
}

WeeklySeries minmax_normalize(const WeeklySeries& series, Warnings* warnings,
                              const std::string& company_id) {
    if (series.values.empty()) throw InputError("normalize: empty series");
    const auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    WeeklySeries out{series.first_week, {}, SeriesKind::Normalized};
    out.values.reserve(series.values.size());
    if (hi == lo) {
        out.values.assign(series.values.size(), 0.5);
        if (warnings) warnings->push_back({company_id, "constant series normalized to 0.5"});
        return out;
    }
    for (double v : series.values) out.values.push_back((v - lo) / (hi - lo));
    return out;
}

AlignedPair align(const WeeklySeries& interest, const WeeklySeries& valuation, std::int64_t lag) {
    const auto from = valuation.first_week + lag;
    const auto to = valuation.last_week() + lag;
    if (from < interest.first_week || to > interest.last_week())
        throw InputError(fmt::format("insufficient overlap: valuation shifted by {} weeks spans "
                                     "[{}, {}] outside interest span [{}, {}]",
                                     lag, from - interest.first_week, to - interest.first_week, 0,
                                     interest.last_week() - interest.first_week));
    const auto n = static_cast<std::size_t>(to - from + 1);
    if (n < kMinAlignedWeeks)
        throw InputError(fmt::format("insufficient overlap: {} paired weeks, need {}", n,
                                     kMinAlignedWeeks));
    AlignedPair out;
    out.first_week = from;
    const auto offset = static_cast<std::size_t>(from - interest.first_week);
    out.interest.assign(interest.values.begin() + static_cast<std::ptrdiff_t>(offset),
                        interest.values.begin() + static_cast<std::ptrdiff_t>(offset + n));
    out.valuation = valuation.values;
    return out;
}

PreparedCompany prepare_company(const CompanyRecord& company, const ValuationSeries& rounds,
                                const StitchResult& stitched, const FilterConfig& filter) {
    PreparedCompany out;
    out.company_id = company.id;
    out.stitched = stitched;
    out.founding_week = week_index(company.founded);
    const auto filtered =
        des_filter(stitched.series, filter.alpha_interest, SeriesKind::FilteredInterest);
    out.interest = minmax_normalize(filtered, &out.warnings, company.id);
    out.valuation = minmax_normalize(interpolate_valuation(rounds, filter), &out.warnings,
                                     company.id);
    return out;
}

}  // namespace trendlink

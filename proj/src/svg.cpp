#include "trendlink/svg.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>

namespace trendlink::svg {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string header(const std::string& title, const RenderOptions& opt) {
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"11\">\n",
        kWidth, kHeight, kWidth, kHeight);
    if (!opt.reproducible) {
        const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
        out += fmt::format("<!-- generated {:%Y-%m-%dT%H:%M:%SZ} -->\n", now);
    }
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += fmt::format("<text x=\"{:.1f}\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                       kWidth / 2, title);
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;  // data ranges

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string axes(const Frame& f) {
    return fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n"
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{3:.1f}\" stroke=\"black\"/>\n",
        kLeft, f.py(f.y0), kWidth - kRight, f.py(f.y1));
}

std::string polyline(const Frame& f, std::int64_t first_week, const std::vector<double>& ys,
                     const char* colour, const char* dash) {
    std::string pts;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!pts.empty()) pts += ' ';
        pts += fmt::format("{:.1f},{:.1f}", f.px(double(first_week) + double(i)), f.py(ys[i]));
    }
    return fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n",
                       colour, dash, pts);
}

}  // namespace

std::string lag_label(std::int64_t lag) {
    return lag < 0 ? fmt::format("lag = −{} weeks", -lag) : fmt::format("lag = {} weeks", lag);
}

std::string histogram(const portfolio::Histogram& h, const RenderOptions& opt) {
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    if (h.counts.empty() || total == 0) throw InputError("histogram: no correlation results");
    const auto peak = *std::max_element(h.counts.begin(), h.counts.end());
    const Frame f{-1.0, 1.0, 0.0, double(peak) * 1.1};

    std::string out = header("Distribution of Kendall's tau", opt);
    out += axes(f);
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double x0 = f.px(h.lower_edges[i]);
        const double x1 = f.px(h.lower_edges[i] + h.width);
        const double y = f.py(double(h.counts[i]));
        out += fmt::format(
            "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"#4a78b5\" "
            "stroke=\"white\"/>\n",
            x0, y, std::max(0.0, x1 - x0), f.py(0.0) - y);
    }
    for (int k = -4; k <= 4; ++k) {
        const double x = k / 4.0;
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.2f}</text>\n",
                           f.px(x), kHeight - kBottom + 16, x);
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">tau</text>\n",
                       kWidth / 2, kHeight - 12);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6,
                       f.py(double(peak)) + 4, peak);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">0</text>\n", kLeft - 6,
                       f.py(0.0) + 4);
    out += "</svg>\n";
    return out;
}

std::string overlay(const WeeklySeries& interest, const WeeklySeries& valuation,
                    const CorrelationResult& result, const RenderOptions& opt) {
    if (interest.values.empty() || valuation.values.empty())
        throw InputError(fmt::format("{}: overlay needs both series", result.company_id));
    const auto lag = result.lag_weeks;
    std::int64_t lo = std::min(interest.first_week, valuation.first_week);
    std::int64_t hi = std::max(interest.last_week(), valuation.last_week());
    if (lag != 0) {
        lo = std::min(lo, valuation.first_week + lag);
        hi = std::max(hi, valuation.last_week() + lag);
    }
    const Frame f{double(lo), double(std::max(hi, lo + 1)), 0.0, 1.0};

    std::string out = header(fmt::format("{} ({}, tau = {:.2f})", escape(result.company_id),
                                         to_string(result.group), result.tau_best),
                             opt);
    out += axes(f);
    for (int year = week_start(lo).year() + 1; year <= week_start(hi).year(); ++year) {
        const double x = f.px(double(week_index(Date(year, 1, 1))));
        out += fmt::format(
            "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#dddddd\"/>\n"
            "<text x=\"{0:.1f}\" y=\"{3:.1f}\" text-anchor=\"middle\">{4}</text>\n",
            x, f.py(0.0), f.py(1.0), kHeight - kBottom + 16, year);
    }
    for (int k = 0; k <= 4; ++k)
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n",
                           kLeft - 6, f.py(k / 4.0) + 4, k / 4.0);

    out += polyline(f, interest.first_week, interest.values, "#1f77b4", "");
    out += polyline(f, valuation.first_week, valuation.values, "#d62728", "");
    if (lag != 0)
        out += polyline(f, valuation.first_week + lag, valuation.values, "#d62728",
                        " stroke-dasharray=\"5,3\"");

    double ly = kTop + 4;
    auto legend = [&](const char* colour, const char* dash, const std::string& text) {
        out += fmt::format(
            "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
            "stroke-width=\"1.5\"{4}/>\n<text x=\"{5:.1f}\" y=\"{6:.1f}\">{7}</text>\n",
            kLeft + 10, ly, kLeft + 34, colour, dash, kLeft + 40, ly + 4, text);
        ly += 16;
    };
    legend("#1f77b4", "", "search interest");
    legend("#d62728", "", "valuation");
    if (lag != 0) legend("#d62728", " stroke-dasharray=\"5,3\"", "valuation, shifted");
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n",
                       kWidth - kRight - 4, kTop + 8, lag_label(lag));
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">calendar week</text>\n",
                       kWidth / 2, kHeight - 12);
    out += "</svg>\n";
    return out;
}

}  // namespace trendlink::svg

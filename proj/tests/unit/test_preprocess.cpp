#include "trendlink/preprocess.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace trendlink;

namespace {

const Date kBase{2010, 1, 3};  // a Sunday

GtWindow window(int index, int start_week, const std::vector<int>& values) {
    GtWindow w{"c1", index, {}, false};
    for (std::size_t k = 0; k < values.size(); ++k)
        w.points.push_back({kBase.plus_days(7 * (start_week + static_cast<int>(k))), values[k], false});
    return w;
}

WeeklySeries series(std::int64_t first, std::vector<double> v) {
    return WeeklySeries{first, std::move(v), SeriesKind::RawInterest};
}

}  // namespace

TEST_CASE("stitch a single window") {
    Warnings w;
    const std::vector<GtWindow> ws = {window(0, 0, {10, 20, 50})};
    const auto r = stitch_windows(ws, w);
    CHECK(r.series.values == std::vector<double>{20, 40, 100});
    CHECK(r.final_scale == 0.5);
    CHECK(r.series.first_week == week_index(kBase));
    CHECK(r.series.kind == SeriesKind::StitchedInterest);
}

TEST_CASE("stitch scales later windows by the overlap ratio") {
    // A overlap mean 85, B overlap mean 42.5 -> B scaled by 2.
    Warnings w;
    const std::vector<GtWindow> ws = {window(0, 0, {10, 30, 80, 90, 80, 90}),
                                      window(1, 2, {40, 45, 40, 45, 50, 100})};
    const auto r = stitch_windows(ws, w);
    REQUIRE(r.window_scales.size() == 2);
    CHECK(r.window_scales[1] == 2.0);
    // Post-stitch maximum 200 -> final division by 2.
    CHECK(r.final_scale == 2.0);
    CHECK(r.series.values == std::vector<double>{5, 15, 40, 45, 40, 45, 50, 100});
    CHECK(w.empty());
}

TEST_CASE("stitch renormalizes to exactly 100") {
    Warnings w;
    const std::vector<GtWindow> ws = {window(0, 0, {30, 60, 90, 60, 60}),
                                      window(1, 1, {30, 45, 30, 30, 100})};
    const auto r = stitch_windows(ws, w);
    CHECK(r.window_scales[1] == 2.0);
    CHECK(r.final_scale == doctest::Approx(2.0));
    CHECK(*std::max_element(r.series.values.begin(), r.series.values.end()) == 100.0);
}

TEST_CASE("stitch errors and warnings") {
    Warnings w;
    const std::vector<GtWindow> short_overlap = {window(0, 0, {1, 2, 3, 4, 5}),
                                                 window(1, 2, {1, 2, 3, 4})};
    CHECK_THROWS_WITH_AS(stitch_windows(short_overlap, w), doctest::Contains("insufficient overlap"),
                         InputError);

    const std::vector<GtWindow> zero_overlap = {window(0, 0, {50, 0, 0, 0, 0}),
                                                window(1, 1, {0, 0, 0, 0, 100})};
    const auto r = stitch_windows(zero_overlap, w);
    CHECK(r.window_scales[1] == 1.0);
    CHECK(w.size() == 1);

    const std::vector<GtWindow> silent = {window(0, 0, {0, 0, 0})};
    CHECK_THROWS_WITH_AS(stitch_windows(silent, w), doctest::Contains("no signal"), InputError);
    CHECK_THROWS_AS(stitch_windows(std::vector<GtWindow>{}, w), InputError);
}

TEST_CASE("stitch is invariant to rescaling one window") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> val(1, 20);
    std::uniform_int_distribution<int> factor(2, 5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<GtWindow> ws;
        int start = 0;
        for (int i = 0; i < 4; ++i) {
            std::vector<int> v(30);
            for (auto& x : v) x = val(rng);
            ws.push_back(window(i, start, v));
            start += 24;
        }
        Warnings w;
        const auto base = stitch_windows(ws, w);
        auto scaled = ws;
        const auto pick = static_cast<std::size_t>(trial % 4);
        const int c = factor(rng);
        for (auto& p : scaled[pick].points) p.value *= c;
        const auto other = stitch_windows(scaled, w);
        REQUIRE(other.series.values.size() == base.series.values.size());
        for (std::size_t k = 0; k < base.series.values.size(); ++k)
            CHECK(other.series.values[k] == doctest::Approx(base.series.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("des_filter examples") {
    const std::vector<double> x = {0, 0, 100, 100};
    CHECK(des_filter(x, 0.5) == std::vector<double>{0, 0, 25, 50});
    CHECK(des_filter(x, 1.0) == x);
    const std::vector<double> c(20, 3.25);
    for (double v : des_filter(c, 0.2)) CHECK(v == doctest::Approx(3.25));
    CHECK_THROWS_AS(des_filter(x, 0.0), InputError);
    CHECK_THROWS_AS(des_filter(x, 1.1), InputError);
    CHECK_THROWS_AS(des_filter(std::vector<double>{}, 0.5), InputError);
}

TEST_CASE("des_filter stays in range and approaches identity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 150.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(60);
        for (auto& v : x) v = u(rng);
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        double previous = INFINITY;
        for (double alpha : {0.5, 0.9, 0.99, 1.0}) {
            const auto y = des_filter(x, alpha);
            double dev = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                CHECK(y[i] >= *lo - 1e-9);
                CHECK(y[i] <= *hi + 1e-9);
                dev = std::max(dev, std::abs(y[i] - x[i]));
            }
            CHECK(dev <= previous);
            previous = dev;
        }
        CHECK(previous == 0.0);
    }
}

TEST_CASE("interpolate_valuation") {
    const FilterConfig off{1.0, 1.0, 1.0};
    const Date d0 = kBase;
    ValuationSeries rs{"c1", {{"c1", d0, 100}, {"c1", d0.plus_days(28), 300}}, false};
    const auto w = interpolate_valuation(rs, off);
    CHECK(w.values == std::vector<double>{100, 150, 200, 250, 300});
    CHECK(w.first_week == week_index(d0));

    ValuationSeries flat{"c1", {{"c1", d0, 100}, {"c1", d0.plus_days(70), 100}}, false};
    for (double v : interpolate_valuation(flat, off).values) CHECK(v == 100.0);

    CHECK_THROWS_AS(interpolate_valuation(ValuationSeries{"c1", {{"c1", d0, 1}}, false}, off),
                    InputError);
}

TEST_CASE("raw-round filter barely moves interior rounds") {
    FilterConfig f{1.0, 0.99, 1.0};
    const Date d0 = kBase;
    ValuationSeries rs{"c1",
                       {{"c1", d0, 100}, {"c1", d0.plus_days(70), 400}, {"c1", d0.plus_days(140), 900}},
                       false};
    const auto w = interpolate_valuation(rs, f);
    // Direct evaluation of the two passes at the second round.
    const double a = 0.99;
    const double s1 = a * 400 + (1 - a) * 100;
    const double s2 = a * s1 + (1 - a) * 100;
    CHECK(w.values[10] == doctest::Approx(s2));
    // Each pass moves the value by at most (1 - alpha) of the gap; two passes
    // stay within 1 - alpha^2.
    CHECK(std::abs(s1 - 400) < 0.0101 * (400 - 100));
    CHECK(std::abs(w.values[10] - 400) <= (1 - a * a) * (400 - 100) + 1e-9);
}

TEST_CASE("interpolation passes through rounds when filters are off") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> gap(1, 40);
    std::uniform_real_distribution<double> val(1.0, 5000.0);
    const FilterConfig off{1.0, 1.0, 1.0};
    for (int trial = 0; trial < 30; ++trial) {
        ValuationSeries rs{"c1", {}, false};
        Date d = kBase;
        for (int i = 0; i < 7; ++i) {
            rs.rounds.push_back({"c1", d, val(rng)});
            d = d.plus_days(7 * gap(rng));
        }
        const auto w = interpolate_valuation(rs, off);
        for (const auto& r : rs.rounds)
            CHECK(w.values[static_cast<std::size_t>(week_index(r.date) - w.first_week)] ==
                  doctest::Approx(r.valuation).epsilon(1e-12));
    }
}

TEST_CASE("minmax_normalize") {
    CHECK(minmax_normalize(series(0, {2, 4, 6})).values == std::vector<double>{0, 0.5, 1});
    const auto unit = series(0, {0, 0.25, 1, 0.5});
    CHECK(minmax_normalize(unit).values == unit.values);
    Warnings w;
    const auto flat = minmax_normalize(series(0, {3, 3, 3}), &w, "c1");
    CHECK(flat.values == std::vector<double>{0.5, 0.5, 0.5});
    REQUIRE(w.size() == 1);
    CHECK(w[0].company_id == "c1");

    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0, 10);
    std::vector<double> x(40);
    for (auto& v : x) v = n(rng);
    const auto y = minmax_normalize(series(0, x)).values;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            CHECK((x[i] < x[j]) == (y[i] < y[j]));
}

TEST_CASE("align") {
    const auto interest = series(0, std::vector<double>(400, 1.0));
    const auto valuation = series(120, std::vector<double>(261, 2.0));
    const auto a0 = align(interest, valuation, 0);
    CHECK(a0.n() == 261);
    CHECK(a0.first_week == 120);
    const auto back = align(interest, valuation, -120);
    CHECK(back.n() == 261);
    CHECK(back.first_week == 0);
    CHECK_THROWS_WITH_AS(align(interest, valuation, -130), doctest::Contains("insufficient overlap"),
                         InputError);
    CHECK_THROWS_AS(align(interest, valuation, 20), InputError);
    CHECK_THROWS_AS(align(interest, series(0, std::vector<double>(9, 1.0)), 0), InputError);

    std::vector<double> ramp(50);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    const auto p = align(series(0, ramp), series(10, std::vector<double>(20, 0.0)), 5);
    CHECK(p.interest.front() == 15.0);
    CHECK(p.interest.back() == 34.0);
}

TEST_CASE("prepare_company normalizes both sides") {
    Warnings w;
    std::vector<int> v(150);
    for (int i = 0; i < 150; ++i) v[static_cast<std::size_t>(i)] = 1 + (i * 99) / 149;
    const std::vector<GtWindow> ws = {window(0, 0, v)};
    const auto stitched = stitch_windows(ws, w);
    CompanyRecord c{"c1", "C", kBase, false, false, "", "", ""};
    ValuationSeries rs{"c1", {}, false};
    for (int i = 0; i < 6; ++i) rs.rounds.push_back({"c1", kBase.plus_days(140 * (i + 1)), 10.0 * (i + 1)});
    const auto p = prepare_company(c, rs, stitched, FilterConfig{});
    CHECK(p.founding_week == week_index(kBase));
    for (const auto* s : {&p.interest, &p.valuation}) {
        CHECK(s->kind == SeriesKind::Normalized);
        CHECK(*std::min_element(s->values.begin(), s->values.end()) == 0.0);
        CHECK(*std::max_element(s->values.begin(), s->values.end()) == 1.0);
    }
    CHECK(p.valuation.first_week == week_index(kBase.plus_days(140)));
}

TEST_CASE("filter config validation") {
    CHECK_NOTHROW(FilterConfig{}.validate());
    CHECK_THROWS_AS((FilterConfig{0.0, 0.99, 0.9}.validate()), InputError);
    CHECK_THROWS_AS((FilterConfig{0.2, 1.5, 0.9}.validate()), InputError);
}

#include "../oracles.hpp"
#include "helpers.hpp"
#include "trendlink/correlate.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace trendlink;

namespace {

double tau(const std::vector<double>& x, const std::vector<double>& y) { return *kendall_tau(x, y); }

WeeklySeries series(std::int64_t first, std::vector<double> v) {
    return WeeklySeries{first, std::move(v), SeriesKind::Normalized};
}

}  // namespace

TEST_CASE("kendall tau examples") {
    CHECK(tau({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}) == 1.0);
    CHECK(tau({1, 2, 3, 4, 5}, {1, 2, 3, 5, 4}) == doctest::Approx(0.8));
    CHECK(tau({1, 1, 2}, {1, 2, 3}) == doctest::Approx(2.0 / std::sqrt(6.0)));
    CHECK(tau({1, 2, 3}, {3, 2, 1}) == -1.0);
    CHECK_FALSE(kendall_tau(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
    CHECK_FALSE(kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}));
    CHECK_THROWS_AS(kendall_tau(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), InputError);
    CHECK_THROWS_AS(kendall_tau(std::vector<double>{1}, std::vector<double>{1}), InputError);
    CHECK_THROWS_AS(kendall_tau(std::vector<double>{1, NAN}, std::vector<double>{1, 2}), InputError);
}

TEST_CASE("kendall tau matches pair enumeration") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> len(2, 50);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = len(rng);
        const bool ties = trial % 2 == 0;
        const auto x = ties ? oracle::tied_sample(n, 5, rng) : oracle::continuous_sample(n, rng);
        const auto y = ties ? oracle::tied_sample(n, 4, rng) : oracle::continuous_sample(n, rng);
        const auto fast = kendall_tau(x, y);
        const auto slow = oracle::kendall_tau_b(x, y);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) CHECK(std::abs(*fast - *slow) < 1e-12);
    }
}

TEST_CASE("kendall tau symmetry properties") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = oracle::continuous_sample(30, rng);
        const auto y = oracle::tied_sample(30, 6, rng);
        const auto xy = kendall_tau(x, y);
        const auto yx = kendall_tau(y, x);
        REQUIRE(xy.has_value() == yx.has_value());
        if (xy) CHECK(*xy == doctest::Approx(*yx).epsilon(1e-14));
        CHECK(tau(x, x) == 1.0);
        std::vector<double> neg(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
        const auto z = oracle::continuous_sample(30, rng);
        CHECK(tau(neg, z) == doctest::Approx(-tau(x, z)).epsilon(1e-14));
    }
}

TEST_CASE("tau to pearson") {
    CHECK(tau_to_pearson(0.5) == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK(tau_to_pearson(0.0) == 0.0);
    CHECK(tau_to_pearson(1.0) == 1.0);
    CHECK_THROWS_AS(tau_to_pearson(1.5), InputError);
    double previous = -2.0;
    for (int i = -100; i <= 100; ++i) {
        const double t = i / 100.0;
        const double r = tau_to_pearson(t);
        CHECK(r > previous);
        CHECK(r == doctest::Approx(-tau_to_pearson(-t)));
        previous = r;
    }
}

TEST_CASE("significance threshold") {
    const auto s = tau_significance(0.66, 107, 0.01);
    CHECK(s.sigma == doctest::Approx(std::sqrt(438.0 / 102078.0)));
    CHECK(s.threshold == doctest::Approx(2.3263 * 0.0655).epsilon(2e-3));
    CHECK(std::abs(s.threshold - 2.3263 * std::sqrt(438.0 / 102078.0)) < 1e-4);
    CHECK(s.significant);
    CHECK_FALSE(tau_significance(0.0, 50, 0.01).significant);
    CHECK(tau_significance(0.2, 500, 0.01).significant);
    CHECK_FALSE(tau_significance(0.2, 12, 0.01).significant);
    double previous = INFINITY;
    for (std::size_t n = 11; n < 600; ++n) {
        const double t = tau_significance(0.1, n, 0.01).threshold;
        CHECK(t < previous);
        previous = t;
    }
    CHECK_THROWS_AS(tau_significance(0.5, 10, 0.01), InputError);
    CHECK_THROWS_AS(tau_significance(0.5, 20, 0.6), InputError);
}

TEST_CASE("lag bounds") {
    const auto interest = series(0, std::vector<double>(400, 0.0));
    const auto valuation = series(120, std::vector<double>(261, 0.0));
    auto b = acc_lag_bounds(interest, valuation, 20);
    CHECK(b.min == -100);
    CHECK(b.max == 399 - 380);
    b = acc_lag_bounds(interest, valuation, 120);
    CHECK(b.min == 0);
    // Founding before the interest history: clamp to the interest start.
    b = acc_lag_bounds(series(50, std::vector<double>(350, 0.0)), valuation, 0);
    CHECK(b.min == -70);
}

TEST_CASE("lag search finds a delayed copy") {
    std::vector<double> interest(300);
    for (std::size_t w = 0; w < interest.size(); ++w)
        interest[w] = std::sin(static_cast<double>(w) / 8.0) + static_cast<double>(w) / 200.0;
    // valuation week v mirrors interest week v - 10
    std::vector<double> val;
    for (std::size_t v = 60; v <= 200; ++v) val.push_back(interest[v - 10]);
    const auto r = acc_lag_search(series(0, interest), series(60, val), 0);
    CHECK(r.lag == -10);
    CHECK(r.tau == 1.0);
    CHECK(r.n == val.size());

    // Brute-force scan over the same bounds agrees.
    double best = -2;
    std::int64_t best_lag = 0;
    for (std::int64_t lag = -60; lag <= 299 - 200; ++lag) {
        std::vector<double> a;
        for (std::size_t k = 0; k < val.size(); ++k)
            a.push_back(interest[static_cast<std::size_t>(60 + lag) + k]);
        const double t = *oracle::kendall_tau_b(a, val);
        if (t > best) {
            best = t;
            best_lag = lag;
        }
    }
    CHECK(best_lag == -10);

    // Founding at the first round week: only nonnegative lags are searched.
    const auto forward = acc_lag_search(series(0, interest), series(60, val), 60);
    CHECK(forward.lag >= 0);
}

TEST_CASE("lag ties go to the smaller shift") {
    std::vector<double> up(100);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = static_cast<double>(i);
    std::vector<double> val(50);
    for (std::size_t i = 0; i < val.size(); ++i) val[i] = static_cast<double>(i);
    const auto r = acc_lag_search(series(0, up), series(25, val), 0);
    CHECK(r.lag == 0);
    CHECK(r.tau == 1.0);
    CHECK_THROWS_AS(acc_lag_search(series(0, std::vector<double>(20, 0.0)), series(0, val), 0),
                    InputError);
}

TEST_CASE("classification examples") {
    const ThresholdConfig cfg;
    const auto g1 = classify_group(0.7, std::nullopt, cfg);
    CHECK(g1.group == Group::G1);
    CHECK(g1.lag == 0);

    const auto g2 = classify_group(0.3, LagResult{-40, 0.6, 100}, cfg);
    CHECK(g2.group == Group::G2);
    CHECK(g2.improvement == doctest::Approx(1.0));
    CHECK(g2.lag == -40);

    const auto g3 = classify_group(0.45, LagResult{12, 0.55, 100}, cfg);
    CHECK(g3.group == Group::G3);
    CHECK(g3.improvement == doctest::Approx(0.2222).epsilon(1e-3));
    CHECK(g3.tau_best == 0.55);

    const auto near_zero = classify_group(0.01, LagResult{30, 0.7, 100}, cfg);
    CHECK(near_zero.group == Group::G2);
    CHECK(near_zero.improvement == std::numeric_limits<double>::infinity());

    const auto weak = classify_group(0.2, LagResult{5, 0.1, 100}, cfg);
    CHECK(weak.group == Group::G3);
    CHECK(weak.tau_best == 0.2);
    CHECK(weak.lag == 0);

    CHECK_THROWS_AS(classify_group(0.2, std::nullopt, cfg), InputError);
}

TEST_CASE("groups are exhaustive and exclusive") {
    const ThresholdConfig cfg;
    for (int a = -10; a <= 10; ++a)
        for (int b = -10; b <= 10; ++b)
            for (std::int64_t lag : {-30, 0, 30}) {
                const double t0 = a / 10.0;
                const double ts = b / 10.0;
                std::optional<LagResult> shifted;
                if (t0 < cfg.strong_tau) shifted = LagResult{lag, ts, 50};
                const auto c = classify_group(t0, shifted, cfg);
                const bool g1 = t0 >= 0.5;
                const bool g2 = !g1 && lag != 0 && ts >= 0.5 && ts > t0 &&
                                (t0 <= 0.05 || (ts - t0) / t0 >= 0.5);
                CHECK(static_cast<int>(g1) + static_cast<int>(g2) <= 1);
                const auto expected = g1 ? Group::G1 : g2 ? Group::G2 : Group::G3;
                CHECK(c.group == expected);
                if (c.group == Group::G1) CHECK(c.lag == 0);
                if (c.group == Group::G2) CHECK(c.lag != 0);
                CHECK(c.tau_best >= t0);
            }
}

TEST_CASE("correlations file round trip") {
    testing::TempDir dir("corr");
    std::vector<CorrelationResult> rs = {
        {"a", 0.71, 0.71, 0, 120, true, 0.15, Group::G1, 0.0},
        {"b", 0.02, 0.64, -37, 90, true, 0.17, Group::G2, std::numeric_limits<double>::infinity()},
        {"c", 0.30, 0.35, 0, 40, false, 0.25, Group::G3, 0.1666666667},
    };
    write_correlations(dir / "c.csv", rs);
    const auto back = read_correlations(dir / "c.csv");
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        CHECK(back[i].company_id == rs[i].company_id);
        CHECK(back[i].tau_best == doctest::Approx(rs[i].tau_best));
        CHECK(back[i].lag_weeks == rs[i].lag_weeks);
        CHECK(back[i].n == rs[i].n);
        CHECK(back[i].group == rs[i].group);
        CHECK(back[i].significant == rs[i].significant);
    }
    CHECK(std::isinf(back[1].improvement));
    const auto text = testing::read_file(dir / "c.csv");
    CHECK(text.rfind("company_id,tau_zero,tau_best,lag_weeks,n,significant,threshold,group,improvement\n", 0) == 0);
}

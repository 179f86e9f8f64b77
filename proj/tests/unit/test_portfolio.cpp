#include "../oracles.hpp"
#include "helpers.hpp"
#include "trendlink/portfolio.hpp"

#include <doctest.h>

#include <numeric>

using namespace trendlink;
using namespace trendlink::portfolio;

namespace {

CorrelationResult result(const std::string& id, Group g, double tau, std::int64_t lag = 0) {
    CorrelationResult r;
    r.company_id = id;
    r.group = g;
    r.tau_best = tau;
    r.tau_zero = g == Group::G2 ? 0.1 : tau;
    r.lag_weeks = lag;
    r.n = 100;
    return r;
}

std::vector<CorrelationResult> table3_shaped() {
    std::vector<CorrelationResult> rs;
    for (int i = 0; i < 161; ++i) rs.push_back(result("a" + std::to_string(i), Group::G1, 0.7));
    for (int i = 0; i < 39; ++i)
        rs.push_back(result("b" + std::to_string(i), Group::G2, 0.6, i % 3 == 0 ? 20 : -40));
    for (int i = 0; i < 41; ++i) rs.push_back(result("c" + std::to_string(i), Group::G3, 0.2));
    return rs;
}

}  // namespace

TEST_CASE("percentiles") {
    const std::vector<double> xs = {0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6, 1.0};
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
        CHECK(stats::percentile(xs, p) == doctest::Approx(oracle::percentile(xs, p)));
    CHECK(stats::percentile(xs, 0.25) == doctest::Approx(0.325));
    const auto s = *stats::summarize(xs);
    CHECK(s.count == 10);
    CHECK(s.mean == doctest::Approx(0.55));
    CHECK(s.median == doctest::Approx(0.55));
    CHECK_FALSE(stats::summarize(std::vector<double>{}));

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = oracle::continuous_sample(1 + trial % 17, rng);
        const auto sm = *stats::summarize(v);
        CHECK(sm.p25 <= sm.median);
        CHECK(sm.median <= sm.p75);
        CHECK(sm.median == doctest::Approx(oracle::percentile(v, 0.5)));
    }
}

TEST_CASE("mcap growth rate") {
    ValuationSeries rs{"c1", {{"c1", Date{2012, 1, 1}, 300}, {"c1", Date{2014, 1, 1}, 1200}}, true};
    const auto m = mcap_gr(rs, Date{2010, 1, 1});
    CHECK(m.max_valuation == 1200);
    CHECK(m.date_of_max == Date{2014, 1, 1});
    CHECK(m.years_to_max == doctest::Approx(1461.0 / 365.25));
    CHECK(m.rate == doctest::Approx(300.0));

    ValuationSeries tie{"c1", {{"c1", Date{2012, 1, 1}, 500}, {"c1", Date{2013, 1, 1}, 500}}, false};
    CHECK(mcap_gr(tie, Date{2010, 1, 1}).date_of_max == Date{2012, 1, 1});

    CHECK_THROWS_AS(mcap_gr(rs, Date{2015, 1, 1}), InputError);
    CHECK_THROWS_WITH_AS(mcap_gr(rs, Date{2013, 12, 30}), doctest::Contains("degenerate growth interval"),
                         InputError);

    auto scaled = rs;
    for (auto& r : scaled.rounds) r.valuation *= 3.5;
    CHECK(mcap_gr(scaled, Date{2010, 1, 1}).rate == doctest::Approx(3.5 * m.rate));
}

TEST_CASE("group stats on an all-G1 corpus") {
    std::vector<CorrelationResult> rs;
    for (int i = 0; i < 5; ++i) rs.push_back(result("c" + std::to_string(i), Group::G1, 0.6 + i * 0.05));
    const auto rows = group_stats(rs);
    REQUIRE(rows.size() == 6);
    CHECK(rows[1].label == "G1");
    CHECK(rows[1].share_sample == 1.0);
    CHECK(rows[2].count == 0);
    CHECK(rows[3].count == 0);
    CHECK_FALSE(rows[2].tau);
    CHECK_THROWS_AS(group_stats({}), InputError);
}

TEST_CASE("group stats quartiles follow the percentile oracle") {
    std::vector<CorrelationResult> rs;
    std::vector<double> taus;
    for (int i = 0; i < 10; ++i) {
        const double t = 0.5 + 0.037 * ((i * 7) % 10);
        taus.push_back(t);
        rs.push_back(result("c" + std::to_string(i), Group::G1, t));
    }
    const auto rows = group_stats(rs);
    const auto& tau = *rows[0].tau;
    CHECK(tau.p25 == doctest::Approx(oracle::percentile(taus, 0.25)));
    CHECK(tau.median == doctest::Approx(oracle::percentile(taus, 0.5)));
    CHECK(tau.p75 == doctest::Approx(oracle::percentile(taus, 0.75)));
}

TEST_CASE("group shares on a Table-3-shaped corpus") {
    const auto rs = table3_shaped();
    const auto rows = group_stats(rs);
    CHECK(rows[0].count == 241);
    CHECK(rows[1].share_sample == doctest::Approx(0.668).epsilon(1e-3));
    CHECK(rows[2].share_sample == doctest::Approx(0.162).epsilon(1e-2));
    CHECK(rows[3].share_sample == doctest::Approx(0.170).epsilon(1e-2));
    CHECK(rows[1].count + rows[2].count + rows[3].count == 241);
    CHECK(rows[4].label == "Positive shift");
    CHECK(rows[4].count == 13);
    CHECK(rows[5].count == 26);
    CHECK(rows[4].lag->mean == 20.0);
    CHECK(rows[5].lag->median == -40.0);
}

TEST_CASE("dimension stats split every result into one pole") {
    const auto rs = table3_shaped();
    FeatureMap features;
    std::mt19937_64 rng(8);
    std::bernoulli_distribution coin(0.4);
    for (const auto& r : rs) features[r.company_id] = {coin(rng), coin(rng), coin(rng)};
    for (const auto& dim : standard_dimensions()) {
        const auto rows = dimension_stats(rs, features, dim);
        std::size_t total = 0;
        std::size_t poles = 0;
        for (const auto& row : rows) {
            if (row.label == "Lag") continue;
            total += row.count;
            CHECK(row.share_sample >= 0.0);
            CHECK(row.share_sample <= 1.0);
            CHECK(*row.share_dimension <= 1.0);
            if (row.label == "G1") poles += row.denominator;
        }
        CHECK(total == rs.size());
        CHECK(poles == rs.size());
    }
    FeatureMap missing;
    CHECK_THROWS_AS(dimension_stats(rs, missing, standard_dimensions()[0]), InputError);
}

TEST_CASE("industry roll-up") {
    std::vector<CompanyRecord> companies;
    std::vector<CorrelationResult> rs;
    for (int i = 0; i < 141; ++i) {
        const auto id = "i" + std::to_string(i);
        companies.push_back({id, id, Date{2010, 1, 1}, false, false, "Internet", "", ""});
        rs.push_back(result(id, i < 100 ? Group::G1 : i < 120 ? Group::G2 : Group::G3, 0.5));
    }
    const auto rows = industry_rollup(rs, companies, IndustryLevel::Sector);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].high == 120);
    CHECK(rows[0].total == 141);
    CHECK(rows[0].share == static_cast<double>(120) / 141);
    CHECK(std::round(rows[0].share * 100) == 85);

    const auto untagged = industry_rollup(rs, companies, IndustryLevel::SubIndustry);
    REQUIRE(untagged.size() == 1);
    CHECK(untagged[0].tag == kUntagged);

    std::vector<CorrelationResult> half = {result(companies[0].id, Group::G1, 0.7),
                                           result(companies[1].id, Group::G3, 0.1)};
    CHECK(industry_rollup(half, companies, IndustryLevel::Sector)[0].share == 0.5);
    CHECK(parse_industry_level("sub_industry") == IndustryLevel::SubIndustry);
    CHECK_THROWS_AS(parse_industry_level("segment"), InputError);
}

TEST_CASE("tau histogram") {
    const auto h = tau_histogram({result("a", Group::G1, 0.66)}, 0.1);
    CHECK(h.counts.size() == 20);
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        if (h.counts[i]) {
            ++nonzero;
            CHECK(h.lower_edges[i] == doctest::Approx(0.6));
        }
    CHECK(nonzero == 1);

    const auto edge = tau_histogram({result("a", Group::G1, 1.0), result("b", Group::G3, -1.0)}, 0.1);
    CHECK(edge.counts.back() == 1);
    CHECK(edge.counts.front() == 1);
    CHECK_THROWS_AS(tau_histogram({}, 0.0), InputError);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<CorrelationResult> rs;
        for (int i = 0; i < 50 + trial; ++i) rs.push_back(result("x", Group::G3, u(rng)));
        const auto hist = tau_histogram(rs, 0.05 + 0.01 * trial);
        CHECK(std::accumulate(hist.counts.begin(), hist.counts.end(), std::size_t{0}) == rs.size());
    }
}

TEST_CASE("histogram shows left skew of a strong corpus") {
    // Most taus cluster high with a thin tail toward zero: median > mean.
    std::vector<CorrelationResult> rs;
    for (int i = 0; i < 80; ++i) rs.push_back(result("s", Group::G1, 0.8 + 0.001 * i));
    for (int i = 0; i < 20; ++i) rs.push_back(result("t", Group::G3, 0.05 * i));
    const auto h = tau_histogram(rs, 0.1);
    double mean = 0.0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        mean += h.counts[i] * (h.lower_edges[i] + 0.05);
        total += h.counts[i];
    }
    mean /= static_cast<double>(total);
    std::size_t cumulative = 0;
    double median_bin = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        cumulative += h.counts[i];
        if (cumulative * 2 >= total) {
            median_bin = h.lower_edges[i];
            break;
        }
    }
    CHECK(median_bin > mean);
}

TEST_CASE("mcap table deviations") {
    std::vector<CorrelationResult> rs = {result("a", Group::G1, 0.7), result("b", Group::G1, 0.8),
                                         result("c", Group::G3, 0.1)};
    std::map<std::string, McapGr> m;
    m["a"] = {"a", 100, Date{2014, 1, 1}, 1, 100};
    m["b"] = {"b", 300, Date{2014, 1, 1}, 1, 300};
    m["c"] = {"c", 200, Date{2014, 1, 1}, 1, 200};
    const auto rows = mcap_table(rs, m);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].rate->mean == 200);
    CHECK((*rows[1].deviation)[0] == 0.0);
    CHECK_FALSE(rows[2].rate);
    CHECK((*rows[3].deviation)[1] == doctest::Approx((200 - 150) / 150.0));
}

TEST_CASE("report writers") {
    testing::TempDir dir("reports");
    const auto rs = table3_shaped();
    write_group_report(dir / "g.csv", group_stats(rs));
    const auto text = testing::read_file(dir / "g.csv");
    CHECK(text.rfind("dimension,pole,label,count", 0) == 0);
    write_histogram(dir / "h.csv", tau_histogram(rs, 0.1));
    CHECK(std::filesystem::exists(dir / "h.csv"));
}

#include "helpers.hpp"
#include "trendlink/ingest.hpp"
#include "trendlink/synth.hpp"

#include <doctest.h>

#include <sstream>

using namespace trendlink;
using testing::TempDir;
using testing::write_file;

namespace {

const char* kCompaniesHeader = "id,name,founded,is_b2c,is_platform,sector,industry,sub_industry\n";
const Date kEnd{2019, 8, 31};

GtWindow parse_window_text(const std::string& body) {
    std::istringstream in("week,value\n" + body);
    return parse_gt_export(in, "w.csv", "c1", 0);
}

}  // namespace

TEST_CASE("dates and weeks") {
    CHECK(Date::parse("2014-03-02").to_string() == "2014-03-02");
    CHECK_THROWS_AS(Date::parse("2014-3-2"), InputError);
    CHECK_THROWS_AS(Date::parse("2014-02-30"), InputError);
    const auto sunday = Date{2014, 3, 2};
    CHECK(week_start(week_index(sunday)) == sunday);
    CHECK(week_index(sunday.plus_days(6)) == week_index(sunday));
    CHECK(week_index(sunday.plus_days(7)) == week_index(sunday) + 1);
    CHECK(days_between(Date{2010, 1, 1}, Date{2014, 1, 1}) == 1461);
}

TEST_CASE("parse_companies maps fields") {
    TempDir dir("companies");
    write_file(dir / "companies.csv",
               std::string(kCompaniesHeader) + "c1,Airbnb,2008-08-01,true,true,Internet,eCommerce,Marketplace\n");
    const auto rows = parse_companies(dir / "companies.csv", kEnd);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].id == "c1");
    CHECK(rows[0].name == "Airbnb");
    CHECK(rows[0].founded == Date{2008, 8, 1});
    CHECK(rows[0].is_b2c);
    CHECK(rows[0].is_platform);
    CHECK(rows[0].sector == "Internet");
    CHECK(rows[0].industry == "eCommerce");
    CHECK(rows[0].sub_industry == "Marketplace");
}

TEST_CASE("parse_companies rejects bad rows") {
    TempDir dir("companies_bad");
    const auto path = dir / "companies.csv";

    write_file(path, std::string(kCompaniesHeader) + "c1,X,2025-01-01,true,true,a,b,c\n");
    CHECK_THROWS_WITH_AS(parse_companies(path, kEnd), doctest::Contains("founded after analysis end"),
                         InputError);

    write_file(path, std::string(kCompaniesHeader) +
                         "c1,X,2010,true,true,a,b,c\nc1,Y,2011,false,false,a,b,c\n");
    CHECK_THROWS_WITH_AS(parse_companies(path, kEnd), doctest::Contains(":3: duplicate id 'c1'"),
                         InputError);

    write_file(path, std::string(kCompaniesHeader) + "c1,X,2010,yes,true,a,b,c\n");
    CHECK_THROWS_WITH_AS(parse_companies(path, kEnd), doctest::Contains("unknown boolean token"),
                         InputError);

    write_file(path, std::string(kCompaniesHeader) + "c1,X,June 2012,true,true,a,b,c\n");
    CHECK_THROWS_AS(parse_companies(path, kEnd), InputError);

    write_file(path, "id,name\nc1,X\n");
    CHECK_THROWS_AS(parse_companies(path, kEnd), InputError);
}

TEST_CASE("resolve_founding_date") {
    CHECK(resolve_founding_date("2012") == Date{2012, 1, 1});
    CHECK(resolve_founding_date("2012-06-15") == Date{2012, 6, 15});
    CHECK_THROWS_AS(resolve_founding_date("June 2012"), InputError);
}

TEST_CASE("derive_unicorn") {
    auto rounds = [](std::initializer_list<double> vs) {
        std::vector<ValuationRound> out;
        int day = 1;
        for (double v : vs) out.push_back({"c1", Date{2010, 1, static_cast<unsigned>(day++)}, v});
        return out;
    };
    CHECK(derive_unicorn(rounds({200, 1500})));
    CHECK_FALSE(derive_unicorn(rounds({999.99})));
    CHECK(derive_unicorn(rounds({1000})));
    CHECK_THROWS_AS(derive_unicorn(std::vector<ValuationRound>{}), InputError);

    // Adding a round never turns a unicorn into a non-unicorn.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(1.0, 2000.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ValuationRound> rs;
        bool before = false;
        for (int i = 0; i < 8; ++i) {
            rs.push_back({"c1", Date{2010, 1, 1}.plus_days(i * 30), value(rng)});
            const bool now = derive_unicorn(rs);
            CHECK((!before || now));
            before = now;
        }
    }
}

TEST_CASE("parse_gt_export") {
    const auto w = parse_window_text("2014-03-02,42\n2014-03-09,<1\n2014-03-16,100\n");
    REQUIRE(w.points.size() == 3);
    CHECK(w.points[0].week == Date{2014, 3, 2});
    CHECK(w.points[0].value == 42);
    CHECK(w.points[1].value == 0);
    CHECK(w.points[1].sub_unit);
    CHECK_FALSE(w.fragment);

    CHECK(parse_window_text("2014-03-02,42\n").fragment);
    CHECK_THROWS_WITH_AS(parse_window_text("2014-03-02,42\n2014-03-10,50\n"),
                         doctest::Contains("non-weekly spacing"), InputError);
    CHECK_THROWS_WITH_AS(parse_window_text("2014-03-02,101\n"), doctest::Contains("out of range"),
                         InputError);
    CHECK_THROWS_AS(parse_window_text("2014-03-02,-1\n"), InputError);

    std::string body;
    for (int i = 0; i < 201; ++i)
        body += Date{2010, 1, 3}.plus_days(7 * i).to_string() + "," + std::to_string(i % 101) + "\n";
    CHECK_THROWS_WITH_AS(parse_window_text(body), doctest::Contains("window exceeds 200 points"),
                         InputError);
}

TEST_CASE("window file names") {
    CHECK(parse_window_filename("c1.w0.csv") == std::make_pair(std::string("c1"), 0));
    CHECK(parse_window_filename("acme.inc.w12.csv") == std::make_pair(std::string("acme.inc"), 12));
    CHECK_FALSE(parse_window_filename("c1.csv"));
    CHECK_FALSE(parse_window_filename("c1.wx.csv"));
    CHECK_FALSE(parse_window_filename(".w1.csv"));
}

TEST_CASE("parse_valuations groups and sorts") {
    TempDir dir("valuations");
    const auto path = dir / "valuations.csv";
    write_file(path,
               "company_id,date,valuation_musd\n"
               "c1,2012-01-01,1100\nc2,2011-05-01,40\nc1,2010-01-01,10\nc1,2011-01-01,300\n"
               "c2,2013-05-01,90\n");
    const auto m = parse_valuations(path);
    REQUIRE(m.size() == 2);
    const auto& c1 = m.at("c1");
    REQUIRE(c1.rounds.size() == 3);
    CHECK(c1.rounds[0].date == Date{2010, 1, 1});
    CHECK(c1.rounds[2].date == Date{2012, 1, 1});
    CHECK(c1.is_unicorn);
    CHECK_FALSE(m.at("c2").is_unicorn);

    write_file(path, "company_id,date,valuation_musd\nc1,2012-01-01,-5\n");
    CHECK_THROWS_WITH_AS(parse_valuations(path), doctest::Contains("nonpositive valuation"),
                         InputError);
    write_file(path, "company_id,date,valuation_musd\nc1,2012-01-01,5\nc1,2012-01-01,6\n");
    CHECK_THROWS_WITH_AS(parse_valuations(path), doctest::Contains("duplicate round"), InputError);
}

TEST_CASE("parse_metadata") {
    TempDir dir("metadata");
    const auto path = dir / "gt_metadata.csv";
    write_file(path,
               "company_id,brand_unique,category_group,related_query_count\n"
               "c1,true,A,12\nc1,false,B,3\n");
    const auto m = parse_metadata(path);
    REQUIRE(m.at("c1").size() == 2);
    CHECK(m.at("c1")[0].category_group == CategoryGroup::A);
    CHECK(m.at("c1")[1].related_query_count == 3);
    write_file(path, "company_id,brand_unique,category_group,related_query_count\nc1,true,C,1\n");
    CHECK_THROWS_AS(parse_metadata(path), InputError);
}

TEST_CASE("corpus round trip") {
    synth::CorpusConfig cfg;
    cfg.venture_count = 6;
    cfg.seed = 5;
    cfg.poor_quality_count = 1;
    const auto generated = synth::generate_corpus(cfg);
    TempDir dir("roundtrip");
    write_corpus(dir.path(), generated.corpus);
    const auto loaded = load_corpus(dir.path(), cfg.analysis_end);
    CHECK(loaded == generated.corpus);

    // Serializing the reloaded corpus again gives identical files.
    TempDir again("roundtrip2");
    write_corpus(again.path(), loaded);
    for (const char* f : {corpus_files::kCompanies, corpus_files::kValuations, corpus_files::kMetadata})
        CHECK(testing::read_file(dir / f) == testing::read_file(again / f));
}

TEST_CASE("founding after a round is reported") {
    Corpus c;
    c.companies.push_back({"early", "E", Date{2010, 1, 1}, false, false, "", "", ""});
    c.companies.push_back({"late", "L", Date{2012, 1, 1}, false, false, "", "", ""});
    c.valuations["early"] = {"early", {{"early", Date{2011, 1, 1}, 10}}, false};
    c.valuations["late"] = {"late", {{"late", Date{2011, 1, 1}, 10}}, false};
    const auto w = check_founding_vs_rounds(c);
    REQUIRE(w.size() == 1);
    CHECK(w[0].company_id == "late");
}

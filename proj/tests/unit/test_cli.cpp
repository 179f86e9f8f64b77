#include "helpers.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <sys/wait.h>

namespace {

std::string cli() {
    const char* p = std::getenv("TRENDLINK_CLI");
    return p ? p : "";
}

int run(const std::string& args) {
    const auto cmd = cli() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("command line end to end") {
    if (cli().empty()) {
        MESSAGE("TRENDLINK_CLI not set; skipping");
        return;
    }
    testing::TempDir dir("cli");
    const auto corpus = (dir / "corpus").string();
    const auto out = (dir / "out").string();

    CHECK(run("--help") == 0);
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("synth --out " + corpus + " --count 12 --seed 7 --poor-quality 1 --short-rounds 1") == 0);
    CHECK(std::filesystem::exists(dir / "corpus" / "truth.csv"));
    CHECK(run("validate --corpus " + corpus) == 0);
    CHECK(run("score-quality --corpus " + corpus + " --out " + out) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "quality.csv"));
    CHECK(run("preprocess --corpus " + corpus + " --out " + out) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "stitch_report.json"));
    CHECK(run("correlate --corpus " + corpus + " --out " + out) == 0);
    const auto corr = (dir / "out" / "correlations.csv").string();
    CHECK(std::filesystem::exists(corr));
    CHECK(run("portfolio-report --corpus " + corpus + " --correlations " + corr + " --out " + out) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "report_groups.csv"));
    CHECK(run("fsqca --corpus " + corpus + " --correlations " + corr + " --out " + out +
              " --cons-suff 0.75 --freq 1 --cons-nec 0.9 --ron 0.6 --anchors 0.1,0.499,0.9") == 0);
    CHECK(std::filesystem::exists(dir / "out" / "qca_solution.txt"));
    CHECK(run("plot histogram --correlations " + corr + " --out " + (dir / "h.svg").string()) == 0);
    CHECK(run("plot v0005 --correlations " + corr + " --series " + out + "/series --out " +
              (dir / "o.svg").string()) == 0);
    CHECK(run("plot nobody --correlations " + corr + " --series " + out + "/series --out " +
              (dir / "x.svg").string()) == 1);

    const auto run_out = (dir / "run").string();
    CHECK(run("--reproducible run --corpus " + corpus + " --out " + run_out) == 0);
    const auto manifest =
        nlohmann::json::parse(testing::read_file(dir / "run" / "manifest.json"));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["exclusions_by_stage"]["ingest"] == 1);
    CHECK(manifest["exclusions_by_stage"]["quality"] == 1);

    testing::write_file(dir / "cfg.ini", "strong-tau = 0.6\nmin-rounds = 5\n");
    CHECK(run("--config " + (dir / "cfg.ini").string() + " run --corpus " + corpus + " --out " +
              (dir / "run2").string()) == 0);
    const auto m2 = nlohmann::json::parse(testing::read_file(dir / "run2" / "manifest.json"));
    CHECK(m2["config"]["strong_tau"] == 0.6);
    CHECK(m2["config"]["min_rounds"] == 5);

    // Input errors exit 1, bad settings too.
    CHECK(run("run --corpus " + (dir / "nope").string() + " --out " + run_out) == 1);
    CHECK(run("--alpha-interest 0 run --corpus " + corpus + " --out " + run_out) == 1);
    testing::write_file(dir / "bad" / "companies.csv", "id,name\nc1,X\n");
    testing::write_file(dir / "bad" / "valuations.csv", "company_id,date,valuation_musd\n");
    CHECK(run("run --corpus " + (dir / "bad").string() + " --out " + run_out) == 1);

    // A corpus where nothing survives sampling is a stage failure.
    testing::write_file(dir / "empty" / "companies.csv",
                        "id,name,founded,is_b2c,is_platform,sector,industry,sub_industry\n"
                        "c1,X,2001,true,true,a,b,c\n");
    testing::write_file(dir / "empty" / "valuations.csv", "company_id,date,valuation_musd\n");
    CHECK(run("run --corpus " + (dir / "empty").string() + " --out " + run_out) == 2);
}

#include "trendlink/csv.hpp"
#include "trendlink/pipeline.hpp"
#include "trendlink/portfolio.hpp"
#include "trendlink/svg.hpp"
#include "trendlink/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

using namespace trendlink;
namespace fs = std::filesystem;

namespace {

struct Options {
    pipeline::RunConfig run;
    std::string analysis_start = "2004-01-01";
    std::string analysis_end = "2019-08-31";
    std::vector<double> anchors = {0.1, 0.499, 0.9};
    bool no_plots = false;
    std::string corpus;
    std::string out;
    std::string correlations;
};

void finalize(Options& o) {
    o.run.analysis_start = Date::parse(o.analysis_start);
    o.run.analysis_end = Date::parse(o.analysis_end);
    if (o.anchors.size() != 3) throw InputError("--anchors takes three values: non-membership,crossover,membership");
    o.run.anchors = {o.anchors[0], o.anchors[1], o.anchors[2]};
    o.run.plots = !o.no_plots;
    o.run.corpus_dir = o.corpus;
    o.run.out_dir = o.out;
    o.run.validate();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    out << text;
}

void print_funnel(const pipeline::RunSummary& s) {
    for (const auto& f : s.funnel) fmt::print("{:<12}{}\n", f.stage, f.companies);
}

// Stages shared by the per-step subcommands.
struct Prepared {
    pipeline::Sample sample;
    pipeline::QualityStage quality;
    pipeline::PreprocessStage pre;
};

Prepared prepare(const Options& o) {
    Prepared p;
    p.sample = pipeline::ingest_stage(o.run);
    p.quality = pipeline::quality_stage(p.sample, o.run.quality_gate);
    p.pre = pipeline::preprocess_stage(p.sample, p.quality, o.run.filter);
    return p;
}

std::vector<pipeline::Exclusion> all_exclusions(const Prepared& p) {
    auto out = p.sample.exclusions;
    out.insert(out.end(), p.quality.exclusions.begin(), p.quality.exclusions.end());
    out.insert(out.end(), p.pre.exclusions.begin(), p.pre.exclusions.end());
    return out;
}

std::pair<WeeklySeries, WeeklySeries> read_series(const fs::path& path) {
    const auto table = csv::read(path);
    csv::require_header(table, {"week", "interest_norm", "valuation_norm"}, path.string());
    WeeklySeries interest{0, {}, SeriesKind::Normalized};
    WeeklySeries valuation{0, {}, SeriesKind::Normalized};
    auto push = [&](WeeklySeries& s, std::int64_t w, const std::string& field) {
        if (field.empty()) return;
        if (s.values.empty()) s.first_week = w;
        else if (w != s.last_week() + 1) throw InputError(fmt::format("{}: gap in series at week {}", path.string(), w));
        try {
            s.values.push_back(std::stod(field));
        } catch (const std::logic_error&) {
            throw InputError(fmt::format("{}: bad value '{}'", path.string(), field));
        }
    };
    for (const auto& row : table.rows) {
        const auto w = week_index(Date::parse(row.fields[0]));
        push(interest, w, row.fields[1]);
        push(valuation, w, row.fields[2]);
    }
    if (interest.values.empty() || valuation.values.empty())
        throw InputError(fmt::format("{}: series file lacks interest or valuation values", path.string()));
    return {interest, valuation};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-interest versus valuation analytics"};
    app.set_config("--config", "", "Key-value configuration file");
    app.fallthrough();
    app.require_subcommand(1);

    Options o;
    auto& r = o.run;
    app.add_option("--alpha-interest", r.filter.alpha_interest, "Smoothing coefficient for search interest")->capture_default_str();
    app.add_option("--alpha-valuation-raw", r.filter.alpha_valuation_raw, "Smoothing coefficient over raw rounds")->capture_default_str();
    app.add_option("--alpha-valuation-weekly", r.filter.alpha_valuation_weekly, "Smoothing coefficient over weekly valuation")->capture_default_str();
    app.add_option("--strong-tau", r.thresholds.strong_tau, "Tau threshold for a strong link")->capture_default_str();
    app.add_option("--min-improvement", r.thresholds.min_improvement, "Relative tau gain a lag shift must bring")->capture_default_str();
    app.add_option("--significance-alpha", r.thresholds.significance_alpha, "One-sided significance level")->capture_default_str();
    app.add_option("--near-zero-baseline", r.thresholds.near_zero_baseline, "Unshifted tau at or below which any gain counts")->capture_default_str();
    app.add_option("--quality-gate", r.quality_gate, "Drop companies with bad search-interest quality")->capture_default_str();
    app.add_option("--analysis-start", o.analysis_start, "Earliest founding date")->capture_default_str();
    app.add_option("--analysis-end", o.analysis_end, "Latest founding date")->capture_default_str();
    app.add_option("--min-rounds", r.min_rounds, "Minimum valuation rounds per company")->capture_default_str();
    app.add_option("--cons-suff", r.qca.sufficiency.consistency, "Truth-table consistency threshold")->capture_default_str();
    app.add_option("--freq", r.qca.sufficiency.frequency, "Truth-table frequency threshold")->capture_default_str();
    app.add_option("--cons-nec", r.qca.necessity.consistency, "Necessity consistency threshold")->capture_default_str();
    app.add_option("--ron", r.qca.necessity.relevance, "Relevance-of-necessity threshold")->capture_default_str();
    app.add_option("--anchors", o.anchors, "Calibration anchors: non-membership,crossover,membership")
        ->delimiter(',')
        ->expected(3);
    app.add_option("--histogram-width", r.histogram_width, "Tau histogram bin width")->capture_default_str();
    app.add_flag("--no-plots", o.no_plots, "Skip SVG output");
    app.add_flag("--reproducible", r.reproducible, "Omit timestamps from SVG output");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with known groups and lags");
    synth::CorpusConfig sc;
    std::vector<double> mix = {0.67, 0.16, 0.17};
    std::string synth_out;
    synth_cmd->add_option("--out", synth_out, "Output corpus directory")->required();
    synth_cmd->add_option("--seed", sc.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--count", sc.venture_count, "Number of ventures")->capture_default_str();
    synth_cmd->add_option("--noise", sc.noise_sigma, "Noise sigma as a fraction of the latent range")->capture_default_str();
    synth_cmd->add_option("--mix", mix, "G1,G2,G3 shares")->delimiter(',')->expected(3);
    synth_cmd->add_option("--poor-quality", sc.poor_quality_count, "Ventures built to fail the quality gate")->capture_default_str();
    synth_cmd->add_option("--short-rounds", sc.short_round_count, "Ventures with only five rounds")->capture_default_str();
    synth_cmd->add_option("--unicorn-share", sc.unicorn_share, "Share of unicorn-scale ventures")->capture_default_str();
    synth_cmd->add_option("--min-weeks", sc.min_weeks, "Shortest interest history")->capture_default_str();
    synth_cmd->add_option("--max-weeks", sc.max_weeks, "Longest interest history")->capture_default_str();

    auto* validate_cmd = app.add_subcommand("validate", "Check a corpus and report sampling exclusions");
    auto* quality_cmd = app.add_subcommand("score-quality", "Score search-interest quality (quality.csv)");
    auto* preprocess_cmd = app.add_subcommand("preprocess", "Write normalized series and the stitch report");
    auto* correlate_cmd = app.add_subcommand("correlate", "Write correlations.csv");
    auto* portfolio_cmd = app.add_subcommand("portfolio-report", "Group, dimension, industry and growth reports");
    auto* fsqca_cmd = app.add_subcommand("fsqca", "Necessity, truth table and minimized solutions");
    auto* plot_cmd = app.add_subcommand("plot", "Render one overlay chart or the tau histogram");
    auto* run_cmd = app.add_subcommand("run", "Full pipeline with manifest");

    for (auto* cmd : {validate_cmd, quality_cmd, preprocess_cmd, correlate_cmd, portfolio_cmd, fsqca_cmd, run_cmd})
        cmd->add_option("--corpus", o.corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    for (auto* cmd : {quality_cmd, preprocess_cmd, correlate_cmd, portfolio_cmd, fsqca_cmd, run_cmd})
        cmd->add_option("--out", o.out, "Output directory")->required();
    for (auto* cmd : {portfolio_cmd, fsqca_cmd})
        cmd->add_option("--correlations", o.correlations, "correlations.csv from the correlate step")
            ->required()
            ->check(CLI::ExistingFile);

    std::string plot_target;
    std::string plot_series;
    std::string plot_out;
    plot_cmd->add_option("target", plot_target, "Company id, or 'histogram'")->required();
    plot_cmd->add_option("--correlations", o.correlations, "correlations.csv")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--series", plot_series, "Directory of per-company series files");
    plot_cmd->add_option("--out", plot_out, "SVG file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth_cmd->parsed()) {
            sc.group_mix = {mix[0], mix[1], mix[2]};
            sc.analysis_end = Date::parse(o.analysis_end);
            const auto corpus = synth::generate_corpus(sc);
            synth::write_synthetic_corpus(synth_out, corpus);
            fmt::print("wrote {} ventures to {}\n", corpus.truths.size(), synth_out);
            return 0;
        }
        finalize(o);

        if (validate_cmd->parsed()) {
            const auto s = pipeline::ingest_stage(r);
            fmt::print("companies   {}\nsampled     {}\nexcluded    {}\n", s.corpus.companies.size(), s.ids.size(),
                       s.exclusions.size());
            for (const auto& e : s.exclusions) fmt::print("  {}: {}\n", e.company_id, e.reason);
            for (const auto& w : s.warnings) fmt::print("warning {}: {}\n", w.company_id, w.message);
            return 0;
        }
        if (quality_cmd->parsed()) {
            const auto s = pipeline::ingest_stage(r);
            const auto q = pipeline::quality_stage(s, false);
            pipeline::write_quality(fs::path(o.out) / "quality.csv", q);
            std::size_t good = 0;
            for (const auto& [id, score] : q.scores) good += score.verdict == quality::Verdict::Good;
            fmt::print("scored {} companies, {} good\n", q.scores.size(), good);
            return 0;
        }
        if (preprocess_cmd->parsed()) {
            const auto p = prepare(o);
            for (const auto& [id, c] : p.pre.prepared) pipeline::write_series(fs::path(o.out) / "series", c);
            pipeline::write_stitch_report(fs::path(o.out) / "stitch_report.json", p.pre);
            pipeline::write_exclusions(fs::path(o.out) / "exclusions.csv", all_exclusions(p));
            fmt::print("preprocessed {} companies\n", p.pre.prepared.size());
            return 0;
        }
        if (correlate_cmd->parsed()) {
            const auto p = prepare(o);
            const auto c = pipeline::correlate_stage(p.pre, r.thresholds);
            write_correlations(fs::path(o.out) / "correlations.csv", c.results);
            auto excl = all_exclusions(p);
            excl.insert(excl.end(), c.exclusions.begin(), c.exclusions.end());
            pipeline::write_exclusions(fs::path(o.out) / "exclusions.csv", excl);
            fmt::print("correlated {} companies\n", c.results.size());
            return 0;
        }
        if (portfolio_cmd->parsed() || fsqca_cmd->parsed()) {
            const auto results = read_correlations(o.correlations);
            if (results.empty()) throw InputError("correlations file has no rows");
            const auto s = pipeline::ingest_stage(r);
            if (portfolio_cmd->parsed()) {
                auto files = pipeline::write_portfolio_reports(o.out, results, s.corpus, r);
                fmt::print("wrote {} report files\n", files.size());
            } else {
                auto files = pipeline::write_fsqca_reports(o.out, results, s.corpus, r);
                fmt::print("wrote {} fsQCA files\n", files.size());
            }
            return 0;
        }
        if (plot_cmd->parsed()) {
            const auto results = read_correlations(o.correlations);
            const svg::RenderOptions opt{r.reproducible};
            if (plot_target == "histogram") {
                write_file(plot_out, svg::histogram(portfolio::tau_histogram(results, r.histogram_width), opt));
            } else {
                const auto it = std::find_if(results.begin(), results.end(),
                                             [&](const CorrelationResult& c) { return c.company_id == plot_target; });
                if (it == results.end()) throw InputError(fmt::format("unknown company id '{}'", plot_target));
                if (plot_series.empty()) throw InputError("an overlay needs --series");
                const auto [interest, valuation] = read_series(fs::path(plot_series) / (plot_target + ".csv"));
                write_file(plot_out, svg::overlay(interest, valuation, *it, opt));
            }
            fmt::print("wrote {}\n", plot_out);
            return 0;
        }
        if (run_cmd->parsed()) {
            const auto s = pipeline::run_pipeline(r);
            print_funnel(s);
            return 0;
        }
    } catch (const InputError& e) {
        fmt::print(stderr, "input error: {}\n", e.what());
        return 1;
    } catch (const StageError& e) {
        fmt::print(stderr, "stage failure: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "stage failure: {}\n", e.what());
        return 2;
    }
    return 0;
}

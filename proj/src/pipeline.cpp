#include "trendlink/pipeline.hpp"

#include "trendlink/csv.hpp"
#include "trendlink/portfolio.hpp"
#include "trendlink/svg.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace trendlink::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    out << text;
    if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

std::string fixed4(double v) { return csv::format_fixed(v, 4); }

const CompanyRecord& company_of(const Corpus& corpus, const std::string& id) {
    for (const auto& c : corpus.companies)
        if (c.id == id) return c;
    throw InputError(fmt::format("no company record for '{}'", id));
}

json warnings_json(const Warnings& ws) {
    json out = json::array();
    for (const auto& w : ws) out.push_back({{"company_id", w.company_id}, {"message", w.message}});
    return out;
}

}  // namespace

void RunConfig::validate() const {
    filter.validate();
    thresholds.validate();
    anchors.validate();
    if (!(analysis_start < analysis_end)) throw InputError("analysis start must precede its end");
    if (min_rounds < 2) throw InputError(fmt::format("min-rounds must be at least 2, got {}", min_rounds));
    if (!(histogram_width > 0.0 && histogram_width <= 2.0))
        throw InputError("histogram width must lie in (0, 2]");
    for (double t : {qca.necessity.consistency, qca.necessity.relevance, qca.sufficiency.consistency})
        if (!(t >= 0.0 && t <= 1.0)) throw InputError("fsQCA thresholds must lie in [0, 1]");
    if (!corpus_dir.empty() && !fs::is_directory(corpus_dir))
        throw InputError(fmt::format("corpus directory {} does not exist", corpus_dir.string()));
}

Sample ingest_stage(const RunConfig& cfg) {
    Sample s;
    s.corpus = load_corpus(cfg.corpus_dir, cfg.analysis_end);
    s.warnings = check_founding_vs_rounds(s.corpus);

    std::set<std::string> known;
    for (const auto& c : s.corpus.companies) known.insert(c.id);
    for (const auto& [id, _] : s.corpus.valuations)
        if (!known.count(id)) s.warnings.push_back({id, "valuation rounds without a company record"});
    for (const auto& [id, _] : s.corpus.windows)
        if (!known.count(id)) s.warnings.push_back({id, "search-interest windows without a company record"});

    for (const auto& id : known) {
        const auto& c = company_of(s.corpus, id);
        auto exclude = [&](std::string why) { s.exclusions.push_back({id, "ingest", std::move(why)}); };
        const auto v = s.corpus.valuations.find(id);
        const std::size_t rounds = v == s.corpus.valuations.end() ? 0 : v->second.rounds.size();
        if (c.founded < cfg.analysis_start)
            exclude(fmt::format("founded {} before analysis start {}", c.founded.to_string(),
                                cfg.analysis_start.to_string()));
        else if (rounds < static_cast<std::size_t>(cfg.min_rounds))
            exclude(fmt::format("{} valuation rounds, need at least {}", rounds, cfg.min_rounds));
        else if (!s.corpus.windows.count(id) || s.corpus.windows.at(id).empty())
            exclude("no search-interest windows");
        else
            s.ids.push_back(id);
    }
    return s;
}

QualityStage quality_stage(const Sample& sample, bool gate) {
    QualityStage q;
    for (const auto& id : sample.ids) {
        auto exclude = [&](std::string why) { q.exclusions.push_back({id, "quality", std::move(why)}); };
        const auto& company = company_of(sample.corpus, id);
        StitchResult st;
        try {
            st = stitch_windows(sample.corpus.windows.at(id), q.warnings);
        } catch (const InputError& e) {
            exclude(fmt::format("stitching failed: {}", e.what()));
            continue;
        }
        // Scoring looks at interest from the founding week on.
        const auto& values = st.series.values;
        const auto skip = std::clamp<std::int64_t>(week_index(company.founded) - st.series.first_week, 0,
                                                   static_cast<std::int64_t>(values.size()));
        const std::span<const double> from_founding(values.data() + skip, values.size() - static_cast<std::size_t>(skip));
        const auto meta = sample.corpus.metadata.find(id);
        if (meta == sample.corpus.metadata.end() || meta->second.empty()) {
            if (gate) {
                exclude("no quality metadata");
                continue;
            }
        } else {
            if (from_founding.empty()) {
                exclude("no search interest after founding");
                continue;
            }
            try {
                q.scores[id] = quality::score_company(id, from_founding, meta->second, q.warnings);
            } catch (const InputError& e) {
                exclude(e.what());
                continue;
            }
            const auto& sc = q.scores[id];
            if (gate && sc.verdict == quality::Verdict::Bad) {
                exclude(fmt::format("quality {} below {} (brand {}, systematic {}, fast {}, related {})",
                                    fixed4(sc.total), quality::kGoodThreshold, sc.brand_category_points,
                                    sc.systematic_noise_points, sc.fast_noise_points,
                                    sc.related_query_points));
                continue;
            }
        }
        q.stitched.emplace(id, std::move(st));
        q.passed.push_back(id);
    }
    return q;
}

PreprocessStage preprocess_stage(const Sample& sample, const QualityStage& quality,
                                 const FilterConfig& filter) {
    PreprocessStage p;
    for (const auto& id : quality.passed) {
        try {
            p.prepared.emplace(id, prepare_company(company_of(sample.corpus, id), sample.corpus.valuations.at(id),
                                                   quality.stitched.at(id), filter));
        } catch (const InputError& e) {
            p.exclusions.push_back({id, "preprocess", e.what()});
        }
    }
    return p;
}

CorrelateStage correlate_stage(const PreprocessStage& pre, const ThresholdConfig& thresholds) {
    CorrelateStage c;
    for (const auto& [id, company] : pre.prepared) {
        const auto n = company.valuation.values.size();
        if (n <= kMinAlignedWeeks) {
            c.exclusions.push_back({id, "correlate", fmt::format("{} valuation weeks, need more than {}", n,
                                                                 kMinAlignedWeeks)});
            continue;
        }
        try {
            c.results.push_back(correlate_company(company, thresholds));
        } catch (const InputError& e) {
            c.exclusions.push_back({id, "correlate", e.what()});
        }
    }
    return c;
}

void write_quality(const fs::path& path, const QualityStage& q) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [id, s] : q.scores)
        rows.push_back({id, csv::format_fixed(s.brand_category_points), csv::format_fixed(s.systematic_noise_points),
                        csv::format_fixed(s.fast_noise_points), csv::format_fixed(s.related_query_points),
                        csv::format_fixed(s.total), quality::to_string(s.verdict),
                        csv::format_fixed(s.ratio_of_means), csv::format_fixed(s.overall_mean)});
    csv::write(path,
               {"company_id", "brand_pts", "sys_pts", "fast_pts", "rel_pts", "total", "verdict",
                "ratio_of_means", "overall_mean"},
               rows);
}

void write_series(const fs::path& dir, const PreparedCompany& c) {
    const auto lo = std::min(c.interest.first_week, c.valuation.first_week);
    const auto hi = std::max(c.interest.last_week(), c.valuation.last_week());
    auto at = [](const WeeklySeries& s, std::int64_t w) {
        if (w < s.first_week || w > s.last_week()) return std::string{};
        return csv::format_fixed(s.values[static_cast<std::size_t>(w - s.first_week)], 8);
    };
    std::vector<std::vector<std::string>> rows;
    for (auto w = lo; w <= hi; ++w) rows.push_back({week_start(w).to_string(), at(c.interest, w), at(c.valuation, w)});
    csv::write(dir / (c.company_id + ".csv"), {"week", "interest_norm", "valuation_norm"}, rows);
}

void write_stitch_report(const fs::path& path, const PreprocessStage& pre) {
    json root = json::object();
    for (const auto& [id, c] : pre.prepared) {
        json scales = json::array();
        for (double s : c.stitched.window_scales) scales.push_back(s);
        root[id] = {{"window_scales", scales},
                    {"final_scale", c.stitched.final_scale},
                    {"first_week", c.stitched.series.start_date().to_string()},
                    {"weeks", c.stitched.series.values.size()},
                    {"warnings", warnings_json(c.warnings)}};
    }
    write_text(path, root.dump(2) + "\n");
}

void write_exclusions(const fs::path& path, const std::vector<Exclusion>& rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto& e : rows) out.push_back({e.company_id, e.stage, e.reason});
    csv::write(path, {"company_id", "stage", "reason"}, out);
}

std::vector<std::string> write_portfolio_reports(const fs::path& out_dir,
                                                 const std::vector<CorrelationResult>& results,
                                                 const Corpus& corpus, const RunConfig& cfg) {
    std::vector<std::string> files;
    const auto features = portfolio::features_from(corpus);

    portfolio::write_group_report(out_dir / "report_groups.csv", portfolio::group_stats(results));
    files.push_back("report_groups.csv");

    std::vector<portfolio::GroupStats> dims;
    for (const auto& d : portfolio::standard_dimensions()) {
        auto rows = portfolio::dimension_stats(results, features, d);
        dims.insert(dims.end(), rows.begin(), rows.end());
    }
    portfolio::write_group_report(out_dir / "report_dimensions.csv", dims);
    files.push_back("report_dimensions.csv");

    std::map<portfolio::IndustryLevel, std::vector<portfolio::IndustryRow>> levels;
    for (auto lvl : {portfolio::IndustryLevel::Sector, portfolio::IndustryLevel::Industry,
                     portfolio::IndustryLevel::SubIndustry})
        levels[lvl] = portfolio::industry_rollup(results, corpus.companies, lvl);
    portfolio::write_industry_report(out_dir / "report_industry.csv", levels);
    files.push_back("report_industry.csv");

    std::map<std::string, portfolio::McapGr> mcaps;
    for (const auto& r : results) {
        try {
            mcaps.emplace(r.company_id,
                          portfolio::mcap_gr(corpus.valuations.at(r.company_id), company_of(corpus, r.company_id).founded));
        } catch (const InputError&) {
            // Degenerate growth intervals stay out of the rate tables.
        }
    }
    portfolio::write_mcap_report(out_dir / "mcapgr.csv", mcaps, results);
    portfolio::write_mcap_summary(out_dir / "mcapgr_summary.csv", portfolio::mcap_table(results, mcaps));
    files.push_back("mcapgr.csv");
    files.push_back("mcapgr_summary.csv");

    const auto hist = portfolio::tau_histogram(results, cfg.histogram_width);
    portfolio::write_histogram(out_dir / "tau_histogram.csv", hist);
    files.push_back("tau_histogram.csv");
    if (cfg.plots) {
        write_text(out_dir / "plots" / "tau_histogram.svg",
                   svg::histogram(hist, svg::RenderOptions{cfg.reproducible}));
        files.push_back("plots/tau_histogram.svg");
    }
    return files;
}

std::vector<std::string> write_fsqca_reports(const fs::path& out_dir,
                                             const std::vector<CorrelationResult>& results,
                                             const Corpus& corpus, const RunConfig& cfg) {
    const auto cases = fsqca::build_cases(results, portfolio::features_from(corpus), cfg.anchors);
    const auto [high, low] = fsqca::analyze_both_outcomes(cases, cfg.qca);
    const std::vector<const fsqca::OutcomeAnalysis*> both = {&high, &low};
    fsqca::write_necessity(out_dir / "qca_necessity.csv", both);
    fsqca::write_truth_table(out_dir / "qca_truthtable.csv", cases, both);
    write_text(out_dir / "qca_solution.txt", fsqca::render_solution_text(cases, both));
    write_text(out_dir / "qca_solution.json", fsqca::render_solution_json(cases, both));
    return {"qca_necessity.csv", "qca_truthtable.csv", "qca_solution.txt", "qca_solution.json"};
}

namespace {

json config_json(const RunConfig& cfg) {
    return {{"corpus", cfg.corpus_dir.generic_string()},
            {"alpha_interest", cfg.filter.alpha_interest},
            {"alpha_valuation_raw", cfg.filter.alpha_valuation_raw},
            {"alpha_valuation_weekly", cfg.filter.alpha_valuation_weekly},
            {"strong_tau", cfg.thresholds.strong_tau},
            {"min_improvement", cfg.thresholds.min_improvement},
            {"significance_alpha", cfg.thresholds.significance_alpha},
            {"near_zero_baseline", cfg.thresholds.near_zero_baseline},
            {"quality_gate", cfg.quality_gate},
            {"analysis_start", cfg.analysis_start.to_string()},
            {"analysis_end", cfg.analysis_end.to_string()},
            {"min_rounds", cfg.min_rounds},
            {"anchors", {cfg.anchors.full_non_membership, cfg.anchors.crossover, cfg.anchors.full_membership}},
            {"cons_nec", cfg.qca.necessity.consistency},
            {"ron", cfg.qca.necessity.relevance},
            {"cons_suff", cfg.qca.sufficiency.consistency},
            {"freq", cfg.qca.sufficiency.frequency},
            {"histogram_width", cfg.histogram_width},
            {"plots", cfg.plots}};
}

struct OutputRecord {
    std::string file;
    std::string stage;
    bool valid = false;
};

}  // namespace

RunSummary run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);

    RunSummary summary;
    Warnings warnings;
    std::vector<OutputRecord> outputs;
    std::vector<std::string> pending;
    std::string current;
    std::map<std::string, std::size_t> groups = {{"G1", 0}, {"G2", 0}, {"G3", 0}};

    auto write_manifest = [&](const std::string& status, const std::string& error) {
        json funnel = json::array();
        for (const auto& s : summary.funnel) funnel.push_back({{"stage", s.stage}, {"companies", s.companies}});
        json excl = json::object();
        for (const auto& e : summary.exclusions) excl[e.stage] = excl.value(e.stage, 0) + 1;
        json outs = json::array();
        for (const auto& o : outputs) outs.push_back({{"file", o.file}, {"stage", o.stage}, {"valid", o.valid}});
        json m = {{"status", status},
                  {"failed_stage", status == "ok" ? json(nullptr) : json(current)},
                  {"error", error.empty() ? json(nullptr) : json(error)},
                  {"config", config_json(cfg)},
                  {"funnel", funnel},
                  {"exclusions_by_stage", excl},
                  {"groups", groups},
                  {"outputs", outs},
                  {"warnings", warnings_json(warnings)}};
        write_text(cfg.out_dir / kManifest, m.dump(2) + "\n");
    };
    auto stage = [&](const std::string& name, auto&& body) {
        current = name;
        pending.clear();
        try {
            body();
        } catch (...) {
            for (const auto& f : pending) outputs.push_back({f, name, false});
            pending.clear();
            throw;
        }
        for (const auto& f : pending) outputs.push_back({f, name, true});
        pending.clear();
    };
    auto wrote = [&](std::string file) { pending.push_back(std::move(file)); };
    auto exclude = [&](const std::vector<Exclusion>& rows) {
        summary.exclusions.insert(summary.exclusions.end(), rows.begin(), rows.end());
    };

    try {
        Sample sample;
        QualityStage quality;
        PreprocessStage pre;
        CorrelateStage corr;
        stage("ingest", [&] {
            sample = ingest_stage(cfg);
            warnings.insert(warnings.end(), sample.warnings.begin(), sample.warnings.end());
            exclude(sample.exclusions);
            summary.funnel.push_back({"corpus", sample.corpus.companies.size()});
            summary.funnel.push_back({"ingest", sample.ids.size()});
        });
        stage("quality", [&] {
            quality = quality_stage(sample, cfg.quality_gate);
            warnings.insert(warnings.end(), quality.warnings.begin(), quality.warnings.end());
            exclude(quality.exclusions);
            write_quality(cfg.out_dir / "quality.csv", quality);
            wrote("quality.csv");
            summary.funnel.push_back({"quality", quality.passed.size()});
        });
        stage("preprocess", [&] {
            pre = preprocess_stage(sample, quality, cfg.filter);
            exclude(pre.exclusions);
            for (const auto& [id, c] : pre.prepared) {
                warnings.insert(warnings.end(), c.warnings.begin(), c.warnings.end());
                write_series(cfg.out_dir / "series", c);
                wrote("series/" + id + ".csv");
            }
            write_stitch_report(cfg.out_dir / "stitch_report.json", pre);
            wrote("stitch_report.json");
            summary.funnel.push_back({"preprocess", pre.prepared.size()});
        });
        stage("correlate", [&] {
            corr = correlate_stage(pre, cfg.thresholds);
            exclude(corr.exclusions);
            write_correlations(cfg.out_dir / "correlations.csv", corr.results);
            wrote("correlations.csv");
            for (const auto& r : corr.results) groups[to_string(r.group)] += 1;
            summary.results = corr.results;
            summary.funnel.push_back({"correlate", corr.results.size()});
        });
        std::sort(summary.exclusions.begin(), summary.exclusions.end(),
                  [](const Exclusion& a, const Exclusion& b) { return a.company_id < b.company_id; });
        stage("exclusions", [&] {
            write_exclusions(cfg.out_dir / "exclusions.csv", summary.exclusions);
            wrote("exclusions.csv");
        });
        stage("portfolio", [&] {
            if (corr.results.empty()) throw std::runtime_error("no company reached the correlation stage");
            for (auto& f : write_portfolio_reports(cfg.out_dir, corr.results, sample.corpus, cfg)) wrote(f);
            if (cfg.plots) {
                const svg::RenderOptions opt{cfg.reproducible};
                for (const auto& r : corr.results) {
                    const auto& c = pre.prepared.at(r.company_id);
                    const auto file = fmt::format("plots/overlay_{}.svg", r.company_id);
                    write_text(cfg.out_dir / file, svg::overlay(c.interest, c.valuation, r, opt));
                    wrote(file);
                }
            }
        });
        stage("fsqca", [&] {
            for (auto& f : write_fsqca_reports(cfg.out_dir, corr.results, sample.corpus, cfg)) wrote(f);
            summary.funnel.push_back({"fsqca", corr.results.size()});
        });
    } catch (const InputError& e) {
        write_manifest("failed", e.what());
        throw InputError(fmt::format("{}: {}", current, e.what()));
    } catch (const std::exception& e) {
        write_manifest("failed", e.what());
        throw StageError(current, e.what());
    }
    write_manifest("ok", "");
    return summary;
}

}  // namespace trendlink::pipeline

#include "trendlink/portfolio.hpp"

#include "trendlink/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace trendlink::portfolio {

namespace {

std::vector<double> taus_of(const std::vector<const CorrelationResult*>& rs) {
    std::vector<double> out;
    out.reserve(rs.size());
    for (const auto* r : rs) out.push_back(r->tau_best);
    return out;
}

std::vector<double> lags_of(const std::vector<const CorrelationResult*>& rs) {
    std::vector<double> out;
    out.reserve(rs.size());
    for (const auto* r : rs) out.push_back(static_cast<double>(r->lag_weeks));
    return out;
}

std::vector<const CorrelationResult*> in_group(const std::vector<const CorrelationResult*>& rs,
                                               Group g) {
    std::vector<const CorrelationResult*> out;
    for (const auto* r : rs)
        if (r->group == g) out.push_back(r);
    return out;
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string opt_fixed(const std::optional<double>& v, int decimals = 6) {
    return v ? csv::format_fixed(*v, decimals) : std::string{};
}

}  // namespace

McapGr mcap_gr(const ValuationSeries& rounds, Date founded) {
    if (rounds.rounds.empty())
        throw InputError(fmt::format("{}: MCAP-GR needs at least one round", rounds.company_id));
    const auto best = std::max_element(
        rounds.rounds.begin(), rounds.rounds.end(),
        // strict comparison keeps the earliest of equal maxima
        [](const ValuationRound& a, const ValuationRound& b) { return a.valuation < b.valuation; });
    McapGr m;
    m.company_id = rounds.company_id;
    m.max_valuation = best->valuation;
    m.date_of_max = best->date;
    const auto days = days_between(founded, best->date);
    if (days < 7)
        throw InputError(fmt::format("{}: degenerate growth interval ({} days from founding to "
                                     "maximum valuation)",
                                     rounds.company_id, days));
    m.years_to_max = static_cast<double>(days) / kDaysPerYear;
    m.rate = m.max_valuation / m.years_to_max;
    return m;
}

FeatureMap features_from(const Corpus& corpus) {
    FeatureMap out;
    for (const auto& c : corpus.companies) {
        Features f;
        f.is_b2c = c.is_b2c;
        f.is_platform = c.is_platform;
        if (const auto it = corpus.valuations.find(c.id); it != corpus.valuations.end())
            f.is_unicorn = it->second.is_unicorn;
        out.emplace(c.id, f);
    }
    return out;
}

std::vector<Dimension> standard_dimensions() {
    return {
        {"success", "unicorn", "non-unicorn", [](const Features& f) { return f.is_unicorn; }},
        {"customer type", "b2c", "b2b", [](const Features& f) { return f.is_b2c; }},
        {"product type", "digital platform", "traditional product",
         [](const Features& f) { return f.is_platform; }},
    };
}

std::vector<GroupStats> group_stats(const std::vector<CorrelationResult>& results) {
    if (results.empty()) throw InputError("group statistics need at least one result");
    std::vector<const CorrelationResult*> all;
    for (const auto& r : results) all.push_back(&r);
    const auto n = all.size();

    std::vector<GroupStats> rows;
    {
        GroupStats total;
        total.label = "Total sample";
        total.count = n;
        total.denominator = n;
        total.share_sample = 1.0;
        const auto taus = taus_of(all);
        total.tau = stats::summarize(taus);
        rows.push_back(total);
    }
    for (Group g : {Group::G1, Group::G2, Group::G3}) {
        const auto members = in_group(all, g);
        GroupStats row;
        row.label = to_string(g);
        row.count = members.size();
        row.denominator = n;
        row.share_sample = ratio(members.size(), n);
        const auto taus = taus_of(members);
        row.tau = stats::summarize(taus);
        rows.push_back(row);
    }
    const auto g2 = in_group(all, Group::G2);
    for (bool positive : {true, false}) {
        std::vector<const CorrelationResult*> members;
        for (const auto* r : g2)
            if (positive ? r->lag_weeks > 0 : r->lag_weeks < 0) members.push_back(r);
        GroupStats row;
        row.label = positive ? "Positive shift" : "Negative shift";
        row.count = members.size();
        row.denominator = g2.size();
        row.share_sample = ratio(members.size(), n);
        row.share_group = ratio(members.size(), g2.size());
        const auto taus = taus_of(members);
        const auto lags = lags_of(members);
        row.tau = stats::summarize(taus);
        row.lag = stats::summarize(lags);
        rows.push_back(row);
    }
    return rows;
}

std::vector<GroupStats> dimension_stats(const std::vector<CorrelationResult>& results,
                                        const FeatureMap& features, const Dimension& dimension) {
    if (results.empty()) throw InputError("dimension statistics need at least one result");
    std::vector<const CorrelationResult*> all;
    for (const auto& r : results) all.push_back(&r);
    const auto n = all.size();

    std::vector<GroupStats> rows;
    for (bool pole_value : {true, false}) {
        std::vector<const CorrelationResult*> pole;
        for (const auto* r : all) {
            const auto it = features.find(r->company_id);
            if (it == features.end())
                throw InputError(fmt::format("no company features for '{}'", r->company_id));
            if (dimension.predicate(it->second) == pole_value) pole.push_back(r);
        }
        const auto& pole_name = pole_value ? dimension.pole_true : dimension.pole_false;
        for (Group g : {Group::G1, Group::G2, Group::G3}) {
            const auto members = in_group(pole, g);
            const auto group_total = in_group(all, g).size();
            GroupStats row;
            row.dimension = dimension.name;
            row.pole = pole_name;
            row.label = to_string(g);
            row.count = members.size();
            row.denominator = pole.size();
            row.share_sample = ratio(members.size(), n);
            row.share_dimension = ratio(members.size(), pole.size());
            row.share_group = ratio(members.size(), group_total);
            const auto taus = taus_of(members);
            row.tau = stats::summarize(taus);
            rows.push_back(row);
            if (g == Group::G2) {
                GroupStats lag_row;
                lag_row.dimension = dimension.name;
                lag_row.pole = pole_name;
                lag_row.label = "Lag";
                lag_row.count = members.size();
                lag_row.denominator = pole.size();
                lag_row.share_sample = row.share_sample;
                const auto lags = lags_of(members);
                lag_row.lag = stats::summarize(lags);
                rows.push_back(lag_row);
            }
        }
    }
    return rows;
}

IndustryLevel parse_industry_level(const std::string& s) {
    if (s == "sector") return IndustryLevel::Sector;
    if (s == "industry") return IndustryLevel::Industry;
    if (s == "sub_industry") return IndustryLevel::SubIndustry;
    throw InputError(fmt::format("unknown industry level '{}'", s));
}

std::string to_string(IndustryLevel level) {
    switch (level) {
        case IndustryLevel::Sector: return "sector";
        case IndustryLevel::Industry: return "industry";
        case IndustryLevel::SubIndustry: return "sub_industry";
    }
    return "sector";
}

std::vector<IndustryRow> industry_rollup(const std::vector<CorrelationResult>& results,
                                         const std::vector<CompanyRecord>& companies,
                                         IndustryLevel level) {
    std::map<std::string, const CompanyRecord*> by_id;
    for (const auto& c : companies) by_id.emplace(c.id, &c);

    std::map<std::string, IndustryRow> rows;
    for (const auto& r : results) {
        std::string tag;
        if (const auto it = by_id.find(r.company_id); it != by_id.end()) {
            const auto& c = *it->second;
            tag = level == IndustryLevel::Sector     ? c.sector
                  : level == IndustryLevel::Industry ? c.industry
                                                     : c.sub_industry;
        }
        if (tag.empty()) tag = kUntagged;
        auto& row = rows[tag];
        row.tag = tag;
        ++row.total;
        if (r.group == Group::G1 || r.group == Group::G2) ++row.high;
    }
    std::vector<IndustryRow> out;
    for (auto& [tag, row] : rows) {
        row.share = ratio(row.high, row.total);
        out.push_back(row);
    }
    std::stable_sort(out.begin(), out.end(), [](const IndustryRow& a, const IndustryRow& b) {
        return a.total > b.total;
    });
    return out;
}

Histogram tau_histogram(const std::vector<CorrelationResult>& results, double width) {
    if (!(width > 0.0)) throw InputError("histogram bin width must be positive");
    Histogram h;
    h.width = width;
    const auto bins = static_cast<std::size_t>(std::ceil(2.0 / width - 1e-9));
    h.counts.assign(bins, 0);
    for (std::size_t i = 0; i < bins; ++i) h.lower_edges.push_back(-1.0 + width * static_cast<double>(i));
    for (const auto& r : results) {
        const double pos = (std::clamp(r.tau_best, -1.0, 1.0) + 1.0) / width + 1e-9;
        auto idx = static_cast<std::size_t>(std::floor(pos));
        h.counts[std::min(idx, bins - 1)] += 1;
    }
    return h;
}

std::vector<McapRow> mcap_table(const std::vector<CorrelationResult>& results,
                                const std::map<std::string, McapGr>& mcaps) {
    auto rates_for = [&](std::optional<Group> g) {
        std::vector<double> out;
        for (const auto& r : results) {
            if (g && r.group != *g) continue;
            if (const auto it = mcaps.find(r.company_id); it != mcaps.end())
                out.push_back(it->second.rate);
        }
        return out;
    };
    std::vector<McapRow> rows;
    const auto sample_rates = rates_for(std::nullopt);
    const auto sample = stats::summarize(sample_rates);
    rows.push_back({"SAMPLE", sample, std::nullopt});
    for (Group g : {Group::G1, Group::G2, Group::G3}) {
        McapRow row;
        row.label = to_string(g);
        const auto rates = rates_for(g);
        row.rate = stats::summarize(rates);
        if (row.rate && sample) {
            const auto dev = [](double v, double base) {
                return base == 0.0 ? 0.0 : (v - base) / base;
            };
            row.deviation = std::array<double, 4>{dev(row.rate->mean, sample->mean),
                                                  dev(row.rate->p25, sample->p25),
                                                  dev(row.rate->median, sample->median),
                                                  dev(row.rate->p75, sample->p75)};
        }
        rows.push_back(row);
    }
    return rows;
}

void write_group_report(const std::filesystem::path& path, const std::vector<GroupStats>& rows) {
    const std::vector<std::string> header = {
        "dimension",     "pole",        "label",       "count",     "denominator",
        "share_sample",  "share_dimension", "share_group", "tau_mean", "tau_p25",
        "tau_median",    "tau_p75",     "lag_mean",    "lag_p25",   "lag_median",
        "lag_p75"};
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        std::vector<std::string> f = {r.dimension,
                                      r.pole,
                                      r.label,
                                      std::to_string(r.count),
                                      std::to_string(r.denominator),
                                      csv::format_fixed(r.share_sample),
                                      opt_fixed(r.share_dimension),
                                      opt_fixed(r.share_group)};
        for (const auto& s : {r.tau, r.lag}) {
            if (s) {
                f.push_back(csv::format_fixed(s->mean));
                f.push_back(csv::format_fixed(s->p25));
                f.push_back(csv::format_fixed(s->median));
                f.push_back(csv::format_fixed(s->p75));
            } else {
                f.insert(f.end(), 4, std::string{});
            }
        }
        out.push_back(std::move(f));
    }
    csv::write(path, header, out);
}

void write_industry_report(const std::filesystem::path& path,
                           const std::map<IndustryLevel, std::vector<IndustryRow>>& levels) {
    std::vector<std::vector<std::string>> out;
    for (const auto& [level, rows] : levels)
        for (const auto& r : rows)
            out.push_back({to_string(level), r.tag, std::to_string(r.high),
                           std::to_string(r.total), csv::format_fixed(r.share)});
    csv::write(path, {"level", "tag", "high_correlation", "total", "share"}, out);
}

void write_mcap_report(const std::filesystem::path& path, const std::map<std::string, McapGr>& mcaps,
                       const std::vector<CorrelationResult>& results) {
    std::map<std::string, Group> groups;
    for (const auto& r : results) groups.emplace(r.company_id, r.group);
    std::vector<std::vector<std::string>> out;
    for (const auto& [id, m] : mcaps) {
        const auto g = groups.find(id);
        out.push_back({id, g == groups.end() ? std::string{} : to_string(g->second),
                       csv::format_fixed(m.max_valuation), m.date_of_max.to_string(),
                       csv::format_fixed(m.years_to_max), csv::format_fixed(m.rate)});
    }
    csv::write(path,
               {"company_id", "group", "max_valuation_musd", "date_of_max", "years_to_max",
                "rate_musd_per_year"},
               out);
}

void write_mcap_summary(const std::filesystem::path& path, const std::vector<McapRow>& rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        std::vector<std::string> f = {r.label, std::to_string(r.rate ? r.rate->count : 0)};
        const std::array<std::optional<double>, 4> vals =
            r.rate ? std::array<std::optional<double>, 4>{r.rate->mean, r.rate->p25,
                                                           r.rate->median, r.rate->p75}
                   : std::array<std::optional<double>, 4>{};
        for (std::size_t i = 0; i < 4; ++i) {
            f.push_back(opt_fixed(vals[i]));
            f.push_back(r.deviation ? csv::format_fixed((*r.deviation)[i]) : std::string{});
        }
        out.push_back(std::move(f));
    }
    csv::write(path,
               {"label", "count", "mean", "mean_dev", "p25", "p25_dev", "median", "median_dev",
                "p75", "p75_dev"},
               out);
}

void write_histogram(const std::filesystem::path& path, const Histogram& h) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out.push_back({csv::format_fixed(h.lower_edges[i]),
                       csv::format_fixed(std::min(1.0, h.lower_edges[i] + h.width)),
                       std::to_string(h.counts[i])});
    csv::write(path, {"bin_lower", "bin_upper", "count"}, out);
}

}  // namespace trendlink::portfolio

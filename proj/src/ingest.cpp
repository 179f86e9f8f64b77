#include "trendlink/ingest.hpp"

#include "trendlink/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace trendlink {

namespace {

const std::vector<std::string> kCompaniesHeader = {
    "id", "name", "founded", "is_b2c", "is_platform", "sector", "industry", "sub_industry"};
const std::vector<std::string> kValuationsHeader = {"company_id", "date", "valuation_musd"};
const std::vector<std::string> kMetadataHeader = {"company_id", "brand_unique", "category_group",
                                                  "related_query_count"};
const std::vector<std::string> kWindowHeader = {"week", "value"};

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw InputError(fmt::format("{}:{}: {}", source, line, what));
}

bool parse_bool(const std::string& token, const std::string& source, std::size_t line) {
    if (token == "true") return true;
    if (token == "false") return false;
    fail(source, line, fmt::format("unknown boolean token '{}'", token));
}

double parse_double(const std::string& token, const std::string& source, std::size_t line) {
    double v = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc{} || ptr != end || token.empty())
        fail(source, line, fmt::format("malformed number '{}'", token));
    return v;
}

int parse_int(const std::string& token, const std::string& source, std::size_t line) {
    int v = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc{} || ptr != end || token.empty())
        fail(source, line, fmt::format("malformed integer '{}'", token));
    return v;
}

template <class F>
auto at_row(const std::string& source, std::size_t line, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError& e) {
        fail(source, line, e.what());
    }
}

}  // namespace

std::string to_string(CategoryGroup g) { return g == CategoryGroup::A ? "A" : "B"; }

Date resolve_founding_date(std::string_view raw) {
    if (raw.size() == 4 && std::all_of(raw.begin(), raw.end(), [](char c) {
            return c >= '0' && c <= '9';
        })) {
        const int year = (raw[0] - '0') * 1000 + (raw[1] - '0') * 100 + (raw[2] - '0') * 10 +
                         (raw[3] - '0');
        return Date(year, 1, 1);
    }
    return Date::parse(raw);
}

bool derive_unicorn(std::span<const ValuationRound> rounds) {
    if (rounds.empty()) throw InputError("derive_unicorn: no valuation rounds");
    return std::any_of(rounds.begin(), rounds.end(),
                       [](const ValuationRound& r) { return r.valuation >= kUnicornThreshold; });
}

std::vector<CompanyRecord> parse_companies(const std::filesystem::path& path, Date analysis_end) {
    const auto source = path.string();
    const auto table = csv::read(path);
    csv::require_header(table, kCompaniesHeader, source);

    std::vector<CompanyRecord> out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        CompanyRecord rec;
        rec.id = f[0];
        if (rec.id.empty()) fail(source, row.line, "empty id");
        if (!seen.insert(rec.id).second)
            fail(source, row.line, fmt::format("duplicate id '{}'", rec.id));
        rec.name = f[1];
        rec.founded = at_row(source, row.line, [&] { return resolve_founding_date(f[2]); });
        if (rec.founded > analysis_end)
            fail(source, row.line,
                 fmt::format("founded after analysis end ({} > {})", rec.founded.to_string(),
                             analysis_end.to_string()));
        rec.is_b2c = parse_bool(f[3], source, row.line);
        rec.is_platform = parse_bool(f[4], source, row.line);
        rec.sector = f[5];
        rec.industry = f[6];
        rec.sub_industry = f[7];
        out.push_back(std::move(rec));
    }
    return out;
}

std::map<std::string, ValuationSeries> parse_valuations(const std::filesystem::path& path) {
    const auto source = path.string();
    const auto table = csv::read(path);
    csv::require_header(table, kValuationsHeader, source);

    std::map<std::string, ValuationSeries> out;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        ValuationRound r;
        r.company_id = f[0];
        r.date = at_row(source, row.line, [&] { return Date::parse(f[1]); });
        r.valuation = parse_double(f[2], source, row.line);
        if (!(r.valuation > 0.0))
            fail(source, row.line, fmt::format("nonpositive valuation '{}'", f[2]));
        auto& series = out[r.company_id];
        series.company_id = r.company_id;
        if (std::any_of(series.rounds.begin(), series.rounds.end(),
                        [&](const ValuationRound& x) { return x.date == r.date; }))
            fail(source, row.line,
                 fmt::format("duplicate round for '{}' on {}", r.company_id, r.date.to_string()));
        series.rounds.push_back(std::move(r));
    }
    for (auto& [id, series] : out) {
        std::sort(series.rounds.begin(), series.rounds.end(),
                  [](const ValuationRound& a, const ValuationRound& b) { return a.date < b.date; });
        series.is_unicorn = derive_unicorn(series.rounds);
    }
    return out;
}

std::map<std::string, std::vector<GtMetadata>> parse_metadata(const std::filesystem::path& path) {
    const auto source = path.string();
    const auto table = csv::read(path);
    csv::require_header(table, kMetadataHeader, source);

    std::map<std::string, std::vector<GtMetadata>> out;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        GtMetadata m;
        m.company_id = f[0];
        m.brand_unique = parse_bool(f[1], source, row.line);
        if (f[2] == "A")
            m.category_group = CategoryGroup::A;
        else if (f[2] == "B")
            m.category_group = CategoryGroup::B;
        else
            fail(source, row.line, fmt::format("category_group must be A or B, got '{}'", f[2]));
        m.related_query_count = parse_int(f[3], source, row.line);
        if (m.related_query_count < 0) fail(source, row.line, "negative related_query_count");
        out[m.company_id].push_back(std::move(m));
    }
    return out;
}

GtWindow parse_gt_export(std::istream& in, const std::string& source, std::string company_id,
                         int index) {
    const auto table = csv::parse(in, source);
    csv::require_header(table, kWindowHeader, source);

    GtWindow w;
    w.company_id = std::move(company_id);
    w.index = index;
    if (table.rows.size() > kMaxWindowPoints)
        throw InputError(fmt::format("{}: window exceeds {} points ({})", source, kMaxWindowPoints,
                                     table.rows.size()));
    for (const auto& row : table.rows) {
        GtPoint p;
        p.week = at_row(source, row.line, [&] { return Date::parse(row.fields[0]); });
        if (row.fields[1] == "<1") {
            p.value = 0;
            p.sub_unit = true;
        } else {
            p.value = parse_int(row.fields[1], source, row.line);
            if (p.value < 0 || p.value > 100)
                fail(source, row.line, fmt::format("value out of range: {}", p.value));
        }
        if (!w.points.empty() && days_between(w.points.back().week, p.week) != 7)
            fail(source, row.line,
                 fmt::format("non-weekly spacing ({} -> {})", w.points.back().week.to_string(),
                             p.week.to_string()));
        w.points.push_back(p);
    }
    if (w.points.empty()) throw InputError(fmt::format("{}: empty window", source));
    w.fragment = std::none_of(w.points.begin(), w.points.end(),
                              [](const GtPoint& p) { return p.value == 100; });
    return w;
}

std::optional<std::pair<std::string, int>> parse_window_filename(const std::string& filename) {
    constexpr std::string_view ext = ".csv";
    if (filename.size() <= ext.size() || filename.substr(filename.size() - ext.size()) != ext)
        return std::nullopt;
    const auto stem = filename.substr(0, filename.size() - ext.size());
    const auto dot = stem.rfind(".w");
    if (dot == std::string::npos || dot == 0 || dot + 2 >= stem.size()) return std::nullopt;
    const auto digits = stem.substr(dot + 2);
    int index = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return std::make_pair(stem.substr(0, dot), index);
}

GtWindow parse_gt_export(const std::filesystem::path& path) {
    const auto name = parse_window_filename(path.filename().string());
    if (!name)
        throw InputError(fmt::format("{}: window file must be named <company_id>.w<index>.csv",
                                     path.string()));
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
    return parse_gt_export(in, path.string(), name->first, name->second);
}

Corpus load_corpus(const std::filesystem::path& dir, Date analysis_end) {
    namespace fs = std::filesystem;
    Corpus c;
    c.companies = parse_companies(dir / corpus_files::kCompanies, analysis_end);
    c.valuations = parse_valuations(dir / corpus_files::kValuations);
    if (fs::exists(dir / corpus_files::kMetadata))
        c.metadata = parse_metadata(dir / corpus_files::kMetadata);

    const auto gt_dir = dir / corpus_files::kWindowsDir;
    if (fs::is_directory(gt_dir)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(gt_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto w = parse_gt_export(f);
            c.windows[w.company_id].push_back(std::move(w));
        }
        for (auto& [id, ws] : c.windows) {
            std::sort(ws.begin(), ws.end(),
                      [](const GtWindow& a, const GtWindow& b) { return a.index < b.index; });
            for (std::size_t i = 1; i < ws.size(); ++i)
                if (ws[i].index == ws[i - 1].index)
                    throw InputError(fmt::format("duplicate window index {} for '{}'",
                                                 ws[i].index, id));
        }
    }
    return c;
}

void write_companies(const std::filesystem::path& path, const std::vector<CompanyRecord>& rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows)
        out.push_back({r.id, r.name, r.founded.to_string(), r.is_b2c ? "true" : "false",
                       r.is_platform ? "true" : "false", r.sector, r.industry, r.sub_industry});
    csv::write(path, kCompaniesHeader, out);
}

void write_valuations(const std::filesystem::path& path,
                      const std::map<std::string, ValuationSeries>& series) {
    std::vector<std::vector<std::string>> out;
    for (const auto& [id, s] : series)
        for (const auto& r : s.rounds)
            out.push_back({r.company_id, r.date.to_string(), csv::format_exact(r.valuation)});
    csv::write(path, kValuationsHeader, out);
}

void write_metadata(const std::filesystem::path& path,
                    const std::map<std::string, std::vector<GtMetadata>>& metadata) {
    std::vector<std::vector<std::string>> out;
    for (const auto& [id, variants] : metadata)
        for (const auto& m : variants)
            out.push_back({m.company_id, m.brand_unique ? "true" : "false",
                           to_string(m.category_group), std::to_string(m.related_query_count)});
    csv::write(path, kMetadataHeader, out);
}

void write_gt_window(const std::filesystem::path& path, const GtWindow& window) {
    std::vector<std::vector<std::string>> out;
    for (const auto& p : window.points)
        out.push_back({p.week.to_string(), p.sub_unit ? "<1" : std::to_string(p.value)});
    csv::write(path, kWindowHeader, out);
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
    write_companies(dir / corpus_files::kCompanies, corpus.companies);
    write_valuations(dir / corpus_files::kValuations, corpus.valuations);
    write_metadata(dir / corpus_files::kMetadata, corpus.metadata);
    const auto gt_dir = dir / corpus_files::kWindowsDir;
    std::filesystem::create_directories(gt_dir);
    for (const auto& [id, ws] : corpus.windows)
        for (const auto& w : ws)
            write_gt_window(gt_dir / fmt::format("{}.w{}.csv", id, w.index), w);
}

Warnings check_founding_vs_rounds(const Corpus& corpus) {
    Warnings out;
    for (const auto& c : corpus.companies) {
        const auto it = corpus.valuations.find(c.id);
        if (it == corpus.valuations.end() || it->second.rounds.empty()) continue;
        const auto& first = it->second.rounds.front();
        if (first.date < c.founded)
            out.push_back({c.id, fmt::format("founded {} after valuation round {}",
                                              c.founded.to_string(), first.date.to_string())});
    }
    return out;
}

}  // namespace trendlink

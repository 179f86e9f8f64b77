#include "trendlink/csv.hpp"

#include "trendlink/core.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>

namespace trendlink::csv {

namespace {

std::vector<std::string> split_line(const std::string& line, const std::string& source,
                                    std::size_t lineno) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw InputError(fmt::format("{}:{}: unterminated quote", source, lineno));
    out.push_back(std::move(field));
    return out;
}

}  // namespace

Table parse(std::istream& in, const std::string& source_name) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, source_name, lineno);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size())
            throw InputError(fmt::format("{}:{}: expected {} fields, got {}", source_name, lineno,
                                         t.header.size(), fields.size()));
        t.rows.push_back(Row{lineno, std::move(fields)});
    }
    if (!have_header) throw InputError(fmt::format("{}: empty file", source_name));
    return t;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
    return parse(in, path.string());
}

void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& source_name) {
    if (table.header != expected)
        throw InputError(fmt::format("{}: header must be '{}', got '{}'", source_name,
                                     fmt::join(expected, ","), fmt::join(table.header, ",")));
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape(fields[i]);
    }
    return out;
}

std::string format_exact(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    return fmt::format("{}", value);
}

std::string format_fixed(double value, int decimals) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    // Avoid "-0.000000" so reruns diff cleanly.
    if (std::fabs(value) < 0.5 * std::pow(10.0, -decimals)) value = 0.0;
    return fmt::format("{:.{}f}", value, decimals);
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    out << join(header) << '\n';
    for (const auto& r : rows) out << join(r) << '\n';
}

}  // namespace trendlink::csv

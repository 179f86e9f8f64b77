#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace trendlink::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

/// Reads RFC-4180-style CSV (quoted fields, doubled quotes). Blank lines are
/// skipped. Throws InputError when the file cannot be opened or a row has the
/// wrong field count.
Table read(const std::filesystem::path& path);
Table parse(std::istream& in, const std::string& source_name);

/// Throws InputError unless the header equals `expected` exactly.
void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& source_name);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Shortest decimal that round-trips to the same double.
std::string format_exact(double value);
/// Fixed six-decimal rendering used by report tables; "inf"/"nan" pass through.
std::string format_fixed(double value, int decimals = 6);

/// Writes header + rows, creating parent directories.
void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

}  // namespace trendlink::csv

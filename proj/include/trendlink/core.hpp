#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trendlink {

/// Bad or inconsistent input data. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pipeline stage could not complete. Maps to CLI exit code 2.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Non-fatal diagnostic attached to a company (empty id = corpus-level).
struct Warning {
    std::string company_id;
    std::string message;
    bool operator==(const Warning&) const = default;
};

using Warnings = std::vector<Warning>;

/// Calendar date at day precision.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    Date(int y, unsigned m, unsigned d);

    /// Strict `YYYY-MM-DD`. Throws InputError.
    static Date parse(std::string_view text);

    std::chrono::sys_days sys_days() const { return days_; }
    std::int64_t days_since_epoch() const { return days_.time_since_epoch().count(); }
    int year() const;
    std::string to_string() const;

    Date plus_days(std::int64_t n) const { return Date(days_ + std::chrono::days(n)); }

    auto operator<=>(const Date&) const = default;
    bool operator==(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

std::int64_t days_between(Date from, Date to);

/// Global Sunday-anchored week number; week-start dates of search-interest
/// exports map to distinct consecutive integers.
std::int64_t week_index(Date d);

/// Sunday that starts week `w`.
Date week_start(std::int64_t w);

}  // namespace trendlink

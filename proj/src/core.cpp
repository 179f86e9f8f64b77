#include "trendlink/core.hpp"

#include <fmt/format.h>

#include <cctype>

namespace trendlink {

namespace {

// 1970-01-04 was the first Sunday after the epoch.
constexpr std::int64_t kSundayOffset = 3;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) throw InputError(fmt::format("invalid date {:04}-{:02}-{:02}", y, m, d));
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    auto digits = [&](std::size_t from, std::size_t n) {
        int v = 0;
        for (std::size_t i = from; i < from + n; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw InputError(fmt::format("malformed date '{}'", text));
            v = v * 10 + (text[i] - '0');
        }
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw InputError(fmt::format("malformed date '{}'", text));
    const int y = digits(0, 4);
    const int m = digits(5, 2);
    const int d = digits(8, 2);
    std::chrono::year_month_day ymd{std::chrono::year{y},
                                    std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw InputError(fmt::format("malformed date '{}'", text));
    return Date(std::chrono::sys_days{ymd});
}

int Date::year() const {
    return static_cast<int>(std::chrono::year_month_day{days_}.year());
}

std::string Date::to_string() const {
    const std::chrono::year_month_day ymd{days_};
    return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::int64_t days_between(Date from, Date to) {
    return to.days_since_epoch() - from.days_since_epoch();
}

std::int64_t week_index(Date d) { return floor_div(d.days_since_epoch() - kSundayOffset, 7); }

Date week_start(std::int64_t w) {
    return Date(std::chrono::sys_days{std::chrono::days{w * 7 + kSundayOffset}});
}

}  // namespace trendlink

#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace hrp {

/// Calendar date parsed from and printed as `YYYY-MM-DD`. Dates are opaque
/// ordered labels; no exchange calendar is attached.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {}

    /// Throws ParseError unless `text` is a valid ISO-8601 calendar date.
    static Date parse(std::string_view text);

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::chrono::year_month_day ymd() const { return ymd_; }
    [[nodiscard]] std::chrono::sys_days days() const { return std::chrono::sys_days{ymd_}; }

    friend bool operator==(const Date&, const Date&) = default;
    friend auto operator<=>(const Date& a, const Date& b) { return a.days() <=> b.days(); }

private:
    std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1}, std::chrono::day{1}};
};

}  // namespace hrp

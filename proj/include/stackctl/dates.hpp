#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace stackctl {

// All dates are UTC calendar dates; all timestamps are UTC with minute
// precision. There is no ambient clock anywhere in the library: "today"
// is always an explicit argument.
using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

Date make_date(int year, unsigned month, unsigned day);

// "YYYY-MM-DD"; rejects anything else.
Date parse_date(std::string_view s);
std::string format_date(const Date& d);

// "YYYY-MM-DD", "YYYY-MM-DDTHH:MM" or "YYYY-MM-DDTHH:MMZ"; a bare date
// means midnight.
Timestamp parse_timestamp(std::string_view s);
std::string format_timestamp(const Timestamp& t);

Timestamp midnight(const Date& d);
Date date_of(const Timestamp& t);

inline bool is_monday(const Date& d) {
    return std::chrono::weekday(std::chrono::sys_days(d)) == std::chrono::Monday;
}

inline bool is_first_of_month(const Date& d) { return d.day() == std::chrono::day(1); }

}  // namespace stackctl

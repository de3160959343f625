#include "stackctl/dates.hpp"

#include <cctype>
#include <cstdio>

#include "stackctl/errors.hpp"

namespace stackctl {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

unsigned to_unsigned(std::string_view s) {
    unsigned v = 0;
    for (char c : s)
        v = v * 10 + static_cast<unsigned>(c - '0');
    return v;
}

}  // namespace

Date make_date(int year, unsigned month, unsigned day) {
    Date d{std::chrono::year(year), std::chrono::month(month), std::chrono::day(day)};
    if (!d.ok())
        throw_syntax("invalid calendar date");
    return d;
}

Date parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !all_digits(s.substr(0, 4)) ||
        !all_digits(s.substr(5, 2)) || !all_digits(s.substr(8, 2)))
        throw_syntax("malformed date '" + std::string(s) + "' (expected YYYY-MM-DD)");
    Date d{std::chrono::year(static_cast<int>(to_unsigned(s.substr(0, 4)))),
           std::chrono::month(to_unsigned(s.substr(5, 2))), std::chrono::day(to_unsigned(s.substr(8, 2)))};
    if (!d.ok())
        throw_syntax("invalid calendar date '" + std::string(s) + "'");
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Timestamp parse_timestamp(std::string_view s) {
    if (s.size() == 10)
        return midnight(parse_date(s));
    std::string_view rest = s;
    if (!rest.empty() && rest.back() == 'Z')
        rest.remove_suffix(1);
    if (rest.size() != 16 || rest[10] != 'T' || rest[13] != ':' || !all_digits(rest.substr(11, 2)) ||
        !all_digits(rest.substr(14, 2)))
        throw_syntax("malformed timestamp '" + std::string(s) + "' (expected YYYY-MM-DD[THH:MM[Z]])");
    Date d = parse_date(rest.substr(0, 10));
    unsigned hh = to_unsigned(rest.substr(11, 2));
    unsigned mm = to_unsigned(rest.substr(14, 2));
    if (hh > 23 || mm > 59)
        throw_syntax("invalid time of day in '" + std::string(s) + "'");
    return midnight(d) + std::chrono::hours(hh) + std::chrono::minutes(mm);
}

std::string format_timestamp(const Timestamp& t) {
    auto day = std::chrono::floor<std::chrono::days>(t);
    auto tod = std::chrono::duration_cast<std::chrono::minutes>(t - day).count();
    char buf[24];
    std::snprintf(buf, sizeof buf, "%sT%02lld:%02lldZ", format_date(Date(day)).c_str(),
                  static_cast<long long>(tod / 60), static_cast<long long>(tod % 60));
    return buf;
}

Timestamp midnight(const Date& d) {
    return std::chrono::time_point_cast<std::chrono::minutes>(std::chrono::sys_days(d));
}

Date date_of(const Timestamp& t) { return Date(std::chrono::floor<std::chrono::days>(t)); }

}  // namespace stackctl

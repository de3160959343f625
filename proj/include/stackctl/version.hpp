#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace stackctl {

// A three-component version, totally ordered lexicographically on
// (major, minor, patch). Rendered as "M.m.p" with no leading zeros.
struct Version {
    unsigned major = 0;
    unsigned minor = 0;
    unsigned patch = 0;

    auto operator<=>(const Version&) const = default;
};

std::string to_string(const Version& v);

// Accepts exactly "M.m.p" with decimal components and no leading zeros.
Version parse_version(std::string_view s);

}  // namespace stackctl

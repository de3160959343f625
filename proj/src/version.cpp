#include "stackctl/version.hpp"

#include <cctype>
#include <vector>

#include "stackctl/errors.hpp"

namespace stackctl {

namespace detail {

// Shared by version and tag parsing: splits on '.', enforcing decimal
// components without leading zeros.
std::vector<unsigned> parse_components(std::string_view s, size_t max_components) {
    std::vector<unsigned> out;
    size_t pos = 0;
    while (true) {
        size_t dot = s.find('.', pos);
        std::string_view comp = s.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
        if (comp.empty())
            throw_syntax("malformed version component in '" + std::string(s) + "'");
        for (char c : comp)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw_syntax("malformed version component '" + std::string(comp) + "' in '" +
                             std::string(s) + "'");
        if (comp.size() > 1 && comp[0] == '0')
            throw_syntax("leading zero in version component '" + std::string(comp) + "' in '" +
                         std::string(s) + "'");
        if (comp.size() > 9)
            throw_syntax("version component too large in '" + std::string(s) + "'");
        unsigned v = 0;
        for (char c : comp)
            v = v * 10 + static_cast<unsigned>(c - '0');
        out.push_back(v);
        if (out.size() > max_components)
            throw_syntax("too many version components in '" + std::string(s) + "'");
        if (dot == std::string_view::npos)
            break;
        pos = dot + 1;
    }
    return out;
}

}  // namespace detail

std::string to_string(const Version& v) {
    return std::to_string(v.major) + '.' + std::to_string(v.minor) + '.' + std::to_string(v.patch);
}

Version parse_version(std::string_view s) {
    auto comps = detail::parse_components(s, 3);
    if (comps.size() != 3)
        throw_syntax("version '" + std::string(s) + "' must have exactly three components");
    return Version{comps[0], comps[1], comps[2]};
}

}  // namespace stackctl

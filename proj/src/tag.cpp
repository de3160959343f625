#include "stackctl/tag.hpp"

#include <vector>

#include "stackctl/errors.hpp"

namespace stackctl {

namespace detail {
std::vector<unsigned> parse_components(std::string_view s, size_t max_components);
}

std::string_view to_string(TagKind k) {
    switch (k) {
    case TagKind::Latest: return "latest";
    case TagKind::Devel: return "devel";
    case TagKind::Testing: return "testing";
    case TagKind::Partial: return "partial";
    case TagKind::Exact: return "exact";
    }
    return "?";
}

Tag Tag::partial(unsigned major) { return Tag(TagKind::Partial, {major, 0, 0}, 1); }

Tag Tag::partial(unsigned major, unsigned minor) { return Tag(TagKind::Partial, {major, minor, 0}, 2); }

Tag Tag::exact(const Version& v) { return Tag(TagKind::Exact, {v.major, v.minor, v.patch}, 3); }

Version Tag::exact_version() const {
    if (kind_ != TagKind::Exact)
        throw_domain("tag '" + render() + "' is not an exact version tag");
    return Version{components_[0], components_[1], components_[2]};
}

bool Tag::prefix_of(const Version& v) const {
    if (!is_numeric())
        return false;
    const unsigned actual[3] = {v.major, v.minor, v.patch};
    for (int i = 0; i < ncomponents_; ++i)
        if (components_[static_cast<size_t>(i)] != actual[i])
            return false;
    return true;
}

std::string Tag::render() const {
    switch (kind_) {
    case TagKind::Latest: return "latest";
    case TagKind::Devel: return "devel";
    case TagKind::Testing: return "testing";
    default: break;
    }
    std::string out = std::to_string(components_[0]);
    for (int i = 1; i < ncomponents_; ++i)
        out += '.' + std::to_string(components_[static_cast<size_t>(i)]);
    return out;
}

Tag parse_tag(std::string_view s) {
    if (s == "latest")
        return Tag::latest();
    if (s == "devel")
        return Tag::devel();
    if (s == "testing")
        return Tag::testing();
    auto comps = detail::parse_components(s, 3);
    switch (comps.size()) {
    case 1: return Tag::partial(comps[0]);
    case 2: return Tag::partial(comps[0], comps[1]);
    case 3: return Tag::exact(Version{comps[0], comps[1], comps[2]});
    default: throw_syntax("malformed tag '" + std::string(s) + "'");
    }
}

std::string_view to_string(Channel c) {
    switch (c) {
    case Channel::Devel: return "devel";
    case Channel::Testing: return "testing";
    case Channel::Latest: return "latest";
    }
    return "?";
}

std::string to_string(const ResolvedVersion& rv) {
    if (const auto* v = std::get_if<Version>(&rv))
        return to_string(*v);
    return std::string(to_string(std::get<Channel>(rv)));
}

}  // namespace stackctl

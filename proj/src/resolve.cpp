#include "stackctl/resolve.hpp"

#include <algorithm>

#include "stackctl/errors.hpp"

namespace stackctl {

namespace {

// Nearby universe members, for unresolvable-tag messages.
std::string nearest_candidates(const Tag& tag, std::vector<Version> universe) {
    std::sort(universe.begin(), universe.end());
    Version probe{tag.component_count() > 0 ? tag.component(0) : 0,
                  tag.component_count() > 1 ? tag.component(1) : 0,
                  tag.component_count() > 2 ? tag.component(2) : 0};
    auto it = std::lower_bound(universe.begin(), universe.end(), probe);
    size_t hi = static_cast<size_t>(it - universe.begin());
    size_t lo = hi >= 2 ? hi - 2 : 0;
    hi = std::min(hi + 2, universe.size());
    std::string out;
    for (size_t i = lo; i < hi; ++i)
        out += (out.empty() ? "" : ", ") + to_string(universe[i]);
    return out.empty() ? "none" : out;
}

[[noreturn]] void unresolvable(const Tag& tag, const std::vector<Version>& universe) {
    throw_domain("tag '" + tag.render() + "' does not resolve against this universe (nearest: " +
                 nearest_candidates(tag, universe) + ")");
}

}  // namespace

ResolvedVersion resolve_tag(const Tag& tag, const std::vector<Version>& universe) {
    switch (tag.kind()) {
    case TagKind::Devel:
        return Channel::Devel;
    case TagKind::Testing:
        return Channel::Testing;
    case TagKind::Latest: {
        if (universe.empty())
            throw_domain("tag 'latest' does not resolve: the version universe is empty");
        return *std::max_element(universe.begin(), universe.end());
    }
    case TagKind::Exact: {
        Version v = tag.exact_version();
        if (std::find(universe.begin(), universe.end(), v) == universe.end())
            unresolvable(tag, universe);
        return v;
    }
    case TagKind::Partial: {
        const Version* best = nullptr;
        for (const Version& v : universe)
            if (tag.prefix_of(v) && (!best || *best < v))
                best = &v;
        if (!best)
            unresolvable(tag, universe);
        return *best;
    }
    }
    throw_domain("unhandled tag kind");
}

std::set<Tag> alias_set(const Version& v, const std::vector<Version>& universe) {
    if (std::find(universe.begin(), universe.end(), v) == universe.end())
        throw_domain("version " + to_string(v) + " is not in the universe");

    std::set<Tag> out{Tag::exact(v)};
    for (const Tag& candidate : {Tag::partial(v.major), Tag::partial(v.major, v.minor), Tag::latest()})
        if (std::get<Version>(resolve_tag(candidate, universe)) == v)
            out.insert(candidate);
    return out;
}

}  // namespace stackctl

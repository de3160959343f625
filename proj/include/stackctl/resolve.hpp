#pragma once

#include <set>
#include <string>
#include <vector>

#include "stackctl/tag.hpp"

namespace stackctl {

struct ResolvedTag {
    Tag requested;
    ResolvedVersion resolved;
    std::string image;

    bool operator==(const ResolvedTag&) const = default;
};

// Resolves a tag against a version universe. Exact tags resolve to
// themselves when present; partial tags to the greatest version sharing
// their prefix; latest to the greatest version overall. devel/testing
// pass through as channels and never touch the universe. Unresolvable
// numeric tags raise a domain error listing the nearest candidates.
ResolvedVersion resolve_tag(const Tag& tag, const std::vector<Version>& universe);

// All tags that resolve_tag maps onto v: the exact tag always, each
// partial prefix when v is the greatest version in that slice, and
// latest when v is the universe maximum. v must be in the universe.
std::set<Tag> alias_set(const Version& v, const std::vector<Version>& universe);

}  // namespace stackctl

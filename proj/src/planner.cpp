#include "stackctl/planner.hpp"

#include <algorithm>
#include <map>

#include "stackctl/errors.hpp"
#include "stackctl/resolve.hpp"

namespace stackctl {

std::string_view to_string(BuildReason r) {
    switch (r) {
    case BuildReason::RootChange: return "root-change";
    case BuildReason::ParentChange: return "parent-change";
    case BuildReason::SourceChange: return "source-change";
    case BuildReason::Schedule: return "schedule";
    }
    return "?";
}

std::vector<std::string> topo_order(const StackManifest& m) {
    std::map<std::string, int> pending;  // unbuilt parents per image
    for (const auto& img : m.images)
        pending[img.name] = img.parent && m.find_image(img.parent->name) ? 1 : 0;

    std::set<std::string> ready;
    for (const auto& [name, n] : pending)
        if (n == 0)
            ready.insert(name);

    std::vector<std::string> order;
    while (!ready.empty()) {
        std::string name = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(name);
        for (const auto& child : m.children_of(name))
            if (--pending[child] == 0)
                ready.insert(child);
    }
    if (order.size() != m.images.size())
        throw_domain("cannot order stack '" + m.stack_name + "': inheritance cycle");
    return order;
}

std::set<std::string> images_at_tag(const StackManifest& m, const Tag& tag) {
    std::set<std::string> all;
    for (const auto& img : m.images)
        all.insert(img.name);

    if (tag.kind() == TagKind::Devel || tag.kind() == TagKind::Testing)
        return all;
    auto universe = m.tag_universe();
    if (tag.kind() == TagKind::Latest && universe.empty())
        return all;
    Version v = std::get<Version>(resolve_tag(tag, universe));
    auto it = m.availability.find(v);
    return it == m.availability.end() ? std::set<std::string>{} : it->second;
}

namespace {

// The concrete tag a build step carries: channels pass through, numeric
// requests pin to the exact resolved version.
Tag step_tag(const StackManifest& m, const Tag& tag) {
    if (tag.is_channel())
        return tag;
    return Tag::exact(std::get<Version>(resolve_tag(tag, m.tag_universe())));
}

}  // namespace

std::vector<std::string> build_order(const StackManifest& m, const Tag& tag) {
    std::set<std::string> wanted = images_at_tag(m, tag);
    std::vector<std::string> order;
    for (const auto& name : topo_order(m))
        if (wanted.count(name))
            order.push_back(name);
    return order;
}

std::set<std::string> rebuild_set(const StackManifest& m, const std::string& changed) {
    m.image(changed);  // throws on unknown image
    std::set<std::string> out;
    std::vector<std::string> frontier{changed};
    while (!frontier.empty()) {
        std::string name = std::move(frontier.back());
        frontier.pop_back();
        if (!out.insert(name).second)
            continue;
        for (auto& child : m.children_of(name))
            frontier.push_back(std::move(child));
    }
    return out;
}

double incremental_size(const StackManifest& m, const std::string& have, const std::string& want) {
    const ImageSpec& target = m.image(want);
    const ImageSpec& owned = m.image(have);
    const ImageSpec* cur = &target;
    while (cur) {
        if (cur->name == have)
            return target.compressed_size_mb - owned.compressed_size_mb;
        cur = cur->parent ? m.find_image(cur->parent->name) : nullptr;
    }
    throw_domain("'" + have + "' is not an ancestor of '" + want + "'");
}

std::vector<Diagnostic> size_warnings(const StackManifest& m) {
    std::vector<Diagnostic> out;
    for (const auto& img : m.images) {
        if (!img.parent)
            continue;
        const ImageSpec* parent = m.find_image(img.parent->name);
        if (parent && img.compressed_size_mb < parent->compressed_size_mb)
            out.push_back(Diagnostic{Severity::Warning, img.name,
                                     "published size " + std::to_string(img.compressed_size_mb) +
                                         " MB is below its parent '" + parent->name + "' (" +
                                         std::to_string(parent->compressed_size_mb) + " MB)"});
    }
    return out;
}

std::vector<Tag> upstream_tags(const ImageSpec& img) {
    std::vector<Tag> out;
    for (const auto& policy : img.policies) {
        if (policy.kind != PolicyKind::OnUpstreamChange)
            continue;
        for (TagKind k : policy.applies_to) {
            switch (k) {
            case TagKind::Latest: out.push_back(Tag::latest()); break;
            case TagKind::Devel: out.push_back(Tag::devel()); break;
            case TagKind::Testing: out.push_back(Tag::testing()); break;
            default: break;  // exact versions are rebuilt by cron, not by upstream pushes
            }
        }
    }
    if (out.empty())
        out.push_back(Tag::latest());
    std::sort(out.begin(), out.end(),
              [](const Tag& a, const Tag& b) { return a.render() < b.render(); });
    return out;
}

BuildPlan plan_for_tag(const StackManifest& m, const Tag& tag) {
    BuildPlan plan;
    plan.stack = m.stack_name;
    Tag concrete = step_tag(m, tag);
    for (const auto& name : build_order(m, tag))
        plan.steps.push_back(BuildStep{name, concrete, BuildReason::Schedule});
    return plan;
}

BuildPlan plan_for_change(const StackManifest& m, const std::string& changed) {
    BuildPlan plan;
    plan.stack = m.stack_name;
    bool changed_is_root = !m.image(changed).parent;
    std::set<std::string> affected = rebuild_set(m, changed);
    for (const auto& name : topo_order(m)) {
        if (!affected.count(name))
            continue;
        BuildReason reason = name == changed
                                 ? BuildReason::SourceChange
                                 : (changed_is_root ? BuildReason::RootChange : BuildReason::ParentChange);
        for (const Tag& tag : upstream_tags(m.image(name)))
            plan.steps.push_back(BuildStep{name, tag, reason});
    }
    return plan;
}

}  // namespace stackctl

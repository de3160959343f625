#include "stackctl/schedule.hpp"

#include <algorithm>
#include <map>

#include "stackctl/errors.hpp"
#include "stackctl/planner.hpp"
#include "stackctl/resolve.hpp"

namespace stackctl {

std::string_view to_string(TriggerKind k) {
    switch (k) {
    case TriggerKind::Nightly: return "nightly";
    case TriggerKind::Weekly: return "weekly";
    case TriggerKind::Monthly: return "monthly";
    case TriggerKind::Upstream: return "upstream";
    }
    return "?";
}

std::string source_string(const UpstreamEvent& e) {
    if (e.kind == UpstreamKind::BaseOsImageUpdated)
        return "base-os-image-updated";
    return "dockerfile-source-changed:" + e.image;
}

namespace {

bool fires_on(PolicyKind kind, const Date& d) {
    switch (kind) {
    case PolicyKind::Nightly: return true;
    case PolicyKind::Weekly: return is_monday(d);
    case PolicyKind::Monthly: return is_first_of_month(d);
    case PolicyKind::OnUpstreamChange: return false;
    }
    return false;
}

std::vector<Timestamp> cron_instants(PolicyKind kind, Timestamp start, Timestamp end) {
    std::vector<Timestamp> out;
    auto day = std::chrono::floor<std::chrono::days>(start);
    if (Timestamp(day) < start)
        day += std::chrono::days(1);
    for (; Timestamp(day) < end; day += std::chrono::days(1))
        if (fires_on(kind, Date(day)))
            out.push_back(Timestamp(day));
    return out;
}

TriggerKind trigger_of(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::Nightly: return TriggerKind::Nightly;
    case PolicyKind::Weekly: return TriggerKind::Weekly;
    case PolicyKind::Monthly: return TriggerKind::Monthly;
    default: throw_domain("policy kind has no cron trigger");
    }
}

std::vector<Tag> concrete_tags(TagKind kind, const StackManifest& m) {
    switch (kind) {
    case TagKind::Latest: return {Tag::latest()};
    case TagKind::Devel: return {Tag::devel()};
    case TagKind::Testing: return {Tag::testing()};
    case TagKind::Exact: {
        std::vector<Tag> out;
        for (const Version& v : m.tag_universe())
            out.push_back(Tag::exact(v));
        return out;
    }
    default: return {};
    }
}

struct EventKey {
    Timestamp at;
    int topo_index;
    std::string tag;
    TriggerKind trigger;
    std::string source;

    auto operator<=>(const EventKey&) const = default;
};

}  // namespace

std::vector<BuildEvent> simulate(const StackManifest& m, Timestamp start, int horizon_days,
                                 const std::vector<UpstreamEvent>& upstream) {
    if (horizon_days < 1)
        throw_domain("horizon must be at least one day");
    Timestamp end = start + std::chrono::days(horizon_days);

    for (size_t i = 0; i < upstream.size(); ++i) {
        const UpstreamEvent& e = upstream[i];
        if (e.kind == UpstreamKind::DockerfileSourceChanged)
            m.image(e.image);  // throws on unknown image
        if (e.at < start || e.at >= end)
            throw_domain("upstream event at " + format_timestamp(e.at) +
                         " is outside the simulation horizon");
        if (i > 0 && e.at < upstream[i - 1].at)
            throw_domain("upstream events are not sorted by timestamp");
    }

    std::map<std::string, int> topo_index;
    {
        int i = 0;
        for (const auto& name : topo_order(m))
            topo_index[name] = i++;
    }

    std::vector<std::pair<EventKey, BuildEvent>> keyed;
    auto emit = [&](Timestamp at, const std::string& image, const Tag& tag, Trigger trigger) {
        EventKey key{at, topo_index.at(image), tag.render(), trigger.kind, trigger.upstream_source};
        keyed.emplace_back(std::move(key), BuildEvent{at, image, tag, std::move(trigger)});
    };

    // Cron policies. A firing rebuilds every declaring image and its
    // descendants (the chain root triggers once, children cascade), so
    // each image sees exactly one event per firing.
    for (PolicyKind kind : {PolicyKind::Nightly, PolicyKind::Weekly, PolicyKind::Monthly}) {
        std::map<TagKind, std::set<std::string>> declaring;
        for (const auto& img : m.images)
            for (const auto& policy : img.policies)
                if (policy.kind == kind)
                    for (TagKind tk : policy.applies_to)
                        declaring[tk].insert(img.name);
        if (declaring.empty())
            continue;
        std::vector<Timestamp> instants = cron_instants(kind, start, end);
        for (const auto& [tag_kind, images] : declaring) {
            std::set<std::string> affected;
            for (const auto& name : images)
                affected.merge(rebuild_set(m, name));
            for (const Tag& tag : concrete_tags(tag_kind, m)) {
                std::set<std::string> at_tag = images_at_tag(m, tag);
                std::vector<std::string> targets;
                for (const auto& name : affected)
                    if (at_tag.count(name))
                        targets.push_back(name);
                for (Timestamp at : instants)
                    for (const auto& name : targets)
                        emit(at, name, tag, Trigger{trigger_of(kind), ""});
            }
        }
    }

    for (const UpstreamEvent& e : upstream) {
        const std::string affected =
            e.kind == UpstreamKind::BaseOsImageUpdated ? m.root().name : e.image;
        for (const auto& name : rebuild_set(m, affected))
            for (const Tag& tag : upstream_tags(m.image(name)))
                emit(e.at, name, tag, Trigger{TriggerKind::Upstream, source_string(e)});
    }

    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<BuildEvent> events;
    events.reserve(keyed.size());
    for (auto& [_, event] : keyed)
        events.push_back(std::move(event));
    return events;
}

Timestamp next_build(const StackManifest& m, const std::string& image, const Tag& tag,
                     Timestamp after) {
    const ImageSpec& img = m.image(image);
    if (tag.kind() == TagKind::Exact) {
        auto universe = m.image_universe(image);
        if (std::find(universe.begin(), universe.end(), tag.exact_version()) == universe.end())
            throw_domain("image '" + image + "' is not built at " + tag.render());
    }
    const BuildPolicy* policy = nullptr;
    for (const auto& p : img.policies)
        if (p.applies_to.count(tag.kind()))
            policy = &p;
    if (!policy)
        throw_domain("no build policy covers " + image + ":" + tag.render());
    if (policy->kind == PolicyKind::OnUpstreamChange)
        throw_domain(image + ":" + tag.render() +
                     " is rebuilt only on upstream changes; it has no cron schedule");

    auto day = std::chrono::floor<std::chrono::days>(after);
    while (true) {
        day += std::chrono::days(1);
        if (Timestamp(day) > after && fires_on(policy->kind, Date(day)))
            return Timestamp(day);
    }
}

}  // namespace stackctl

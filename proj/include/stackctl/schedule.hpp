#pragma once

#include <string>
#include <vector>

#include "stackctl/dates.hpp"
#include "stackctl/model.hpp"

namespace stackctl {

enum class TriggerKind { Nightly, Weekly, Monthly, Upstream };

std::string_view to_string(TriggerKind k);

struct Trigger {
    TriggerKind kind = TriggerKind::Nightly;
    std::string upstream_source;  // set only for TriggerKind::Upstream

    bool operator==(const Trigger&) const = default;
};

struct BuildEvent {
    Timestamp at{};
    std::string image;
    Tag tag;
    Trigger trigger;

    bool operator==(const BuildEvent&) const = default;
};

enum class UpstreamKind { BaseOsImageUpdated, DockerfileSourceChanged };

struct UpstreamEvent {
    Timestamp at{};
    UpstreamKind kind = UpstreamKind::BaseOsImageUpdated;
    std::string image;  // required for DockerfileSourceChanged

    bool operator==(const UpstreamEvent&) const = default;
};

std::string source_string(const UpstreamEvent& e);

// Deterministically replays cron triggers and upstream events over
// [start, start + horizon_days). Nightly policies fire at 00:00 UTC
// daily, weekly on Mondays, monthly on the 1st; upstream events rebuild
// the affected image and all its descendants at their timestamp. Events
// at one timestamp are ordered parents-before-children.
std::vector<BuildEvent> simulate(const StackManifest& m, Timestamp start, int horizon_days,
                                 const std::vector<UpstreamEvent>& upstream);

// Earliest cron firing for (image, tag) strictly after `after`. An
// image/tag governed only by on-upstream-change has no cron time and
// raises a domain error.
Timestamp next_build(const StackManifest& m, const std::string& image, const Tag& tag,
                     Timestamp after);

}  // namespace stackctl

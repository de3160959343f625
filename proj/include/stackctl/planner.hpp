#pragma once

#include <set>
#include <string>
#include <vector>

#include "stackctl/manifest.hpp"
#include "stackctl/model.hpp"

namespace stackctl {

enum class BuildReason { RootChange, ParentChange, SourceChange, Schedule };

std::string_view to_string(BuildReason r);

struct BuildStep {
    std::string image;
    Tag tag;
    BuildReason reason = BuildReason::Schedule;

    bool operator==(const BuildStep&) const = default;
};

// Ordered, duplicate-free build steps; parents always precede children.
struct BuildPlan {
    std::string stack;
    std::vector<BuildStep> steps;

    bool operator==(const BuildPlan&) const = default;
};

// Deterministic topological order over all images: parents first,
// siblings sorted by name.
std::vector<std::string> topo_order(const StackManifest& m);

// Images buildable at a tag. Channels cover everything; numeric tags
// and latest follow the availability map. On a stack with no versioned
// tags at all, latest behaves like a channel.
std::set<std::string> images_at_tag(const StackManifest& m, const Tag& tag);

// Topological order restricted to the images available at the resolved
// tag.
std::vector<std::string> build_order(const StackManifest& m, const Tag& tag);

// The changed image plus all transitive descendants; pure reachability,
// with no availability filtering.
std::set<std::string> rebuild_set(const StackManifest& m, const std::string& changed);

// Extra download cost of `want` for a user who already has `have`,
// using the published cumulative sizes. `have` must be `want` or one of
// its ancestors.
double incremental_size(const StackManifest& m, const std::string& have, const std::string& want);

// Warns about children published smaller than their parent (cumulative
// sizes should be monotone along edges).
std::vector<Diagnostic> size_warnings(const StackManifest& m);

// Tags an image rebuilds at when something upstream of it changes: the
// channels named by its on-upstream-change policy, defaulting to latest.
std::vector<Tag> upstream_tags(const ImageSpec& img);

// Full-stack plan for one tag (reason: schedule).
BuildPlan plan_for_tag(const StackManifest& m, const Tag& tag);

// Invalidation plan after a source change to one image. The changed
// image is ordered first, descendants follow topologically; descendants
// carry root-change when the stack root itself changed.
BuildPlan plan_for_change(const StackManifest& m, const std::string& changed);

}  // namespace stackctl

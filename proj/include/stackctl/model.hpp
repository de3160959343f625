#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stackctl/dates.hpp"
#include "stackctl/tag.hpp"
#include "stackctl/version.hpp"

namespace stackctl {

// Ordered (version, release date) pairs plus the earliest permissible
// snapshot date. Entries are strictly increasing in both components.
struct CalendarEntry {
    Version version;
    Date release_date;

    bool operator==(const CalendarEntry&) const = default;
};

struct SnapshotCalendar {
    std::vector<CalendarEntry> entries;
    Date epoch{};

    bool operator==(const SnapshotCalendar&) const = default;
};

// User-supplied build-argument assignments (docker build --build-arg).
struct BuildArgs {
    std::optional<Version> r_version;
    std::optional<Date> build_date;
    std::optional<std::string> rstudio_version;
    std::optional<std::string> pandoc_templates_version;

    bool empty() const {
        return !r_version && !build_date && !rstudio_version && !pandoc_templates_version;
    }

    bool operator==(const BuildArgs&) const = default;
};

// A build argument an image declares. R_VERSION and BUILD_DATE defaults
// are computed at render time from the resolved tag and snapshot; other
// arguments default to the pinned value, or "latest" when unpinned.
struct DeclaredArg {
    std::string name;  // R_VERSION, BUILD_DATE, RSTUDIO_VERSION or PANDOC_TEMPLATES_VERSION
    std::optional<std::string> pinned_default;

    bool operator==(const DeclaredArg&) const = default;
};

struct LabelSet {
    std::string license;
    std::string vcs_url;
    std::string vendor;
    std::map<std::string, std::string> extra;

    bool operator==(const LabelSet&) const = default;
};

struct ServiceSpec {
    std::string name;
    unsigned port = 0;  // valid range 1..65535

    bool operator==(const ServiceSpec&) const = default;
};

struct SystemPackage {
    std::string name;
    std::string channel;  // empty = the stack's default channel

    bool operator==(const SystemPackage&) const = default;
};

enum class PolicyKind { Nightly, Weekly, Monthly, OnUpstreamChange };

std::string_view to_string(PolicyKind k);

struct BuildPolicy {
    PolicyKind kind = PolicyKind::OnUpstreamChange;
    std::set<TagKind> applies_to;

    bool operator==(const BuildPolicy&) const = default;
};

struct ParentRef {
    std::string name;
    std::optional<Tag> pinned_tag;  // absent: the tag being built propagates

    bool operator==(const ParentRef&) const = default;
};

struct ImageSpec {
    std::string name;
    std::string description;
    std::optional<ParentRef> parent;
    std::optional<std::string> base_os;  // explicit codename; absent = derived from the era table
    std::optional<std::string> name_space;  // overrides the stack namespace; may be empty
    std::vector<SystemPackage> system_packages;
    std::vector<std::string> r_packages;
    std::vector<DeclaredArg> build_args;
    LabelSet labels;
    std::vector<ServiceSpec> services;
    double compressed_size_mb = 0;  // cumulative, as published
    std::optional<long long> downloads;  // fixture metadata only
    std::vector<BuildPolicy> policies;

    bool operator==(const ImageSpec&) const = default;
};

struct OsEra {
    Version min_version;
    std::string codename;

    bool operator==(const OsEra&) const = default;
};

struct StackManifest {
    std::string stack_name;
    std::string name_space;  // registry namespace prefix, may be empty
    std::vector<std::string> channels;  // extra package channels (testing stack)
    std::vector<ImageSpec> images;  // manifest order
    SnapshotCalendar calendar;
    // version -> image names built at that version; the key set is the
    // tag universe.
    std::map<Version, std::set<std::string>> availability;
    std::vector<OsEra> os_eras;  // sorted by min_version

    bool operator==(const StackManifest&) const = default;

    const ImageSpec* find_image(std::string_view name) const;
    const ImageSpec& image(std::string_view name) const;  // throws when absent
    // The unique parentless image; throws unless exactly one exists.
    const ImageSpec& root() const;
    std::vector<Version> tag_universe() const;
    // Versions at which the given image is built.
    std::vector<Version> image_universe(std::string_view name) const;
    std::vector<std::string> children_of(std::string_view name) const;  // sorted by name
    // Full image reference, e.g. "rocker/verse" or "r-base".
    std::string image_reference(const ImageSpec& img) const;
};

}  // namespace stackctl

#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "stackctl/model.hpp"

namespace stackctl {

// Marks a snapshot that tracks the calendar (the newest release and the
// devel/testing channels). Kept distinct rather than eagerly substituted
// so rendered artifacts stay byte-stable under an injected "today".
struct CurrentDate {
    bool operator==(const CurrentDate&) const = default;
};

using SnapshotDate = std::variant<CurrentDate, Date>;

inline bool is_current(const SnapshotDate& d) { return std::holds_alternative<CurrentDate>(d); }

Date concrete_date(const SnapshotDate& d, const Date& today);

inline constexpr std::string_view kDefaultRepoBase = "https://mran.microsoft.com/snapshot";

struct SnapshotResolution {
    ResolvedVersion version;
    SnapshotDate snapshot_date;
    std::string repo_url;  // always concrete, rendered against "today"
    std::string os_codename;

    bool operator==(const SnapshotResolution&) const = default;
};

// The frozen package-repository date for a version: the release date of
// its successor in the calendar (the last day it was the newest
// release), clamped to the calendar epoch; the newest release tracks
// the current date.
SnapshotDate snapshot_date(const Version& v, const SnapshotCalendar& cal);

std::string repo_url(const SnapshotDate& d, const Date& today,
                     std::string_view base = kDefaultRepoBase);

// Codename of the last era whose min_version is <= v; channels take the
// newest era.
std::string base_os(const ResolvedVersion& v, const std::vector<OsEra>& eras);

SnapshotResolution resolve_snapshot(const ResolvedVersion& v, const StackManifest& m,
                                    const Date& today,
                                    std::string_view repo_base = kDefaultRepoBase);

// Applies user build arguments: R_VERSION replaces the version (and the
// snapshot date and codename are recomputed), BUILD_DATE replaces the
// snapshot date. BUILD_DATE must not predate the calendar epoch.
SnapshotResolution apply_overrides(SnapshotResolution base, const BuildArgs& args,
                                   const StackManifest& m, const Date& today,
                                   std::string_view repo_base = kDefaultRepoBase);

}  // namespace stackctl

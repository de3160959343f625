#include "stackctl/snapshot.hpp"

#include <algorithm>

#include "stackctl/errors.hpp"

namespace stackctl {

Date concrete_date(const SnapshotDate& d, const Date& today) {
    if (const auto* fixed = std::get_if<Date>(&d))
        return *fixed;
    return today;
}

SnapshotDate snapshot_date(const Version& v, const SnapshotCalendar& cal) {
    bool found = false;
    const CalendarEntry* successor = nullptr;
    for (const auto& entry : cal.entries) {
        if (entry.version == v)
            found = true;
        else if (v < entry.version && (!successor || entry.version < successor->version))
            successor = &entry;
    }
    if (!found)
        throw_domain("version " + to_string(v) + " is not in the release calendar");
    if (!successor)
        return CurrentDate{};
    return std::max(successor->release_date, cal.epoch);
}

std::string repo_url(const SnapshotDate& d, const Date& today, std::string_view base) {
    std::string url(base);
    if (!url.empty() && url.back() == '/')
        url.pop_back();
    return url + '/' + format_date(concrete_date(d, today));
}

std::string base_os(const ResolvedVersion& v, const std::vector<OsEra>& eras) {
    if (eras.empty())
        throw_domain("no OS eras defined");
    const OsEra* best = nullptr;
    if (std::holds_alternative<Channel>(v)) {
        for (const auto& era : eras)
            if (!best || best->min_version < era.min_version)
                best = &era;
    } else {
        const Version& version = std::get<Version>(v);
        for (const auto& era : eras)
            if (era.min_version <= version && (!best || best->min_version < era.min_version))
                best = &era;
        if (!best)
            throw_domain("version " + to_string(version) + " predates the first OS era (" +
                         to_string(eras.front().min_version) + ")");
    }
    return best->codename;
}

SnapshotResolution resolve_snapshot(const ResolvedVersion& v, const StackManifest& m,
                                    const Date& today, std::string_view repo_base) {
    SnapshotResolution res;
    res.version = v;
    if (std::holds_alternative<Channel>(v))
        res.snapshot_date = CurrentDate{};
    else
        res.snapshot_date = snapshot_date(std::get<Version>(v), m.calendar);
    res.repo_url = repo_url(res.snapshot_date, today, repo_base);
    res.os_codename = base_os(v, m.os_eras);
    return res;
}

SnapshotResolution apply_overrides(SnapshotResolution base, const BuildArgs& args,
                                   const StackManifest& m, const Date& today,
                                   std::string_view repo_base) {
    if (args.r_version)
        base = resolve_snapshot(*args.r_version, m, today, repo_base);
    if (args.build_date) {
        if (*args.build_date < m.calendar.epoch)
            throw_domain("BUILD_DATE " + format_date(*args.build_date) +
                         " predates the snapshot epoch " + format_date(m.calendar.epoch));
        base.snapshot_date = *args.build_date;
        base.repo_url = repo_url(base.snapshot_date, today, repo_base);
    }
    return base;
}

}  // namespace stackctl

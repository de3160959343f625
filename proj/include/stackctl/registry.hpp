#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "stackctl/dates.hpp"
#include "stackctl/generate.hpp"
#include "stackctl/model.hpp"
#include "stackctl/schedule.hpp"

namespace stackctl {

// One stored build. Within an image each tag points at one digest at a
// time; the digest is a pure function of the rendered inputs.
struct RegistryRecord {
    std::string image;
    std::string digest;
    std::set<Tag> tags;
    Timestamp built_at{};
    double size_mb = 0;
    LabelSet labels;

    bool operator==(const RegistryRecord&) const = default;
};

struct RegistryStore {
    std::vector<RegistryRecord> records;

    bool operator==(const RegistryStore&) const = default;
};

// Input-deterministic build digest: canonical Dockerfile bytes, the
// parent's digest and the concrete snapshot date. A real registry never
// reproduces identical image hashes; this store deliberately trades
// that for testable digest equality.
std::string build_digest(std::string_view dockerfile, std::string_view parent_digest,
                         std::string_view snapshot_date);

// Records a build: computes the digest (the parent's build must already
// be recorded under the tag the FROM line names), inserts or refreshes
// the record, and attaches the event's tag to it. Returns the record.
const RegistryRecord& record_build(RegistryStore& store, const RenderedImage& rendered,
                                   const BuildEvent& event);

// Post-build aliasing: moves every tag in alias_set(version, universe)
// onto the record built for the exact version. Returns the tags that
// actually moved; applying it twice moves nothing the second time.
std::set<Tag> retag(RegistryStore& store, const std::string& image, const Version& version,
                    const std::vector<Version>& universe);

// The record whose tag set contains the tag. Partial tags are looked up
// as stored aliases, never re-resolved.
const RegistryRecord& query(const RegistryStore& store, const std::string& image, const Tag& tag);

// Persistence: a single JSON document with a schema marker, written via
// atomic replace under an advisory file lock. A missing file loads as
// an empty store.
RegistryStore load_registry(const std::filesystem::path& path);
void save_registry(const RegistryStore& store, const std::filesystem::path& path);

}  // namespace stackctl

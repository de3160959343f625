#include "stackctl/registry.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stackctl/digest.hpp"
#include "stackctl/errors.hpp"
#include "stackctl/json_io.hpp"
#include "stackctl/resolve.hpp"

namespace stackctl {

namespace {

// Advisory lock serializing store writers; readers of a loaded snapshot
// need no coordination.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& path) {
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (fd_ < 0)
            throw_io("cannot open lock file '" + path.string() + "'");
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw_io("cannot lock '" + path.string() + "'");
        }
    }

    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

RegistryRecord* find_record(RegistryStore& store, std::string_view image, std::string_view digest) {
    for (auto& r : store.records)
        if (r.image == image && r.digest == digest)
            return &r;
    return nullptr;
}

// Enforces per-image tag uniqueness: strips the tag from every record
// of the image except `keep`.
void detach_tag(RegistryStore& store, std::string_view image, const Tag& tag,
                const RegistryRecord* keep) {
    for (auto& r : store.records)
        if (r.image == image && &r != keep)
            r.tags.erase(tag);
}

}  // namespace

std::string build_digest(std::string_view dockerfile, std::string_view parent_digest,
                         std::string_view snapshot_date) {
    std::string material = "stackctl-build-v1\n";
    material += "dockerfile:";
    material += dockerfile;
    material += "\nparent:";
    material += parent_digest;
    material += "\nsnapshot:";
    material += snapshot_date;
    material += '\n';
    return sha256_digest(material);
}

const RegistryRecord& record_build(RegistryStore& store, const RenderedImage& rendered,
                                   const BuildEvent& event) {
    if (event.image != rendered.image || event.tag != rendered.tag)
        throw_domain("build event for " + event.image + ':' + event.tag.render() +
                     " does not match rendered image " + rendered.image + ':' +
                     rendered.tag.render());

    std::string parent_digest;
    if (!rendered.canonical_inputs.parent_image.empty()) {
        const auto& inputs = rendered.canonical_inputs;
        const RegistryRecord* parent = nullptr;
        for (const auto& r : store.records)
            if (r.image == inputs.parent_image && r.tags.count(inputs.parent_tag)) {
                parent = &r;
                break;
            }
        if (!parent)
            throw_domain("parent " + inputs.parent_ref + " has no recorded build");
        parent_digest = parent->digest;
    }

    std::string digest =
        build_digest(rendered.dockerfile, parent_digest, rendered.canonical_inputs.snapshot_date);

    RegistryRecord* record = find_record(store, rendered.image, digest);
    if (record) {
        record->built_at = event.at;
    } else {
        store.records.push_back(RegistryRecord{rendered.image, digest, {}, event.at,
                                               rendered.size_mb, rendered.labels});
        record = &store.records.back();
    }
    detach_tag(store, rendered.image, event.tag, record);
    record->tags.insert(event.tag);
    return *record;
}

std::set<Tag> retag(RegistryStore& store, const std::string& image, const Version& version,
                    const std::vector<Version>& universe) {
    RegistryRecord* target = nullptr;
    for (auto& r : store.records)
        if (r.image == image && r.tags.count(Tag::exact(version))) {
            target = &r;
            break;
        }
    if (!target)
        throw_domain("no recorded build of " + image + ':' + to_string(version));

    std::set<Tag> moved;
    for (const Tag& alias : alias_set(version, universe)) {
        if (target->tags.count(alias))
            continue;
        detach_tag(store, image, alias, target);
        target->tags.insert(alias);
        moved.insert(alias);
    }
    return moved;
}

const RegistryRecord& query(const RegistryStore& store, const std::string& image, const Tag& tag) {
    for (const auto& r : store.records)
        if (r.image == image && r.tags.count(tag))
            return r;
    throw_domain("no record for " + image + ':' + tag.render());
}

RegistryStore load_registry(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        return {};
    FileLock lock(path.string() + ".lock");
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw_io("cannot open registry '" + path.string() + "'");

    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw_syntax("registry '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || doc.value("schema", 0) != 1)
        throw_syntax("registry '" + path.string() + "' has an unsupported schema");

    RegistryStore store;
    for (const auto& item : doc.value("records", nlohmann::json::array()))
        store.records.push_back(record_from_json(item));
    return store;
}

void save_registry(const RegistryStore& store, const std::filesystem::path& path) {
    std::vector<const RegistryRecord*> sorted;
    for (const auto& r : store.records)
        sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const RegistryRecord* a, const RegistryRecord* b) {
        return std::tie(a->image, a->digest) < std::tie(b->image, b->digest);
    });

    nlohmann::json doc;
    doc["schema"] = 1;
    auto& records = doc["records"] = nlohmann::json::array();
    for (const RegistryRecord* r : sorted)
        records.push_back(to_json(*r));

    FileLock lock(path.string() + ".lock");
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !(out << doc.dump(2) << '\n') || !out.flush())
            throw_io("cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw_io("cannot replace '" + path.string() + "': " + ec.message());
}

}  // namespace stackctl

#include <algorithm>
#include <map>
#include <set>

#include "stackctl/manifest.hpp"

namespace stackctl {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::string to_string(const Diagnostic& d) {
    std::string out(to_string(d.severity));
    if (!d.image.empty())
        out += " [" + d.image + "]";
    return out + ": " + d.message;
}

namespace {

class Validator {
public:
    explicit Validator(const StackManifest& m) : m_(m) {}

    std::vector<Diagnostic> run() {
        check_stack();
        check_roots_and_edges();
        check_calendar();
        check_eras();
        check_availability();
        for (const auto& img : m_.images)
            check_image(img);
        return std::move(out_);
    }

private:
    void add(std::string image, std::string message, Severity sev = Severity::Error) {
        out_.push_back(Diagnostic{sev, std::move(image), std::move(message)});
    }

    void check_stack() {
        if (m_.stack_name.empty())
            add("", "stack has no name");
        std::set<std::string> seen;
        for (const auto& img : m_.images)
            if (!seen.insert(img.name).second)
                add(img.name, "duplicate image name");
    }

    void check_roots_and_edges() {
        std::vector<std::string> roots;
        for (const auto& img : m_.images) {
            if (!img.parent) {
                roots.push_back(img.name);
                continue;
            }
            if (!m_.find_image(img.parent->name))
                add(img.name, "parent '" + img.parent->name + "' is not defined in this manifest");
        }
        if (roots.empty() && !m_.images.empty())
            add("", "no root image: every image declares a parent");
        if (roots.size() > 1) {
            std::string list;
            for (const auto& r : roots)
                list += (list.empty() ? "" : ", ") + r;
            add("", "more than one root image: " + list);
        }
        check_cycles();
    }

    void check_cycles() {
        std::map<std::string, int> state;
        for (const auto& img : m_.images) {
            if (state[img.name] == 2)
                continue;
            std::vector<const ImageSpec*> path;
            const ImageSpec* cur = &img;
            while (true) {
                if (state[cur->name] == 1) {
                    std::string msg = "inheritance cycle: ";
                    auto it = std::find(path.begin(), path.end(), cur);
                    for (; it != path.end(); ++it)
                        msg += (*it)->name + " -> ";
                    add("", msg + cur->name);
                    break;
                }
                if (state[cur->name] == 2)
                    break;
                state[cur->name] = 1;
                path.push_back(cur);
                const ImageSpec* next = cur->parent ? m_.find_image(cur->parent->name) : nullptr;
                if (!next)
                    break;
                cur = next;
            }
            for (const ImageSpec* i : path)
                state[i->name] = 2;
        }
    }

    void check_calendar() {
        const auto& entries = m_.calendar.entries;
        for (size_t i = 1; i < entries.size(); ++i) {
            if (!(entries[i - 1].version < entries[i].version))
                add("", "calendar versions not strictly increasing at " +
                            to_string(entries[i].version));
            if (!(entries[i - 1].release_date < entries[i].release_date))
                add("", "calendar dates not strictly increasing at " +
                            format_date(entries[i].release_date));
        }
    }

    void check_eras() {
        for (size_t i = 1; i < m_.os_eras.size(); ++i)
            if (!(m_.os_eras[i - 1].min_version < m_.os_eras[i].min_version))
                add("", "era versions not strictly increasing at " +
                            to_string(m_.os_eras[i].min_version));
    }

    void check_availability() {
        const ImageSpec* root = nullptr;
        for (const auto& img : m_.images)
            if (!img.parent) {
                root = &img;
                break;
            }
        for (const auto& [version, names] : m_.availability) {
            for (const auto& name : names) {
                const ImageSpec* img = m_.find_image(name);
                if (!img) {
                    add("", "availability for " + to_string(version) + " names unknown image '" +
                               name + "'");
                    continue;
                }
                if (img->parent && !names.count(img->parent->name))
                    add(name, "built at " + to_string(version) + " but its parent '" +
                                  img->parent->name + "' is not");
            }
            if (root && !names.count(root->name))
                add(root->name, to_string(version) +
                                    " is in the tag universe but the root image is not built at it");
        }
    }

    void check_image(const ImageSpec& img) {
        if (img.compressed_size_mb < 0)
            add(img.name, "negative compressed size");
        if (img.downloads && *img.downloads < 0)
            add(img.name, "negative download count");

        std::set<unsigned> ports;
        for (const auto& svc : img.services) {
            if (svc.name.empty())
                add(img.name, "service with empty name");
            if (svc.port < 1 || svc.port > 65535)
                add(img.name, "service '" + svc.name + "' port " + std::to_string(svc.port) +
                                  " outside 1-65535");
            else if (!ports.insert(svc.port).second)
                add(img.name, "duplicate service port " + std::to_string(svc.port));
        }

        for (const auto& [key, value] : img.labels.extra)
            if (value.empty())
                add(img.name, "label '" + key + "' has an empty value");

        std::set<std::string> args;
        for (const auto& arg : img.build_args)
            if (!args.insert(arg.name).second)
                add(img.name, "duplicate build argument " + arg.name);

        check_policies(img);
    }

    void check_policies(const ImageSpec& img) {
        std::map<TagKind, PolicyKind> covered;
        for (const auto& policy : img.policies) {
            if (policy.applies_to.empty())
                add(img.name, "policy covers no tag kinds");
            for (TagKind k : policy.applies_to) {
                if (k == TagKind::Partial) {
                    add(img.name, "policies may not target partial tags (aliases are not built)");
                    continue;
                }
                if (!covered.emplace(k, policy.kind).second)
                    add(img.name, std::string("tag kind '") + std::string(to_string(k)) +
                                      "' is covered by more than one policy");
            }
        }
        bool built_somewhere = std::any_of(
            m_.availability.begin(), m_.availability.end(),
            [&](const auto& entry) { return entry.second.count(img.name) != 0; });
        if (built_somewhere && !covered.count(TagKind::Exact))
            add(img.name, "built at numeric versions but no policy covers exact tags");
    }

    const StackManifest& m_;
    std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_manifest(const StackManifest& m) { return Validator(m).run(); }

}  // namespace stackctl

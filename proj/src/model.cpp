#include "stackctl/model.hpp"

#include <algorithm>

#include "stackctl/errors.hpp"

namespace stackctl {

std::string_view to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::Nightly: return "nightly";
    case PolicyKind::Weekly: return "weekly";
    case PolicyKind::Monthly: return "monthly";
    case PolicyKind::OnUpstreamChange: return "on-upstream-change";
    }
    return "?";
}

const ImageSpec* StackManifest::find_image(std::string_view name) const {
    for (const auto& img : images)
        if (img.name == name)
            return &img;
    return nullptr;
}

const ImageSpec& StackManifest::image(std::string_view name) const {
    if (const auto* img = find_image(name))
        return *img;
    throw_domain("unknown image '" + std::string(name) + "' in stack '" + stack_name + "'");
}

const ImageSpec& StackManifest::root() const {
    const ImageSpec* found = nullptr;
    for (const auto& img : images) {
        if (img.parent)
            continue;
        if (found)
            throw_domain("stack '" + stack_name + "' has more than one root image");
        found = &img;
    }
    if (!found)
        throw_domain("stack '" + stack_name + "' has no root image");
    return *found;
}

std::vector<Version> StackManifest::tag_universe() const {
    std::vector<Version> out;
    out.reserve(availability.size());
    for (const auto& [v, _] : availability)
        out.push_back(v);
    return out;
}

std::vector<Version> StackManifest::image_universe(std::string_view name) const {
    std::vector<Version> out;
    for (const auto& [v, names] : availability)
        if (names.count(std::string(name)))
            out.push_back(v);
    return out;
}

std::vector<std::string> StackManifest::children_of(std::string_view name) const {
    std::vector<std::string> out;
    for (const auto& img : images)
        if (img.parent && img.parent->name == name)
            out.push_back(img.name);
    std::sort(out.begin(), out.end());
    return out;
}

std::string StackManifest::image_reference(const ImageSpec& img) const {
    const std::string& ns = img.name_space ? *img.name_space : name_space;
    return ns.empty() ? img.name : ns + '/' + img.name;
}

}  // namespace stackctl

#include <cstdio>
#include <sstream>

#include "stackctl/manifest.hpp"

namespace stackctl {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::stod(buf) != v)
        std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename Range, typename Fn>
std::string join(const Range& items, Fn render) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty())
            out += ", ";
        out += render(item);
    }
    return out;
}

void render_image(std::ostream& os, const ImageSpec& img) {
    os << "[image " << img.name << "]\n";
    if (!img.description.empty())
        os << "description = " << img.description << '\n';
    if (img.parent) {
        os << "parent = " << img.parent->name;
        if (img.parent->pinned_tag)
            os << ':' << img.parent->pinned_tag->render();
        os << '\n';
    }
    if (img.base_os)
        os << "base_os = " << *img.base_os << '\n';
    if (img.name_space)
        os << "namespace = " << *img.name_space << '\n';
    if (!img.system_packages.empty())
        os << "system_packages = " << join(img.system_packages, [](const SystemPackage& p) {
            return p.channel.empty() ? p.name : p.name + '@' + p.channel;
        }) << '\n';
    if (!img.r_packages.empty())
        os << "r_packages = " << join(img.r_packages, [](const std::string& p) { return p; }) << '\n';
    if (!img.build_args.empty())
        os << "build_args = " << join(img.build_args, [](const DeclaredArg& a) {
            return a.pinned_default ? a.name + '=' + *a.pinned_default : a.name;
        }) << '\n';
    if (!img.services.empty())
        os << "services = " << join(img.services, [](const ServiceSpec& s) {
            return s.name + ':' + std::to_string(s.port);
        }) << '\n';
    os << "size_mb = " << format_double(img.compressed_size_mb) << '\n';
    if (img.downloads)
        os << "downloads = " << *img.downloads << '\n';
    if (!img.labels.license.empty())
        os << "label.license = " << img.labels.license << '\n';
    if (!img.labels.vcs_url.empty())
        os << "label.vcs-url = " << img.labels.vcs_url << '\n';
    if (!img.labels.vendor.empty())
        os << "label.vendor = " << img.labels.vendor << '\n';
    for (const auto& [key, value] : img.labels.extra)
        os << "label." << key << " = " << value << '\n';
    for (const auto& policy : img.policies)
        os << "policy = " << to_string(policy.kind) << ": "
           << join(policy.applies_to, [](TagKind k) { return std::string(to_string(k)); }) << '\n';
}

}  // namespace

std::string render_image_spec(const ImageSpec& img) {
    std::ostringstream os;
    render_image(os, img);
    return os.str();
}

std::string render_manifest(const StackManifest& m) {
    std::ostringstream os;
    os << "[stack]\n";
    os << "name = " << m.stack_name << '\n';
    if (!m.name_space.empty())
        os << "namespace = " << m.name_space << '\n';
    if (!m.channels.empty())
        os << "channels = " << join(m.channels, [](const std::string& c) { return c; }) << '\n';

    if (!m.calendar.entries.empty() || m.calendar.epoch != Date{}) {
        os << "\n[calendar]\n";
        os << "epoch = " << format_date(m.calendar.epoch) << '\n';
        for (const auto& entry : m.calendar.entries)
            os << to_string(entry.version) << " = " << format_date(entry.release_date) << '\n';
    }

    if (!m.os_eras.empty()) {
        os << "\n[eras]\n";
        for (const auto& era : m.os_eras)
            os << to_string(era.min_version) << " = " << era.codename << '\n';
    }

    if (!m.availability.empty()) {
        os << "\n[availability]\n";
        for (const auto& [version, names] : m.availability)
            os << to_string(version) << " = "
               << join(names, [](const std::string& n) { return n; }) << '\n';
    }

    for (const auto& img : m.images) {
        os << '\n';
        render_image(os, img);
    }
    return os.str();
}

}  // namespace stackctl

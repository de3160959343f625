#include "stackctl/generate.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stackctl/digest.hpp"
#include "stackctl/errors.hpp"
#include "stackctl/manifest.hpp"
#include "stackctl/planner.hpp"

namespace stackctl {

namespace {

// The concrete date always forms the tail of a resolved repository URL.
std::string concrete_date_of(const SnapshotResolution& res) {
    return res.repo_url.substr(res.repo_url.size() - 10);
}

// The tag an image is built as: channels pass through, numeric requests
// pin to the exact resolved version.
Tag build_tag(const ResolvedTag& rtag) {
    if (rtag.requested.is_channel())
        return rtag.requested;
    return Tag::exact(std::get<Version>(rtag.resolved));
}

std::string arg_default(const DeclaredArg& arg, const SnapshotResolution& res) {
    if (arg.pinned_default)
        return *arg.pinned_default;
    if (arg.name == "R_VERSION")
        return to_string(res.version);
    if (arg.name == "BUILD_DATE")
        return concrete_date_of(res);
    return "latest";
}

// LABEL keys as published: the three schema-label fields get their
// canonical prefix, extra keys are taken verbatim.
std::map<std::string, std::string> rendered_labels(const ImageSpec& spec) {
    std::map<std::string, std::string> out;
    if (!spec.labels.license.empty())
        out["org.label-schema.license"] = spec.labels.license;
    if (!spec.labels.vcs_url.empty())
        out["org.label-schema.vcs-url"] = spec.labels.vcs_url;
    if (!spec.labels.vendor.empty())
        out["org.label-schema.vendor"] = spec.labels.vendor;
    for (const auto& [key, value] : spec.labels.extra)
        if (!out.emplace(key, value).second)
            throw_domain("image '" + spec.name + "' defines label '" + key + "' twice");
    return out;
}

void render_system_packages(std::ostream& os, const StackManifest& m, const ImageSpec& spec) {
    std::map<std::string, std::vector<std::string>> groups;  // channel -> packages
    for (const auto& pkg : spec.system_packages) {
        if (!pkg.channel.empty() &&
            std::find(m.channels.begin(), m.channels.end(), pkg.channel) == m.channels.end())
            throw_domain("image '" + spec.name + "' installs '" + pkg.name + "' from channel '" +
                         pkg.channel + "' but stack '" + m.stack_name + "' declares no such channel");
        groups[pkg.channel].push_back(pkg.name);
    }
    if (groups.empty())
        return;
    os << "RUN apt-get update \\\n";
    for (auto& [channel, packages] : groups) {
        std::sort(packages.begin(), packages.end());
        os << " && apt-get install -y --no-install-recommends";
        if (!channel.empty())
            os << " -t " << channel;
        os << " \\\n";
        for (const auto& pkg : packages)
            os << "    " << pkg << " \\\n";
    }
    os << " && rm -rf /var/lib/apt/lists/*\n";
}

void render_r_packages(std::ostream& os, const ImageSpec& spec) {
    if (spec.r_packages.empty())
        return;
    std::vector<std::string> packages = spec.r_packages;
    std::sort(packages.begin(), packages.end());
    os << "RUN install2.r --error --repos \"${PKG_REPO_URL}\"";
    for (const auto& pkg : packages)
        os << " \\\n    " << pkg;
    os << '\n';
}

}  // namespace

RenderedImage generate_dockerfile(const StackManifest& m, const ImageSpec& spec,
                                  const SnapshotResolution& res, const ResolvedTag& rtag) {
    RenderedImage out;
    out.image = spec.name;
    out.tag = build_tag(rtag);
    out.reference = m.image_reference(spec) + ':' + out.tag.render();
    out.size_mb = spec.compressed_size_mb;
    out.labels = spec.labels;

    std::ostringstream os;

    // FROM
    if (spec.parent) {
        const ImageSpec& parent = m.image(spec.parent->name);
        Tag parent_tag = out.tag;
        if (spec.parent->pinned_tag) {
            const Tag& pinned = *spec.parent->pinned_tag;
            parent_tag = pinned.kind() == TagKind::Partial
                             ? Tag::exact(std::get<Version>(resolve_tag(pinned, m.tag_universe())))
                             : pinned;
        }
        out.canonical_inputs.parent_image = parent.name;
        out.canonical_inputs.parent_tag = parent_tag;
        out.canonical_inputs.parent_ref = m.image_reference(parent) + ':' + parent_tag.render();
    } else {
        const std::string codename = spec.base_os ? *spec.base_os : res.os_codename;
        out.canonical_inputs.parent_ref = "debian:" + codename;
    }
    os << "FROM " << out.canonical_inputs.parent_ref << '\n';

    // ARG, sorted by name
    std::vector<DeclaredArg> args = spec.build_args;
    std::sort(args.begin(), args.end(),
              [](const DeclaredArg& a, const DeclaredArg& b) { return a.name < b.name; });
    bool declares_build_date = false;
    bool declares_r_version = false;
    for (const auto& arg : args) {
        declares_build_date |= arg.name == "BUILD_DATE";
        declares_r_version |= arg.name == "R_VERSION";
        os << "ARG " << arg.name << '=' << arg_default(arg, res) << '\n';
    }

    // LABEL, sorted by key
    for (const auto& [key, value] : rendered_labels(spec))
        os << "LABEL " << key << "=\"" << value << "\"\n";

    // ENV: the pinned package repository. When the image exposes
    // BUILD_DATE the URL consumes the argument instead of inlining the
    // date.
    if (declares_build_date) {
        std::string prefix = res.repo_url.substr(0, res.repo_url.size() - 10);
        os << "ENV PKG_REPO_URL=" << prefix << "${BUILD_DATE}\n";
    } else {
        os << "ENV PKG_REPO_URL=" << res.repo_url << '\n';
    }

    render_system_packages(os, m, spec);
    if (declares_r_version)
        os << "RUN build-r-from-source \"${R_VERSION}\"\n";
    render_r_packages(os, spec);

    // Services: EXPOSE in ascending port order, then the supervised
    // entrypoint.
    std::vector<ServiceSpec> services = spec.services;
    std::sort(services.begin(), services.end(),
              [](const ServiceSpec& a, const ServiceSpec& b) { return a.port < b.port; });
    for (const auto& svc : services) {
        if (svc.port == 0)
            throw_domain("service '" + svc.name + "' of image '" + spec.name + "' has no port");
        os << "EXPOSE " << svc.port << '\n';
    }
    if (!services.empty()) {
        for (const auto& svc : services)
            os << "# " << svc.name << " (port " << svc.port << ") runs under the init supervisor\n";
        os << "CMD [\"/init\"]\n";
    }

    out.dockerfile = os.str();
    out.canonical_inputs.snapshot_date = concrete_date_of(res);
    out.canonical_inputs.spec_hash = sha256_digest(render_image_spec(spec));

    if (!m.channels.empty()) {
        out.aux_files["apt-preferences"] =
            generate_apt_pin(std::set<std::string>(m.channels.begin(), m.channels.end()));
    }
    return out;
}

std::string generate_apt_pin(const std::set<std::string>& channels) {
    for (const auto& channel : channels)
        if (channel != "testing" && channel != "unstable")
            throw_domain("unknown apt channel '" + channel + "' (expected testing or unstable)");

    // Highest priority first: testing is the default release, unstable
    // is available on request via `apt-get -t unstable`.
    std::string out;
    auto stanza = [&](const std::string& channel, int priority) {
        if (!channels.count(channel))
            return;
        if (!out.empty())
            out += '\n';
        out += "Package: *\nPin: release a=" + channel + "\nPin-Priority: " +
               std::to_string(priority) + '\n';
    };
    stanza("testing", 900);
    stanza("unstable", 300);
    return out;
}

std::string render_launch_command(const std::string& image, const Tag& tag,
                                  const std::vector<ServiceSpec>& services,
                                  const std::map<std::string, std::string>& env) {
    std::string cmd = "docker run";
    std::vector<unsigned> ports;
    for (const auto& svc : services)
        ports.push_back(svc.port);
    std::sort(ports.begin(), ports.end());
    for (unsigned port : ports)
        cmd += " -p " + std::to_string(port) + ':' + std::to_string(port);
    for (const auto& [key, value] : env)
        cmd += " -e " + key + '=' + value;
    cmd += ' ' + image;
    if (tag.kind() != TagKind::Latest)
        cmd += ':' + tag.render();
    return cmd;
}

std::vector<RenderedImage> generate_stack(const StackManifest& m, const Tag& tag, const Date& today,
                                          std::string_view repo_base, const BuildArgs& overrides) {
    ResolvedVersion resolved;
    if (tag.is_channel() && tag.kind() != TagKind::Latest) {
        resolved = tag.kind() == TagKind::Devel ? Channel::Devel : Channel::Testing;
    } else if (tag.kind() == TagKind::Latest && m.tag_universe().empty()) {
        resolved = Channel::Latest;
    } else {
        resolved = resolve_tag(tag, m.tag_universe());
    }
    SnapshotResolution res = resolve_snapshot(resolved, m, today, repo_base);
    res = apply_overrides(std::move(res), overrides, m, today, repo_base);

    std::vector<RenderedImage> out;
    for (const auto& name : build_order(m, tag)) {
        ResolvedTag rtag{tag, resolved, name};
        out.push_back(generate_dockerfile(m, m.image(name), res, rtag));
    }
    return out;
}

std::vector<std::filesystem::path> write_rendered_image(const std::filesystem::path& out_dir,
                                                        const std::string& stack,
                                                        const RenderedImage& rendered) {
    namespace fs = std::filesystem;
    fs::path dir = out_dir / stack / rendered.image / rendered.tag.render();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw_io("cannot create '" + dir.string() + "': " + ec.message());

    std::vector<fs::path> written;
    auto write_file = [&](const fs::path& path, const std::string& contents) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out || !(out << contents) || !out.flush())
            throw_io("cannot write '" + path.string() + "'");
        written.push_back(path);
    };
    write_file(dir / "Dockerfile", rendered.dockerfile);
    for (const auto& [name, contents] : rendered.aux_files)
        write_file(dir / name, contents);
    return written;
}

}  // namespace stackctl

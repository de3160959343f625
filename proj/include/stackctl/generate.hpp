#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stackctl/model.hpp"
#include "stackctl/resolve.hpp"
#include "stackctl/snapshot.hpp"

namespace stackctl {

// Everything that feeds the build digest for one rendered image.
struct CanonicalInputs {
    std::string parent_ref;     // the FROM reference
    std::string parent_image;   // bare parent name; empty for the stack root
    Tag parent_tag;             // tag the parent is tracked at
    std::string snapshot_date;  // concrete YYYY-MM-DD
    std::string spec_hash;      // content hash of the image's manifest section

    bool operator==(const CanonicalInputs&) const = default;
};

struct RenderedImage {
    std::string image;
    Tag tag;                // the tag this render builds
    std::string reference;  // namespaced image:tag
    std::string dockerfile;
    std::map<std::string, std::string> aux_files;  // file name -> contents
    CanonicalInputs canonical_inputs;
    double size_mb = 0;
    LabelSet labels;

    bool operator==(const RenderedImage&) const = default;
};

// Renders a deterministic Dockerfile: FROM pins the parent to the exact
// resolved version (channels pass through by name, partial tags never
// appear), ARG lines cover the declared build arguments, ENV fixes the
// package repository to the resolved snapshot, labels are emitted in
// sorted key order, and each declared service gets an EXPOSE plus an
// init-supervised CMD.
RenderedImage generate_dockerfile(const StackManifest& m, const ImageSpec& spec,
                                  const SnapshotResolution& res, const ResolvedTag& tag);

// apt preferences pinning the testing channel at 900 and unstable at
// 300. Channels outside {testing, unstable} are rejected.
std::string generate_apt_pin(const std::set<std::string>& channels);

// One-line engine invocation: -p per service port (ascending), -e per
// environment entry (sorted by key), image reference last; the latest
// tag is left implicit.
std::string render_launch_command(const std::string& image, const Tag& tag,
                                  const std::vector<ServiceSpec>& services,
                                  const std::map<std::string, std::string>& env);

// Renders every image available at the tag, topologically ordered.
std::vector<RenderedImage> generate_stack(const StackManifest& m, const Tag& tag,
                                          const Date& today,
                                          std::string_view repo_base = kDefaultRepoBase,
                                          const BuildArgs& overrides = {});

// Writes Dockerfile and aux files under out/<stack>/<image>/<tag>/ and
// returns the paths written.
std::vector<std::filesystem::path> write_rendered_image(const std::filesystem::path& out_dir,
                                                        const std::string& stack,
                                                        const RenderedImage& rendered);

}  // namespace stackctl

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stackctl/model.hpp"

namespace stackctl {

enum class Severity { Error, Warning };

std::string_view to_string(Severity s);

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string image;  // empty for stack-level findings
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

// Parses the line-oriented manifest format (see docs/manifest-format.md).
// Malformed text raises errc::syntax with line/column; structural
// problems that make the manifest unusable (duplicate image names,
// dangling parent references, inheritance cycles) raise errc::domain.
// base_dir anchors `include =` directives in the [calendar] section.
StackManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = ".");

StackManifest load_manifest(const std::filesystem::path& path);

// Calendar fixture format: one `version<TAB>date` pair per line.
SnapshotCalendar load_calendar_entries(const std::filesystem::path& path, SnapshotCalendar into = {});

// Canonical text form; parse_manifest(render_manifest(m)) == m for any
// manifest that parses.
std::string render_manifest(const StackManifest& m);

// Canonical text of a single [image] section; the basis of the spec
// hash that feeds build digests.
std::string render_image_spec(const ImageSpec& img);

// Checks every manifest invariant and returns one diagnostic per
// violation; empty means the manifest is well formed. Never throws.
std::vector<Diagnostic> validate_manifest(const StackManifest& m);

}  // namespace stackctl

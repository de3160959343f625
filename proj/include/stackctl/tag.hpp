#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <variant>

#include "stackctl/version.hpp"

namespace stackctl {

enum class TagKind {
    Latest,
    Devel,
    Testing,
    Partial,  // 1 or 2 version components
    Exact,    // 3 components
};

std::string_view to_string(TagKind k);

// An image tag: one of the named channels (latest/devel/testing), a
// partial version prefix, or an exact version. parse∘render is the
// identity on valid tag strings.
class Tag {
public:
    Tag() = default;

    static Tag latest() { return Tag(TagKind::Latest, {}, 0); }
    static Tag devel() { return Tag(TagKind::Devel, {}, 0); }
    static Tag testing() { return Tag(TagKind::Testing, {}, 0); }
    static Tag partial(unsigned major);
    static Tag partial(unsigned major, unsigned minor);
    static Tag exact(const Version& v);

    TagKind kind() const { return kind_; }
    bool is_channel() const {
        return kind_ == TagKind::Latest || kind_ == TagKind::Devel || kind_ == TagKind::Testing;
    }
    bool is_numeric() const { return kind_ == TagKind::Partial || kind_ == TagKind::Exact; }

    // Number of version components carried (0 for channels).
    int component_count() const { return ncomponents_; }
    unsigned component(int i) const { return components_[static_cast<size_t>(i)]; }

    // Only valid for Exact tags.
    Version exact_version() const;

    // True when this tag's components are a leading prefix of v.
    bool prefix_of(const Version& v) const;

    std::string render() const;

    auto operator<=>(const Tag&) const = default;

private:
    Tag(TagKind k, std::array<unsigned, 3> c, int n) : kind_(k), components_(c), ncomponents_(n) {}

    TagKind kind_ = TagKind::Latest;
    std::array<unsigned, 3> components_{0, 0, 0};
    int ncomponents_ = 0;
};

// Grammar: `latest` | `devel` | `testing` | N | N.N | N.N.N, decimal
// components without leading zeros. Anything else is an error.
Tag parse_tag(std::string_view s);

// What a tag resolves to: a concrete version for numeric tags and
// Latest, or a named channel. Channels never resolve to versions and
// numeric tags never resolve to channels. Latest appears as a channel
// only on stacks with no versioned tags, where it cannot resolve to a
// number.
enum class Channel { Devel, Testing, Latest };

std::string_view to_string(Channel c);

using ResolvedVersion = std::variant<Version, Channel>;

std::string to_string(const ResolvedVersion& rv);

}  // namespace stackctl

// Shared helpers for the unit and acceptance suites: fixture loading,
// deterministic random generators, and the brute-force oracles the
// implementation is checked against. Everything here stays independent
// of the code paths under test (reachability is a plain BFS over an
// explicit edge list, alias enumeration exhausts the candidate tag
// space).
#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stackctl/manifest.hpp"
#include "stackctl/model.hpp"
#include "stackctl/resolve.hpp"

namespace testsupport {

using namespace stackctl;

inline std::filesystem::path fixtures_dir() { return STACKCTL_FIXTURES_DIR; }

inline StackManifest versioned_fixture() {
    return load_manifest(fixtures_dir() / "rocker-versioned.manifest");
}

inline StackManifest testing_fixture() {
    return load_manifest(fixtures_dir() / "rocker-testing.manifest");
}

// The nine versions with built images.
inline std::vector<Version> table3_universe() {
    return {Version{3, 1, 0}, Version{3, 2, 0}, Version{3, 3, 0},
            Version{3, 3, 1}, Version{3, 3, 2}, Version{3, 3, 3},
            Version{3, 4, 0}, Version{3, 4, 1}, Version{3, 4, 2}};
}

// Every tag that could possibly resolve to a member of the universe:
// each member's exact tag and partial prefixes, plus latest.
inline std::vector<Tag> candidate_tags(const std::vector<Version>& universe) {
    std::set<Tag> out{Tag::latest()};
    for (const Version& v : universe) {
        out.insert(Tag::exact(v));
        out.insert(Tag::partial(v.major));
        out.insert(Tag::partial(v.major, v.minor));
    }
    return {out.begin(), out.end()};
}

// Oracle for alias_set: filter the exhaustive candidate list through
// resolve_tag.
inline std::set<Tag> alias_set_oracle(const Version& v, const std::vector<Version>& universe) {
    std::set<Tag> out;
    for (const Tag& t : candidate_tags(universe)) {
        try {
            if (std::get<Version>(resolve_tag(t, universe)) == v)
                out.insert(t);
        } catch (const error&) {
        }
    }
    return out;
}

inline std::vector<Version> random_universe(std::mt19937& rng, int max_size = 20) {
    std::uniform_int_distribution<int> size_dist(1, max_size);
    std::uniform_int_distribution<unsigned> comp(0, 4);
    std::set<Version> out;
    int n = size_dist(rng);
    while (static_cast<int>(out.size()) < n)
        out.insert(Version{comp(rng), comp(rng), comp(rng)});
    return {out.begin(), out.end()};
}

// A random single-root stack: node i > 0 hangs off a uniformly chosen
// earlier node.
struct RandomDag {
    StackManifest manifest;
    std::vector<std::pair<std::string, std::string>> edges;  // parent -> child
};

inline RandomDag random_dag(std::mt19937& rng, int max_nodes = 10) {
    std::uniform_int_distribution<int> size_dist(1, max_nodes);
    int n = size_dist(rng);
    RandomDag out;
    out.manifest.stack_name = "random";
    for (int i = 0; i < n; ++i) {
        ImageSpec img;
        img.name = "img" + std::to_string(i);
        img.compressed_size_mb = 100 + i;
        if (i > 0) {
            std::uniform_int_distribution<int> parent_dist(0, i - 1);
            std::string parent = "img" + std::to_string(parent_dist(rng));
            img.parent = ParentRef{parent, std::nullopt};
            out.edges.emplace_back(parent, img.name);
        }
        out.manifest.images.push_back(std::move(img));
    }
    return out;
}

// Independent reachability: BFS over the explicit edge list.
inline std::set<std::string> reachable_oracle(
    const std::vector<std::pair<std::string, std::string>>& edges, const std::string& start) {
    std::set<std::string> out{start};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [parent, child] : edges)
            if (out.count(parent) && out.insert(child).second)
                grew = true;
    }
    return out;
}

// Independent acyclicity check: depth-first walk over parent edges.
inline bool acyclic_oracle(const StackManifest& m) {
    for (const auto& img : m.images) {
        std::set<std::string> seen;
        const ImageSpec* cur = &img;
        while (cur->parent) {
            if (!seen.insert(cur->name).second)
                return false;
            cur = m.find_image(cur->parent->name);
            if (!cur)
                break;
        }
        if (cur && !seen.insert(cur->name).second)
            return false;
    }
    return true;
}

}  // namespace testsupport

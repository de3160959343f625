#include <doctest.h>

#include <fstream>
#include <sstream>

#include "stackctl/errors.hpp"
#include "stackctl/manifest.hpp"
#include "support.hpp"

using namespace stackctl;
using namespace testsupport;

namespace {

std::string fixture_text(const char* name) {
    std::ifstream in(fixtures_dir() / name);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Applies a single textual mutation to a fixture; the needle must occur
// exactly once.
std::string mutate(std::string text, const std::string& needle, const std::string& replacement) {
    size_t pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    REQUIRE(text.find(needle, pos + 1) == std::string::npos);
    return text.replace(pos, needle.size(), replacement);
}

int error_count(const std::vector<Diagnostic>& diags) {
    int n = 0;
    for (const auto& d : diags)
        n += d.severity == Severity::Error;
    return n;
}

}  // namespace

TEST_CASE("versioned fixture parses to the published chain") {
    StackManifest m = versioned_fixture();
    CHECK(m.stack_name == "rocker-versioned");
    CHECK(m.name_space == "rocker");
    REQUIRE(m.images.size() == 5);

    CHECK(m.root().name == "r-ver");
    CHECK(m.image("rstudio").parent->name == "r-ver");
    CHECK(m.image("tidyverse").parent->name == "rstudio");
    CHECK(m.image("verse").parent->name == "tidyverse");
    CHECK(m.image("geospatial").parent->name == "verse");

    CHECK(m.tag_universe() == table3_universe());
    CHECK(m.image_universe("verse").size() == 6);
    CHECK(m.image_universe("r-ver").size() == 9);
    CHECK(m.calendar.epoch == make_date(2014, 9, 17));
    CHECK(m.calendar.entries.size() == 11);

    CHECK(validate_manifest(m).empty());
}

TEST_CASE("testing fixture parses to the published star") {
    StackManifest m = testing_fixture();
    REQUIRE(m.images.size() == 7);
    CHECK(m.root().name == "r-base");
    CHECK(m.children_of("r-base") ==
          std::vector<std::string>{"drd", "r-devel", "r-devel-san", "r-devel-ubsan-clang",
                                   "rstudio", "shiny"});
    CHECK(m.tag_universe().empty());
    CHECK(m.channels == std::vector<std::string>{"testing", "unstable"});
    CHECK(m.image("r-base").name_space == std::optional<std::string>(""));
    CHECK(m.image_reference(m.image("r-base")) == "r-base");
    CHECK(m.image_reference(m.image("shiny")) == "rocker/shiny");

    CHECK(validate_manifest(m).empty());
}

TEST_CASE("smallest legal manifest: one parentless image") {
    StackManifest m = parse_manifest("[stack]\nname = mini\n[image only]\nsize_mb = 10\n");
    CHECK(m.images.size() == 1);
    CHECK(m.root().name == "only");
    CHECK(validate_manifest(m).empty());
}

TEST_CASE("reversing the tail edge creates a cycle naming both images") {
    // geospatial already builds on verse; pointing verse at geospatial
    // closes the two-cycle.
    std::string text = mutate(fixture_text("rocker-versioned.manifest"), "parent = tidyverse",
                              "parent = geospatial");
    try {
        parse_manifest(text, fixtures_dir());
        FAIL("expected a cycle error");
    } catch (const error& e) {
        CHECK(e.code() == errc::domain);
        CHECK(std::string(e.what()).find("verse") != std::string::npos);
        CHECK(std::string(e.what()).find("geospatial") != std::string::npos);
        CHECK(std::string(e.what()).find("cycle") != std::string::npos);
    }
}

TEST_CASE("dangling parent reference is rejected") {
    std::string text = mutate(fixture_text("rocker-versioned.manifest"), "parent = tidyverse",
                              "parent = hadleyverse");
    CHECK_THROWS_WITH_AS(parse_manifest(text, fixtures_dir()), doctest::Contains("hadleyverse"),
                         error);
}

TEST_CASE("duplicate image names are rejected") {
    std::string text = fixture_text("rocker-versioned.manifest") + "\n[image verse]\nsize_mb = 1\n";
    try {
        parse_manifest(text, fixtures_dir());
        FAIL("expected a duplicate-image error");
    } catch (const error& e) {
        CHECK(e.code() == errc::domain);
        CHECK(std::string(e.what()).find("verse") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_manifest("[stack]\nname = x\nbogus line\n");
        FAIL("expected a syntax error");
    } catch (const error& e) {
        CHECK(e.code() == errc::syntax);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_manifest("[bogus]\n"), error);
    CHECK_THROWS_AS(parse_manifest("[stack]\nunknown_key = 1\n"), error);
    CHECK_THROWS_AS(parse_manifest("key = outside\n"), error);
    CHECK_THROWS_AS(parse_manifest("[calendar]\nepoch = not-a-date\n"), error);
    CHECK_THROWS_AS(parse_manifest("[image x]\nservices = rstudio\n"), error);
    CHECK_THROWS_AS(parse_manifest("[image x]\npolicy = hourly: latest\n"), error);
    CHECK_THROWS_AS(parse_manifest("[image x]\npolicy = nightly: partial\n"), error);
    CHECK_THROWS_AS(parse_manifest("[image x]\nbuild_args = PATH\n"), error);
}

TEST_CASE("two roots produce exactly one diagnostic") {
    std::string text =
        mutate(fixture_text("rocker-versioned.manifest"), "parent = r-ver\n", "");
    StackManifest m = parse_manifest(text, fixtures_dir());
    auto diags = validate_manifest(m);
    REQUIRE(error_count(diags) == 1);
    CHECK(diags[0].message.find("root") != std::string::npos);
}

TEST_CASE("root availability hole produces exactly one diagnostic") {
    std::string text =
        mutate(fixture_text("rocker-versioned.manifest"), "3.1.0 = r-ver", "3.1.0 =");
    StackManifest m = parse_manifest(text, fixtures_dir());
    CHECK(m.availability.count(Version{3, 1, 0}) == 1);  // still in the universe
    auto diags = validate_manifest(m);
    REQUIRE(error_count(diags) == 1);
    CHECK(diags[0].image == "r-ver");
}

TEST_CASE("child available without its parent is flagged") {
    std::string text = mutate(fixture_text("rocker-versioned.manifest"), "3.3.0 = r-ver",
                              "3.3.0 = r-ver, tidyverse");
    auto diags = validate_manifest(parse_manifest(text, fixtures_dir()));
    REQUIRE(error_count(diags) == 1);
    CHECK(diags[0].image == "tidyverse");
    CHECK(diags[0].message.find("rstudio") != std::string::npos);
}

TEST_CASE("validate flags programmatic invariant violations") {
    StackManifest m = versioned_fixture();

    SUBCASE("service port out of range") {
        m.images[1].services.push_back(ServiceSpec{"bad", 70000});
        CHECK(error_count(validate_manifest(m)) == 1);
    }
    SUBCASE("negative size") {
        m.images[0].compressed_size_mb = -1;
        CHECK(error_count(validate_manifest(m)) == 1);
    }
    SUBCASE("empty label value") {
        m.images[0].labels.extra["maintainer"] = "";
        CHECK(error_count(validate_manifest(m)) == 1);
    }
    SUBCASE("overlapping policies") {
        m.images[0].policies.push_back(BuildPolicy{PolicyKind::Weekly, {TagKind::Latest}});
        CHECK(error_count(validate_manifest(m)) == 1);
    }
    SUBCASE("built versions with no exact policy") {
        m.images[0].policies.pop_back();  // drop the monthly: exact policy
        CHECK(error_count(validate_manifest(m)) == 1);
    }
    SUBCASE("unordered eras") {
        std::swap(m.os_eras[0], m.os_eras[1]);
        CHECK(error_count(validate_manifest(m)) == 1);
    }
    SUBCASE("non-monotone calendar") {
        std::swap(m.calendar.entries[0], m.calendar.entries[1]);
        CHECK(error_count(validate_manifest(m)) == 2);  // version and date order both break
    }
    SUBCASE("duplicate build argument") {
        m.images[0].build_args.push_back(DeclaredArg{"R_VERSION", std::nullopt});
        CHECK(error_count(validate_manifest(m)) == 1);
    }
}

TEST_CASE("acyclicity holds by independent depth-first search") {
    CHECK(acyclic_oracle(versioned_fixture()));
    CHECK(acyclic_oracle(testing_fixture()));

    StackManifest cyclic;
    cyclic.stack_name = "cyclic";
    ImageSpec a, b;
    a.name = "a";
    a.parent = ParentRef{"b", std::nullopt};
    b.name = "b";
    b.parent = ParentRef{"a", std::nullopt};
    cyclic.images = {a, b};
    CHECK(!acyclic_oracle(cyclic));
    CHECK(error_count(validate_manifest(cyclic)) >= 1);
}

TEST_CASE("render then parse round-trips both fixtures") {
    for (const char* name : {"rocker-versioned.manifest", "rocker-testing.manifest"}) {
        StackManifest m = parse_manifest(fixture_text(name), fixtures_dir());
        StackManifest again = parse_manifest(render_manifest(m));
        CHECK(again == m);
    }
}

TEST_CASE("round-trip preserves uncommon corners") {
    const char* text =
        "[stack]\n"
        "name = corners\n"
        "namespace = org\n"
        "channels = testing, unstable\n"
        "[calendar]\n"
        "epoch = 2014-09-17\n"
        "1.0.0 = 2014-10-01\n"
        "[eras]\n"
        "0.0.0 = jessie\n"
        "[availability]\n"
        "1.0.0 = base\n"
        "[image base]\n"
        "description = has, commas, in, text\n"
        "namespace =\n"
        "build_args = RSTUDIO_VERSION=1.1.383, BUILD_DATE\n"
        "size_mb = 10.5\n"
        "label.maintainer = someone\n"
        "policy = monthly: exact\n"
        "policy = nightly: latest\n"
        "[image child]\n"
        "parent = base:1.0\n"
        "base_os = stretch\n"
        "size_mb = 20\n"
        "policy = on-upstream-change: latest\n";
    StackManifest m = parse_manifest(text);
    StackManifest again = parse_manifest(render_manifest(m));
    CHECK(again == m);
    CHECK(m.image("child").parent->pinned_tag == Tag::partial(1, 0));
    CHECK(m.image("base").description == "has, commas, in, text");
}

TEST_CASE("missing manifest file raises an io error") {
    try {
        load_manifest(fixtures_dir() / "does-not-exist.manifest");
        FAIL("expected io error");
    } catch (const error& e) {
        CHECK(e.code() == errc::io);
    }
}

TEST_CASE("calendar include paths resolve relative to the manifest") {
    StackManifest m = versioned_fixture();
    CHECK(m.calendar.entries.front().version == Version{3, 1, 0});
    CHECK(m.calendar.entries.front().release_date == make_date(2014, 4, 10));
    CHECK(m.calendar.entries.back().version == Version{3, 4, 2});
    CHECK(m.calendar.entries.back().release_date == make_date(2017, 9, 28));

    CHECK_THROWS_AS(parse_manifest("[calendar]\ninclude = nope.txt\n"), error);
}

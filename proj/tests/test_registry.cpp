#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "stackctl/errors.hpp"
#include "stackctl/generate.hpp"
#include "stackctl/registry.hpp"
#include "support.hpp"

using namespace stackctl;
using namespace testsupport;

namespace {

const Date kToday = make_date(2017, 10, 15);

BuildEvent event_for(const RenderedImage& r, const char* at = "2017-10-15T00:00Z") {
    return BuildEvent{parse_timestamp(at), r.image, r.tag, Trigger{TriggerKind::Monthly, ""}};
}

RenderedImage render_one(const StackManifest& m, const std::string& image, const Tag& tag,
                         const Date& today = kToday) {
    for (auto& r : generate_stack(m, tag, today))
        if (r.image == image)
            return r;
    FAIL("image not rendered");
    return {};
}

// Builds and retags every image at every version it is published for,
// oldest first, exactly as the hub would.
RegistryStore build_everything(const StackManifest& m) {
    RegistryStore store;
    for (const auto& [version, names] : m.availability) {
        for (const auto& r : generate_stack(m, Tag::exact(version), kToday)) {
            record_build(store, r, event_for(r));
            retag(store, r.image, version, m.image_universe(r.image));
        }
        (void)names;
    }
    return store;
}

void check_tag_uniqueness(const RegistryStore& store) {
    std::map<std::string, std::map<std::string, int>> owners;
    for (const auto& r : store.records)
        for (const Tag& t : r.tags)
            owners[r.image][t.render()]++;
    for (const auto& [image, tags] : owners)
        for (const auto& [tag, n] : tags)
            REQUIRE_MESSAGE(n == 1, image, ":", tag, " points at ", n, " digests");
}

}  // namespace

TEST_CASE("recording a first build attaches exactly the built tag") {
    StackManifest m = versioned_fixture();
    RegistryStore store;
    RenderedImage rver = render_one(m, "r-ver", Tag::exact(Version{3, 4, 1}));
    const RegistryRecord& rec = record_build(store, rver, event_for(rver));

    CHECK(store.records.size() == 1);
    CHECK(rec.image == "r-ver");
    CHECK(rec.tags == std::set<Tag>{Tag::exact(Version{3, 4, 1})});
    CHECK(rec.digest.substr(0, 7) == "sha256:");
    CHECK(rec.size_mb == 219);
}

TEST_CASE("rebuilding identical inputs refreshes the record in place") {
    StackManifest m = versioned_fixture();
    RegistryStore store;
    RenderedImage rver = render_one(m, "r-ver", Tag::exact(Version{3, 4, 1}));

    std::string first = record_build(store, rver, event_for(rver, "2017-10-15T00:00Z")).digest;
    const RegistryRecord& again = record_build(store, rver, event_for(rver, "2017-11-01T00:00Z"));

    CHECK(store.records.size() == 1);
    CHECK(again.digest == first);
    CHECK(again.built_at == parse_timestamp("2017-11-01T00:00Z"));
    CHECK(again.tags == std::set<Tag>{Tag::exact(Version{3, 4, 1})});
}

TEST_CASE("a newer snapshot yields a new digest and strips the old record's tags") {
    StackManifest m = versioned_fixture();
    RegistryStore store;

    RenderedImage day1 = render_one(m, "r-ver", Tag::latest(), make_date(2017, 10, 15));
    std::string old_digest = record_build(store, day1, event_for(day1)).digest;

    RenderedImage day2 = render_one(m, "r-ver", Tag::latest(), make_date(2017, 10, 16));
    const RegistryRecord& fresh = record_build(store, day2, event_for(day2, "2017-10-16T00:00Z"));

    CHECK(fresh.digest != old_digest);
    REQUIRE(store.records.size() == 2);
    for (const auto& r : store.records)
        if (r.digest == old_digest)
            CHECK(r.tags.empty());
    check_tag_uniqueness(store);
}

TEST_CASE("recording requires the parent build") {
    StackManifest m = versioned_fixture();
    RegistryStore store;
    RenderedImage rstudio = render_one(m, "rstudio", Tag::exact(Version{3, 4, 1}));
    CHECK_THROWS_WITH_AS(record_build(store, rstudio, event_for(rstudio)),
                         doctest::Contains("r-ver"), error);
}

TEST_CASE("mismatched event and render are rejected") {
    StackManifest m = versioned_fixture();
    RegistryStore store;
    RenderedImage rver = render_one(m, "r-ver", Tag::exact(Version{3, 4, 1}));
    BuildEvent wrong = event_for(rver);
    wrong.tag = Tag::exact(Version{3, 4, 2});
    CHECK_THROWS_AS(record_build(store, rver, wrong), error);
}

TEST_CASE("digests chain through parents") {
    StackManifest m = versioned_fixture();
    RegistryStore a;
    RegistryStore b;
    for (const auto& r : generate_stack(m, Tag::exact(Version{3, 4, 1}), kToday)) {
        record_build(a, r, event_for(r));
        record_build(b, r, event_for(r));
    }
    // Same inputs, same digests, independent stores.
    for (size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].digest == b.records[i].digest);

    // A different snapshot date at the root changes every digest below it.
    RegistryStore c;
    for (const auto& r :
         generate_stack(m, Tag::exact(Version{3, 4, 1}), kToday, kDefaultRepoBase,
                        BuildArgs{std::nullopt, make_date(2017, 7, 1), std::nullopt, std::nullopt}))
        record_build(c, r, event_for(r));
    for (size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].digest != c.records[i].digest);
}

TEST_CASE("retag moves exactly the published aliases") {
    StackManifest m = versioned_fixture();
    RegistryStore store = build_everything(m);

    // The newest build of verse carries every alias in its slice.
    const RegistryRecord& top = query(store, "verse", Tag::exact(Version{3, 4, 2}));
    CHECK(top.tags == std::set<Tag>{Tag::exact(Version{3, 4, 2}), Tag::partial(3, 4),
                                    Tag::partial(3), Tag::latest()});
    CHECK(query(store, "verse", Tag::latest()).digest == top.digest);

    const RegistryRecord& mid = query(store, "verse", Tag::exact(Version{3, 3, 3}));
    CHECK(mid.tags == std::set<Tag>{Tag::exact(Version{3, 3, 3}), Tag::partial(3, 3)});

    // Older builds keep only their exact tag.
    CHECK(query(store, "verse", Tag::exact(Version{3, 3, 1})).tags ==
          std::set<Tag>{Tag::exact(Version{3, 3, 1})});

    check_tag_uniqueness(store);
}

TEST_CASE("retag is idempotent") {
    StackManifest m = versioned_fixture();
    RegistryStore store = build_everything(m);
    RegistryStore before = store;

    auto moved = retag(store, "verse", Version{3, 4, 2}, m.image_universe("verse"));
    CHECK(moved.empty());
    CHECK(store == before);

    CHECK_THROWS_AS(retag(store, "verse", Version{3, 1, 0}, m.image_universe("verse")), error);
}

TEST_CASE("queries answer via stored aliases") {
    StackManifest m = versioned_fixture();
    RegistryStore store = build_everything(m);

    // query(image, T) equals query(image, exact(resolve(T))) for every
    // resolvable tag.
    for (const auto& img : m.images) {
        auto universe = m.image_universe(img.name);
        for (const Tag& t : candidate_tags(universe)) {
            Version v;
            try {
                v = std::get<Version>(resolve_tag(t, universe));
            } catch (const error&) {
                CHECK_THROWS_AS(query(store, img.name, t), error);
                continue;
            }
            CHECK(query(store, img.name, t).digest ==
                  query(store, img.name, Tag::exact(v)).digest);
        }
    }

    // Published availability holes surface as not-found.
    CHECK_THROWS_AS(query(store, "verse", Tag::exact(Version{3, 1, 0})), error);
    CHECK_THROWS_AS(query(RegistryStore{}, "verse", Tag::latest()), error);
}

TEST_CASE("tag uniqueness survives random operation sequences") {
    StackManifest m = versioned_fixture();

    // Pre-render everything once; builds at different dates give the
    // latest channel distinct digests to shuffle between.
    std::vector<RenderedImage> pool;
    for (const auto& [version, names] : m.availability) {
        (void)names;
        for (const auto& r : generate_stack(m, Tag::exact(version), kToday))
            pool.push_back(r);
    }
    for (int day = 1; day <= 5; ++day)
        for (const auto& r : generate_stack(m, Tag::latest(), make_date(2017, 10, day)))
            pool.push_back(r);

    std::mt19937 rng(2017);
    RegistryStore store;
    int applied = 0, rejected = 0;
    for (int op = 0; op < 300; ++op) {
        RegistryStore before = store;
        try {
            if (rng() % 3 == 0 && !m.tag_universe().empty()) {
                const auto universe = m.tag_universe();
                const Version v = universe[rng() % universe.size()];
                const ImageSpec& img = m.images[rng() % m.images.size()];
                retag(store, img.name, v, m.image_universe(img.name));
            } else {
                const RenderedImage& r = pool[rng() % pool.size()];
                record_build(store, r, event_for(r));
            }
            ++applied;
        } catch (const error&) {
            // Rejected operations must not corrupt the store.
            CHECK(store == before);
            ++rejected;
        }
        check_tag_uniqueness(store);
    }
    CHECK(applied > 0);
    CHECK(rejected > 0);
}

TEST_CASE("the store file round-trips and replaces atomically") {
    namespace fs = std::filesystem;
    StackManifest m = versioned_fixture();
    RegistryStore store = build_everything(m);

    fs::path dir = fs::temp_directory_path() / "stackctl-registry-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::path file = dir / "registry.json";

    save_registry(store, file);
    RegistryStore loaded = load_registry(file);
    std::sort(store.records.begin(), store.records.end(),
              [](const RegistryRecord& a, const RegistryRecord& b) {
                  return std::tie(a.image, a.digest) < std::tie(b.image, b.digest);
              });
    CHECK(loaded == store);
    CHECK(!fs::exists(dir / "registry.json.tmp"));

    CHECK(load_registry(dir / "absent.json") == RegistryStore{});

    {
        std::ofstream bad(dir / "corrupt.json");
        bad << "{not json";
    }
    try {
        load_registry(dir / "corrupt.json");
        FAIL("expected syntax error");
    } catch (const error& e) {
        CHECK(e.code() == errc::syntax);
    }

    {
        std::ofstream wrong(dir / "schema.json");
        wrong << "{\"schema\": 99, \"records\": []}";
    }
    CHECK_THROWS_AS(load_registry(dir / "schema.json"), error);
    fs::remove_all(dir);
}

#include <doctest.h>

#include <random>

#include "stackctl/errors.hpp"
#include "stackctl/planner.hpp"
#include "support.hpp"

using namespace stackctl;
using namespace testsupport;

TEST_CASE("build order follows availability and the chain") {
    StackManifest m = versioned_fixture();

    CHECK(build_order(m, Tag::exact(Version{3, 4, 1})) ==
          std::vector<std::string>{"r-ver", "rstudio", "tidyverse", "verse", "geospatial"});
    CHECK(build_order(m, Tag::exact(Version{3, 2, 0})) == std::vector<std::string>{"r-ver"});
    CHECK(build_order(m, Tag::partial(3, 3)) ==
          std::vector<std::string>{"r-ver", "rstudio", "tidyverse", "verse", "geospatial"});
    CHECK(build_order(m, Tag::latest()).size() == 5);
    CHECK(build_order(m, Tag::devel()).size() == 5);

    CHECK_THROWS_AS(build_order(m, Tag::exact(Version{9, 9, 9})), error);
}

TEST_CASE("testing stack orders the root first, then children alphabetically") {
    StackManifest m = testing_fixture();
    std::vector<std::string> expected{"r-base",      "drd",     "r-devel", "r-devel-san",
                                      "r-devel-ubsan-clang", "rstudio", "shiny"};
    CHECK(build_order(m, Tag::testing()) == expected);
    CHECK(build_order(m, Tag::devel()) == expected);
    // No versioned tags exist, so latest degrades to a channel here.
    CHECK(build_order(m, Tag::latest()) == expected);
}

TEST_CASE("rebuild sets are transitive closures") {
    StackManifest m = versioned_fixture();
    // Hand-derived on the five-node chain: everything below rstudio.
    CHECK(rebuild_set(m, "rstudio") ==
          std::set<std::string>{"rstudio", "tidyverse", "verse", "geospatial"});
    CHECK(rebuild_set(m, "geospatial") == std::set<std::string>{"geospatial"});

    StackManifest t = testing_fixture();
    CHECK(rebuild_set(t, "r-base").size() == 7);
    CHECK(rebuild_set(t, "drd") == std::set<std::string>{"drd"});

    CHECK_THROWS_AS(rebuild_set(m, "hadleyverse"), error);
}

TEST_CASE("rebuild sets match brute-force reachability on random stacks") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 500; ++round) {
        RandomDag dag = random_dag(rng);
        for (const auto& img : dag.manifest.images)
            CHECK(rebuild_set(dag.manifest, img.name) == reachable_oracle(dag.edges, img.name));
    }
}

TEST_CASE("topological order places every parent before its children") {
    std::mt19937 rng(4243);
    for (int round = 0; round < 200; ++round) {
        RandomDag dag = random_dag(rng);
        auto order = topo_order(dag.manifest);
        CHECK(order.size() == dag.manifest.images.size());
        auto index = [&](const std::string& name) {
            return std::find(order.begin(), order.end(), name) - order.begin();
        };
        for (const auto& [parent, child] : dag.edges)
            CHECK(index(parent) < index(child));
        CHECK(topo_order(dag.manifest) == order);  // deterministic
    }
}

TEST_CASE("incremental sizes are differences of cumulative sizes") {
    StackManifest m = versioned_fixture();

    CHECK(incremental_size(m, "r-ver", "rstudio") == 115.0);
    CHECK(incremental_size(m, "verse", "verse") == 0);
    // 1300 - 219, from the published cumulative sizes.
    CHECK(incremental_size(m, "r-ver", "geospatial") == 1081.0);

    CHECK_THROWS_AS(incremental_size(m, "rstudio", "r-ver"), error);  // wrong direction
    CHECK_THROWS_AS(incremental_size(m, "geospatial", "verse"), error);

    StackManifest t = testing_fixture();
    CHECK_THROWS_AS(incremental_size(t, "drd", "shiny"), error);  // siblings
    CHECK(incremental_size(t, "r-base", "shiny") == 155.0);
}

TEST_CASE("shrinking children draw a warning, monotone stacks none") {
    StackManifest m = versioned_fixture();
    CHECK(size_warnings(m).empty());
    CHECK(size_warnings(testing_fixture()).empty());

    m.images[4].compressed_size_mb = 100;  // geospatial below verse
    auto warnings = size_warnings(m);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].severity == Severity::Warning);
    CHECK(warnings[0].image == "geospatial");

    // Warnings imply a negative incremental size, never the reverse.
    CHECK(incremental_size(m, "verse", "geospatial") < 0);
}

TEST_CASE("plans order steps topologically without duplicates") {
    StackManifest m = testing_fixture();
    BuildPlan plan = plan_for_change(m, "r-base");
    REQUIRE(plan.steps.size() == 7);
    CHECK(plan.steps[0].image == "r-base");
    CHECK(plan.steps[0].reason == BuildReason::SourceChange);
    for (size_t i = 1; i < plan.steps.size(); ++i)
        CHECK(plan.steps[i].reason == BuildReason::RootChange);
    // rstudio rebuilds under its published testing tag.
    for (const auto& step : plan.steps)
        CHECK(step.tag == (step.image == "rstudio" ? Tag::testing() : Tag::latest()));

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& step : plan.steps)
        CHECK(seen.emplace(step.image, step.tag.render()).second);
}

TEST_CASE("mid-chain changes mark descendants as parent-change") {
    StackManifest m = versioned_fixture();
    BuildPlan plan = plan_for_change(m, "tidyverse");
    REQUIRE(plan.steps.size() == 3);
    CHECK(plan.steps[0] == BuildStep{"tidyverse", Tag::latest(), BuildReason::SourceChange});
    CHECK(plan.steps[1] == BuildStep{"verse", Tag::latest(), BuildReason::ParentChange});
    CHECK(plan.steps[2] == BuildStep{"geospatial", Tag::latest(), BuildReason::ParentChange});
}

TEST_CASE("tag plans pin numeric requests to the resolved version") {
    StackManifest m = versioned_fixture();
    BuildPlan plan = plan_for_tag(m, Tag::partial(3, 3));
    REQUIRE(plan.steps.size() == 5);
    for (const auto& step : plan.steps) {
        CHECK(step.tag == Tag::exact(Version{3, 3, 3}));
        CHECK(step.reason == BuildReason::Schedule);
    }

    BuildPlan old = plan_for_tag(m, Tag::exact(Version{3, 2, 0}));
    REQUIRE(old.steps.size() == 1);
    CHECK(old.steps[0].image == "r-ver");
}

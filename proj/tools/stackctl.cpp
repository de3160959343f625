#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stackctl/errors.hpp"
#include "stackctl/generate.hpp"
#include "stackctl/json_io.hpp"
#include "stackctl/manifest.hpp"
#include "stackctl/planner.hpp"
#include "stackctl/registry.hpp"
#include "stackctl/resolve.hpp"
#include "stackctl/schedule.hpp"
#include "stackctl/snapshot.hpp"

namespace {

using namespace stackctl;

struct CliConfig {
    std::string manifest_path = "fixtures/rocker-versioned.manifest";
    std::string today_override;
    std::string output_dir = "out";
    std::string registry_path = "registry.json";
    std::string repo_base = std::string(kDefaultRepoBase);
    std::string format = "json";
};

Date today_of(const CliConfig& cfg) {
    if (!cfg.today_override.empty())
        return parse_date(cfg.today_override);
    return Date(std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()));
}

StackManifest manifest_of(const CliConfig& cfg) { return load_manifest(cfg.manifest_path); }

bool table_mode(const CliConfig& cfg) { return cfg.format == "table"; }

// Malformed tag/version arguments are domain failures (exit 1), unlike
// unreadable files or manifests (exit 2).
Tag parse_tag_arg(const std::string& text) {
    try {
        return parse_tag(text);
    } catch (const error& e) {
        throw_domain(e.what());
    }
}

Version parse_version_arg(const std::string& text) {
    try {
        return parse_version(text);
    } catch (const error& e) {
        throw_domain(e.what());
    }
}

// Channel-aware resolution for build-facing commands: devel/testing are
// channels, and latest degrades to a channel on a stack with no
// versioned tags.
ResolvedVersion resolve_for_build(const Tag& tag, const std::vector<Version>& universe) {
    if (tag.kind() == TagKind::Devel)
        return Channel::Devel;
    if (tag.kind() == TagKind::Testing)
        return Channel::Testing;
    if (tag.kind() == TagKind::Latest && universe.empty())
        return Channel::Latest;
    return resolve_tag(tag, universe);
}

void print_record(const CliConfig& cfg, const RegistryRecord& record) {
    if (!table_mode(cfg)) {
        std::cout << to_json(record).dump() << '\n';
        return;
    }
    std::cout << "image:    " << record.image << '\n';
    std::cout << "digest:   " << record.digest << '\n';
    std::cout << "tags:     ";
    bool first = true;
    for (const Tag& t : record.tags) {
        std::cout << (first ? "" : ", ") << t.render();
        first = false;
    }
    std::cout << '\n';
    std::cout << "built_at: " << format_timestamp(record.built_at) << '\n';
    std::cout << "size_mb:  " << record.size_mb << '\n';
}

int cmd_validate(const CliConfig& cfg) {
    StackManifest m = manifest_of(cfg);
    auto diagnostics = validate_manifest(m);
    bool failed = false;
    for (const auto& d : diagnostics) {
        std::cerr << to_string(d) << '\n';
        failed |= d.severity == Severity::Error;
    }
    return failed ? 1 : 0;
}

int cmd_resolve(const CliConfig& cfg, const std::string& image, const std::string& tag_text) {
    StackManifest m = manifest_of(cfg);
    m.image(image);  // throws on unknown image
    ResolvedVersion resolved = resolve_tag(parse_tag_arg(tag_text), m.image_universe(image));
    std::cout << image << ':' << to_string(resolved) << '\n';
    return 0;
}

int cmd_snapshot(const CliConfig& cfg, const std::string& tag_text, const std::string& image) {
    StackManifest m = manifest_of(cfg);
    std::vector<Version> universe = image.empty() ? m.tag_universe() : m.image_universe(image);
    if (!image.empty())
        m.image(image);
    ResolvedVersion resolved = resolve_for_build(parse_tag_arg(tag_text), universe);
    SnapshotResolution res = resolve_snapshot(resolved, m, today_of(cfg), cfg.repo_base);
    if (table_mode(cfg)) {
        std::cout << "version:      " << to_string(res.version) << '\n';
        std::cout << "snapshot:     " << res.repo_url.substr(res.repo_url.size() - 10)
                  << (is_current(res.snapshot_date) ? " (tracks current date)" : "") << '\n';
        std::cout << "repo_url:     " << res.repo_url << '\n';
        std::cout << "os_codename:  " << res.os_codename << '\n';
    } else {
        std::cout << to_json(res).dump() << '\n';
    }
    return 0;
}

int cmd_generate(const CliConfig& cfg, const std::string& tag_text, const std::string& build_date,
                 const std::string& r_version) {
    StackManifest m = manifest_of(cfg);
    BuildArgs overrides;
    if (!build_date.empty())
        overrides.build_date = parse_date(build_date);
    if (!r_version.empty())
        overrides.r_version = parse_version_arg(r_version);
    auto rendered = generate_stack(m, parse_tag_arg(tag_text), today_of(cfg), cfg.repo_base, overrides);
    for (const auto& image : rendered)
        for (const auto& path : write_rendered_image(cfg.output_dir, m.stack_name, image))
            std::cout << path.string() << '\n';
    return 0;
}

int cmd_plan(const CliConfig& cfg, const std::string& changed, const std::string& tag_text) {
    StackManifest m = manifest_of(cfg);
    for (const auto& warning : size_warnings(m))
        std::cerr << to_string(warning) << '\n';
    BuildPlan plan = changed.empty() ? plan_for_tag(m, parse_tag_arg(tag_text)) : plan_for_change(m, changed);
    if (table_mode(cfg)) {
        for (const auto& step : plan.steps)
            std::cout << step.image << "  " << step.tag.render() << "  " << to_string(step.reason)
                      << '\n';
    } else {
        std::cout << to_json(plan).dump() << '\n';
    }
    return 0;
}

int cmd_schedule(const CliConfig& cfg, const std::string& start_text, int days,
                 const std::string& upstream_file) {
    StackManifest m = manifest_of(cfg);
    std::vector<UpstreamEvent> upstream;
    if (!upstream_file.empty()) {
        std::ifstream in(upstream_file);
        if (!in)
            throw_io("cannot open upstream events file '" + upstream_file + "'");
        upstream = parse_upstream_events(in);
    }
    auto events = simulate(m, parse_timestamp(start_text), days, upstream);
    if (table_mode(cfg)) {
        for (const auto& event : events) {
            std::cout << format_timestamp(event.at) << "  " << event.image << ':'
                      << event.tag.render() << "  " << to_string(event.trigger.kind);
            if (event.trigger.kind == TriggerKind::Upstream)
                std::cout << " (" << event.trigger.upstream_source << ')';
            std::cout << '\n';
        }
    } else {
        std::cout << event_log_lines(events);
    }
    return 0;
}

int cmd_registry_record(const CliConfig& cfg, const std::string& image, const std::string& tag_text,
                        const std::string& built_at_text) {
    StackManifest m = manifest_of(cfg);
    const ImageSpec& spec = m.image(image);
    Tag tag = parse_tag_arg(tag_text);
    ResolvedVersion resolved = resolve_for_build(tag, m.image_universe(image));
    Date today = today_of(cfg);
    SnapshotResolution res = resolve_snapshot(resolved, m, today, cfg.repo_base);
    RenderedImage rendered = generate_dockerfile(m, spec, res, ResolvedTag{tag, resolved, image});

    BuildEvent event;
    event.at = built_at_text.empty() ? midnight(today) : parse_timestamp(built_at_text);
    event.image = rendered.image;
    event.tag = rendered.tag;
    event.trigger = Trigger{TriggerKind::Upstream, "manual"};

    RegistryStore store = load_registry(cfg.registry_path);
    const RegistryRecord& record = record_build(store, rendered, event);
    RegistryRecord copy = record;
    save_registry(store, cfg.registry_path);
    print_record(cfg, copy);
    return 0;
}

int cmd_registry_retag(const CliConfig& cfg, const std::string& image,
                       const std::string& version_text) {
    StackManifest m = manifest_of(cfg);
    m.image(image);
    RegistryStore store = load_registry(cfg.registry_path);
    auto moved = retag(store, image, parse_version_arg(version_text), m.image_universe(image));
    save_registry(store, cfg.registry_path);
    if (table_mode(cfg)) {
        for (const Tag& t : moved)
            std::cout << t.render() << '\n';
    } else {
        std::vector<std::string> names;
        for (const Tag& t : moved)
            names.push_back(t.render());
        std::sort(names.begin(), names.end());
        std::cout << nlohmann::json(names).dump() << '\n';
    }
    return 0;
}

int cmd_registry_query(const CliConfig& cfg, const std::string& image, const std::string& tag_text) {
    RegistryStore store = load_registry(cfg.registry_path);
    print_record(cfg, query(store, image, parse_tag_arg(tag_text)));
    return 0;
}

int cmd_registry_import(const CliConfig& cfg, const std::string& file) {
    if (!std::filesystem::exists(file))
        throw_io("cannot open '" + file + "'");
    RegistryStore incoming = load_registry(file);
    save_registry(incoming, cfg.registry_path);
    std::cerr << "imported " << incoming.records.size() << " record(s)\n";
    return 0;
}

int cmd_registry_export(const CliConfig& cfg, const std::string& file) {
    RegistryStore store = load_registry(cfg.registry_path);
    if (!file.empty()) {
        save_registry(store, file);
        return 0;
    }
    std::vector<RegistryRecord> sorted = store.records;
    std::sort(sorted.begin(), sorted.end(), [](const RegistryRecord& a, const RegistryRecord& b) {
        return std::tie(a.image, a.digest) < std::tie(b.image, b.digest);
    });
    nlohmann::json doc;
    doc["schema"] = 1;
    auto& records = doc["records"] = nlohmann::json::array();
    for (const auto& r : sorted)
        records.push_back(to_json(r));
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int cmd_launch(const CliConfig& cfg, const std::string& image, const std::string& tag_text,
               const std::vector<std::string>& env_pairs) {
    StackManifest m = manifest_of(cfg);
    const ImageSpec& spec = m.image(image);
    std::map<std::string, std::string> env;
    for (const auto& pair : env_pairs) {
        size_t eq = pair.find('=');
        if (eq == std::string::npos)
            throw_domain("environment entry '" + pair + "' must be KEY=VALUE");
        env[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    std::cout << render_launch_command(m.image_reference(spec), parse_tag_arg(tag_text),
                                       spec.services, env)
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stackctl: deterministic image-stack orchestration"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CliConfig cfg;
    app.add_option("--manifest", cfg.manifest_path, "Stack manifest path")
        ->capture_default_str();
    app.add_option("--today", cfg.today_override,
                   "Fixed date (YYYY-MM-DD) used wherever the clock matters");
    app.add_option("--out", cfg.output_dir, "Output directory for generate")
        ->capture_default_str();
    app.add_option("--registry", cfg.registry_path, "Registry store path")->capture_default_str();
    app.add_option("--repo-base", cfg.repo_base, "Base URL for snapshot repositories")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Check the manifest invariants");

    auto* resolve = app.add_subcommand("resolve", "Resolve a tag for an image");
    std::string resolve_image, resolve_tag_text;
    resolve->add_option("image", resolve_image)->required();
    resolve->add_option("tag", resolve_tag_text)->required();

    auto* snapshot = app.add_subcommand("snapshot", "Resolve the snapshot pin for a tag");
    std::string snapshot_tag, snapshot_image;
    snapshot->add_option("tag", snapshot_tag)->required();
    snapshot->add_option("--image", snapshot_image, "Resolve against one image's tag universe");

    auto* generate = app.add_subcommand("generate", "Render Dockerfiles for every image at a tag");
    std::string generate_tag, generate_build_date, generate_r_version;
    generate->add_option("tag", generate_tag)->required();
    generate->add_option("--build-date", generate_build_date, "Override the snapshot date");
    generate->add_option("--r-version", generate_r_version, "Override the runtime version");

    auto* plan = app.add_subcommand("plan", "Compute a rebuild plan");
    std::string plan_changed, plan_tag;
    auto* plan_changed_opt = plan->add_option("--changed", plan_changed, "Image whose sources changed");
    plan->add_option("--tag", plan_tag, "Plan a full build of one tag")->excludes(plan_changed_opt);

    auto* schedule = app.add_subcommand("schedule", "Replay cron triggers over a horizon");
    std::string schedule_start, schedule_upstream;
    int schedule_days = 0;
    schedule->add_option("--start", schedule_start, "Horizon start (timestamp)")->required();
    schedule->add_option("--days", schedule_days, "Horizon length in days")->required();
    schedule->add_option("--upstream", schedule_upstream, "Upstream events file (JSON lines)");

    auto* registry = app.add_subcommand("registry", "Local registry metadata store");
    registry->require_subcommand(1);
    auto* rec = registry->add_subcommand("record", "Record a build of image:tag");
    std::string rec_image, rec_tag, rec_built_at;
    rec->add_option("image", rec_image)->required();
    rec->add_option("tag", rec_tag)->required();
    rec->add_option("--built-at", rec_built_at, "Build timestamp (defaults to --today midnight)");
    auto* ret = registry->add_subcommand("retag", "Move alias tags onto a built version");
    std::string ret_image, ret_version;
    ret->add_option("image", ret_image)->required();
    ret->add_option("version", ret_version)->required();
    auto* qry = registry->add_subcommand("query", "Look up the record a tag points at");
    std::string qry_image, qry_tag;
    qry->add_option("image", qry_image)->required();
    qry->add_option("tag", qry_tag)->required();
    auto* imp = registry->add_subcommand("import", "Replace the store with a registry file");
    std::string imp_file;
    imp->add_option("file", imp_file)->required();
    auto* exp = registry->add_subcommand("export", "Write the store as a registry document");
    std::string exp_file;
    exp->add_option("file", exp_file);

    auto* launch = app.add_subcommand("launch", "Print the engine invocation for an image");
    std::string launch_image, launch_tag = "latest";
    std::vector<std::string> launch_env;
    launch->add_option("image", launch_image)->required();
    launch->add_option("tag", launch_tag);
    launch->add_option("-e,--env", launch_env, "KEY=VALUE environment entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed())
            return cmd_validate(cfg);
        if (resolve->parsed())
            return cmd_resolve(cfg, resolve_image, resolve_tag_text);
        if (snapshot->parsed())
            return cmd_snapshot(cfg, snapshot_tag, snapshot_image);
        if (generate->parsed())
            return cmd_generate(cfg, generate_tag, generate_build_date, generate_r_version);
        if (plan->parsed()) {
            if (plan_changed.empty() && plan_tag.empty())
                throw_domain("plan requires --changed or --tag");
            return cmd_plan(cfg, plan_changed, plan_tag);
        }
        if (schedule->parsed())
            return cmd_schedule(cfg, schedule_start, schedule_days, schedule_upstream);
        if (registry->parsed()) {
            if (rec->parsed())
                return cmd_registry_record(cfg, rec_image, rec_tag, rec_built_at);
            if (ret->parsed())
                return cmd_registry_retag(cfg, ret_image, ret_version);
            if (qry->parsed())
                return cmd_registry_query(cfg, qry_image, qry_tag);
            if (imp->parsed())
                return cmd_registry_import(cfg, imp_file);
            if (exp->parsed())
                return cmd_registry_export(cfg, exp_file);
        }
        if (launch->parsed())
            return cmd_launch(cfg, launch_image, launch_tag, launch_env);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == errc::domain ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

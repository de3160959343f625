#include "stackctl/json_io.hpp"

#include <algorithm>

#include "stackctl/errors.hpp"

namespace stackctl {

namespace {

std::vector<std::string> sorted_tag_strings(const std::set<Tag>& tags) {
    std::vector<std::string> out;
    for (const Tag& t : tags)
        out.push_back(t.render());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

nlohmann::json to_json(const BuildPlan& plan) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : plan.steps)
        steps.push_back({{"image", step.image},
                         {"tag", step.tag.render()},
                         {"reason", std::string(to_string(step.reason))}});
    return {{"stack", plan.stack}, {"steps", std::move(steps)}};
}

nlohmann::json to_json(const BuildEvent& event) {
    nlohmann::json j{{"at", format_timestamp(event.at)},
                     {"image", event.image},
                     {"tag", event.tag.render()},
                     {"trigger", std::string(to_string(event.trigger.kind))}};
    if (event.trigger.kind == TriggerKind::Upstream)
        j["source"] = event.trigger.upstream_source;
    return j;
}

nlohmann::json to_json(const SnapshotResolution& res) {
    return {{"version", to_string(res.version)},
            {"snapshot_date", res.repo_url.substr(res.repo_url.size() - 10)},
            {"tracks_current_date", is_current(res.snapshot_date)},
            {"repo_url", res.repo_url},
            {"os_codename", res.os_codename}};
}

nlohmann::json to_json(const RegistryRecord& record) {
    nlohmann::json labels = nlohmann::json::object();
    if (!record.labels.license.empty())
        labels["license"] = record.labels.license;
    if (!record.labels.vcs_url.empty())
        labels["vcs_url"] = record.labels.vcs_url;
    if (!record.labels.vendor.empty())
        labels["vendor"] = record.labels.vendor;
    if (!record.labels.extra.empty())
        labels["extra"] = record.labels.extra;
    return {{"image", record.image},
            {"digest", record.digest},
            {"tags", sorted_tag_strings(record.tags)},
            {"built_at", format_timestamp(record.built_at)},
            {"size_mb", record.size_mb},
            {"labels", std::move(labels)}};
}

nlohmann::json to_json(const Diagnostic& d) {
    return {{"severity", std::string(to_string(d.severity))},
            {"image", d.image},
            {"message", d.message}};
}

RegistryRecord record_from_json(const nlohmann::json& j) {
    try {
        RegistryRecord r;
        r.image = j.at("image").get<std::string>();
        r.digest = j.at("digest").get<std::string>();
        for (const auto& tag : j.at("tags"))
            r.tags.insert(parse_tag(tag.get<std::string>()));
        r.built_at = parse_timestamp(j.at("built_at").get<std::string>());
        r.size_mb = j.value("size_mb", 0.0);
        if (j.contains("labels")) {
            const auto& labels = j["labels"];
            r.labels.license = labels.value("license", "");
            r.labels.vcs_url = labels.value("vcs_url", "");
            r.labels.vendor = labels.value("vendor", "");
            if (labels.contains("extra"))
                r.labels.extra = labels["extra"].get<std::map<std::string, std::string>>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw_syntax(std::string("malformed registry record: ") + e.what());
    }
}

std::string event_log_lines(const std::vector<BuildEvent>& events) {
    std::string out;
    for (const auto& event : events) {
        out += to_json(event).dump();
        out += '\n';
    }
    return out;
}

std::vector<UpstreamEvent> parse_upstream_events(std::istream& in) {
    std::vector<UpstreamEvent> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        while (!body.empty() && (body.front() == ' ' || body.front() == '\t'))
            body.remove_prefix(1);
        if (body.empty() || body.front() == '#')
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
            UpstreamEvent e;
            e.at = parse_timestamp(j.at("at").get<std::string>());
            std::string source = j.at("source").get<std::string>();
            if (source == "base-os-image-updated") {
                e.kind = UpstreamKind::BaseOsImageUpdated;
            } else if (source == "dockerfile-source-changed") {
                e.kind = UpstreamKind::DockerfileSourceChanged;
                e.image = j.at("image").get<std::string>();
            } else {
                throw_syntax("unknown upstream source '" + source + "'");
            }
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& e) {
            throw_syntax("upstream events line " + std::to_string(line_no) + ": " + e.what());
        } catch (const error& e) {
            if (e.code() != errc::syntax)
                throw;
            throw_syntax("upstream events line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::sort(out.begin(), out.end(),
              [](const UpstreamEvent& a, const UpstreamEvent& b) { return a.at < b.at; });
    return out;
}

}  // namespace stackctl

#pragma once

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stackctl/manifest.hpp"
#include "stackctl/planner.hpp"
#include "stackctl/registry.hpp"
#include "stackctl/schedule.hpp"
#include "stackctl/snapshot.hpp"

namespace stackctl {

nlohmann::json to_json(const BuildPlan& plan);
nlohmann::json to_json(const BuildEvent& event);
nlohmann::json to_json(const SnapshotResolution& res);
nlohmann::json to_json(const RegistryRecord& record);
nlohmann::json to_json(const Diagnostic& d);

RegistryRecord record_from_json(const nlohmann::json& j);

// One JSON object per line, the schedule log format.
std::string event_log_lines(const std::vector<BuildEvent>& events);

// Upstream events, one JSON object per line:
//   {"at": "...", "source": "base-os-image-updated"}
//   {"at": "...", "source": "dockerfile-source-changed", "image": "..."}
std::vector<UpstreamEvent> parse_upstream_events(std::istream& in);

}  // namespace stackctl

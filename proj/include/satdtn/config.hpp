#pragma once

// Declarative scenario description: nodes, links, ephemerides, radio
// profiles, traffic generators and the scripted step sequence, plus the
// JSON codec for the on-disk format (see docs/scenario_schema.json).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "satdtn/dtn.hpp"
#include "satdtn/linkmodel.hpp"
#include "satdtn/orbit.hpp"
#include "satdtn/types.hpp"

namespace satdtn {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0; // altitude, meters
};

double distance_m(const Vec3& a, const Vec3& b);

// Airframe envelope used to validate vehicle configs and flag endurance
// violations. Defaults are the X8 Skywalker delta wing numbers.
struct AirframeLimits {
    double speed_min_mps = 15.0;
    double speed_cruise_mps = 18.0;
    double speed_max_mps = 23.0;
    double max_altitude_m = 350.0;
    DurationMs endurance_ms = 50ll * 60 * 1000;
    double capture_radius_m = 31.0; // turn radius doubles as waypoint capture
};

struct NodeConfig {
    std::string id;
    NodeKind kind = NodeKind::Vehicle;
    bool powered = true;
    Vec3 position;
    std::optional<std::string> radio; // profile name
    std::uint64_t queue_capacity_bytes = 1ull << 20;
    std::optional<DurationMs> reassembly_max_age_ms; // default: 2 x longest period
    std::optional<DurationMs> relay_max_age_ms;      // absent: stored frames never age out
    RoutingTable routes;                             // dest -> next hop
    std::optional<SatCommsConfig> satcomms;
    AirframeLimits airframe;
    double speed_mps = 18.0;
    std::vector<Vec3> waypoints;
};

struct LinkScheduleEntry {
    TimeMs t_ms = 0;
    bool up = true;
};

struct LinkConfig {
    std::string id;
    std::string a;
    std::string b;
    DurationMs latency_ms = 0;
    double per_copy_loss = 0.0;
    std::optional<double> max_range_m; // link usable only within this distance
    bool initially_up = true;
    std::vector<LinkScheduleEntry> schedule;
};

struct TrafficConfig {
    std::string node;
    std::string kind = "EstimatedState";
    std::size_t size_bytes = 45;
    DurationMs period_ms = 5000;
    TimeMs start_ms = 0;
    std::optional<std::uint64_t> count;
    Priority priority = Priority::Normal;
    std::string label; // optional handle for script predicates
};

// One scripted step: a list of actions applied at t_ms, an optional
// expected per-action outcome pattern, and an optional state predicate
// evaluated at eval_at_ms (default t_ms). The step passes when the combined
// outcome equals expect_pass; negative-control steps set expect_pass false.
struct ScriptStep {
    std::string name;
    std::string row;       // label tying the step to the mission checklist
    bool extension = false; // true for assertions beyond the scripted checklist
    TimeMs t_ms = 0;
    std::optional<TimeMs> eval_at_ms;
    std::vector<nlohmann::json> actions;
    std::optional<std::vector<bool>> expect_action_ok;
    std::optional<nlohmann::json> expect;
    bool expect_pass = true;
};

struct ScenarioConfig {
    std::string name = "scenario";
    DurationMs duration_ms = 0;
    std::uint64_t seed = 1;
    std::map<std::string, RadioProfile> profiles; // customs; builtins always resolve
    std::vector<OrbitEphemeris> ephemerides;
    std::vector<NodeConfig> nodes;
    std::vector<LinkConfig> links;
    std::vector<TrafficConfig> traffic;
    std::vector<ScriptStep> script;
    DurationMs satcomms_tick_ms = 100;
    int hop_ttl = 16;

    const RadioProfile* find_profile(const std::string& name) const;
    const NodeConfig* find_node(const std::string& id) const;
    const OrbitEphemeris* find_ephemeris(const std::string& satellite_id) const;
};

// Parse and validate. Throws ConfigError naming the offending field.
ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config_file(const std::string& path);

// Cross-reference and invariant checks (also called by config_from_json).
void validate_config(const ScenarioConfig& cfg);

} // namespace satdtn

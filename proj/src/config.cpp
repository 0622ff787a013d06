#include "satdtn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace satdtn {

using nlohmann::json;

double distance_m(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const RadioProfile* ScenarioConfig::find_profile(const std::string& profile) const {
    if (auto it = profiles.find(profile); it != profiles.end()) return &it->second;
    const auto& builtins = builtin_profiles();
    if (auto it = builtins.find(profile); it != builtins.end()) return &it->second;
    return nullptr;
}

const NodeConfig* ScenarioConfig::find_node(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const OrbitEphemeris* ScenarioConfig::find_ephemeris(const std::string& satellite_id) const {
    for (const auto& e : ephemerides)
        if (e.satellite_id == satellite_id) return &e;
    return nullptr;
}

// ---------------------------------------------------------------------------
// JSON helpers: strict field access with path-qualified errors.

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ConfigError(path + ": " + why);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    const std::set<std::string>& known) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) fail(path + "." + it.key(), "unknown field");
}

template <typename T>
T get_req(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required field");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

template <typename T>
T get_opt(const json& j, const std::string& path, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

Vec3 vec3_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, altitude]");
    Vec3 v;
    try {
        v.x = j[0].get<double>();
        v.y = j[1].get<double>();
        v.z = j[2].get<double>();
    } catch (const json::exception&) {
        fail(path, "expected numeric [x, y, altitude]");
    }
    return v;
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

RadioProfile profile_from(const json& j, const std::string& path, const std::string& name) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"frame_bytes", "air_rate_bps", "redundancy", "tx_power_w",
                    "standby_power_w", "feed_rate_bps", "per_copy_loss", "cost_per_message",
                    "ref_pass_bytes", "ref_daily_bytes"});
    RadioProfile p;
    p.name = name;
    p.frame_bytes = get_req<std::uint32_t>(j, path, "frame_bytes");
    p.air_rate_bps = get_req<std::uint32_t>(j, path, "air_rate_bps");
    p.redundancy = get_opt<std::uint32_t>(j, path, "redundancy", 1);
    p.tx_power_w = get_opt<double>(j, path, "tx_power_w", 0.0);
    p.standby_power_w = get_opt<double>(j, path, "standby_power_w", 0.0);
    p.feed_rate_bps = get_opt<std::uint32_t>(j, path, "feed_rate_bps", p.air_rate_bps);
    p.per_copy_loss = get_opt<double>(j, path, "per_copy_loss", 0.0);
    if (j.contains("cost_per_message")) p.cost_per_message = j.at("cost_per_message").get<double>();
    if (j.contains("ref_pass_bytes")) p.ref_pass_bytes = j.at("ref_pass_bytes").get<std::uint32_t>();
    if (j.contains("ref_daily_bytes"))
        p.ref_daily_bytes = j.at("ref_daily_bytes").get<std::uint32_t>();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return p;
}

json profile_to(const RadioProfile& p) {
    json j{{"frame_bytes", p.frame_bytes},
           {"air_rate_bps", p.air_rate_bps},
           {"redundancy", p.redundancy},
           {"tx_power_w", p.tx_power_w},
           {"standby_power_w", p.standby_power_w},
           {"feed_rate_bps", p.feed_rate_bps},
           {"per_copy_loss", p.per_copy_loss}};
    if (p.cost_per_message) j["cost_per_message"] = *p.cost_per_message;
    if (p.ref_pass_bytes) j["ref_pass_bytes"] = *p.ref_pass_bytes;
    if (p.ref_daily_bytes) j["ref_daily_bytes"] = *p.ref_daily_bytes;
    return j;
}

} // namespace

// ---------------------------------------------------------------------------

ScenarioConfig config_from_json(const json& j) {
    expect_object(j, "config");
    reject_unknown(j, "config",
                   {"name", "duration_ms", "seed", "profiles", "ephemerides", "nodes", "links",
                    "traffic", "script", "satcomms_tick_ms", "hop_ttl"});

    ScenarioConfig cfg;
    cfg.name = get_opt<std::string>(j, "config", "name", "scenario");
    cfg.duration_ms = get_req<DurationMs>(j, "config", "duration_ms");
    cfg.seed = get_opt<std::uint64_t>(j, "config", "seed", 1);
    cfg.satcomms_tick_ms = get_opt<DurationMs>(j, "config", "satcomms_tick_ms", 100);
    cfg.hop_ttl = get_opt<int>(j, "config", "hop_ttl", 16);

    if (j.contains("profiles")) {
        expect_object(j.at("profiles"), "profiles");
        for (auto it = j.at("profiles").begin(); it != j.at("profiles").end(); ++it)
            cfg.profiles.emplace(it.key(),
                                 profile_from(it.value(), "profiles." + it.key(), it.key()));
    }

    if (j.contains("ephemerides")) {
        const auto& arr = j.at("ephemerides");
        if (!arr.is_array()) fail("ephemerides", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "ephemerides[" + std::to_string(i) + "]";
            expect_object(arr[i], path);
            reject_unknown(arr[i], path, {"satellite_id", "last_passage_ms", "period_ms", "window_ms"});
            OrbitEphemeris e;
            e.satellite_id = get_req<std::string>(arr[i], path, "satellite_id");
            e.last_passage = get_req<TimeMs>(arr[i], path, "last_passage_ms");
            e.period = get_req<DurationMs>(arr[i], path, "period_ms");
            e.window = get_req<DurationMs>(arr[i], path, "window_ms");
            try {
                e.validate();
            } catch (const std::invalid_argument& ex) {
                fail(path, ex.what());
            }
            cfg.ephemerides.push_back(std::move(e));
        }
    }

    if (j.contains("nodes")) {
        const auto& arr = j.at("nodes");
        if (!arr.is_array()) fail("nodes", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "nodes[" + std::to_string(i) + "]";
            expect_object(arr[i], path);
            reject_unknown(arr[i], path,
                           {"id", "kind", "powered", "position", "radio", "queue_capacity_bytes",
                            "reassembly_max_age_ms", "relay_max_age_ms", "routes", "satcomms",
                            "airframe", "speed_mps", "waypoints"});
            NodeConfig n;
            n.id = get_req<std::string>(arr[i], path, "id");
            const auto kind_name = get_req<std::string>(arr[i], path, "kind");
            auto kind = node_kind_from_name(kind_name);
            if (!kind) fail(path + ".kind", "unknown kind '" + kind_name + "'");
            n.kind = *kind;
            n.powered = get_opt<bool>(arr[i], path, "powered", true);
            if (arr[i].contains("position"))
                n.position = vec3_from(arr[i].at("position"), path + ".position");
            if (arr[i].contains("radio")) n.radio = arr[i].at("radio").get<std::string>();
            n.queue_capacity_bytes =
                get_opt<std::uint64_t>(arr[i], path, "queue_capacity_bytes", 1ull << 20);
            if (arr[i].contains("reassembly_max_age_ms"))
                n.reassembly_max_age_ms = arr[i].at("reassembly_max_age_ms").get<DurationMs>();
            if (arr[i].contains("relay_max_age_ms"))
                n.relay_max_age_ms = arr[i].at("relay_max_age_ms").get<DurationMs>();
            if (arr[i].contains("routes")) {
                const auto& routes = arr[i].at("routes");
                if (!routes.is_array()) fail(path + ".routes", "expected an array");
                for (std::size_t r = 0; r < routes.size(); ++r) {
                    const std::string rpath = path + ".routes[" + std::to_string(r) + "]";
                    expect_object(routes[r], rpath);
                    reject_unknown(routes[r], rpath, {"dest", "next_hop"});
                    n.routes[get_req<std::string>(routes[r], rpath, "dest")] =
                        get_req<std::string>(routes[r], rpath, "next_hop");
                }
            }
            if (arr[i].contains("satcomms")) {
                const auto& sc = arr[i].at("satcomms");
                const std::string spath = path + ".satcomms";
                expect_object(sc, spath);
                reject_unknown(sc, spath,
                               {"target", "dest", "transmit_when_possible", "accepted_kinds",
                                "target_configured"});
                SatCommsConfig c;
                c.target = get_opt<std::string>(sc, spath, "target", "");
                c.dest = get_req<std::string>(sc, spath, "dest");
                c.transmit_when_possible =
                    get_opt<bool>(sc, spath, "transmit_when_possible", false);
                c.target_configured =
                    get_opt<bool>(sc, spath, "target_configured", !c.target.empty());
                if (sc.contains("accepted_kinds"))
                    for (const auto& k : sc.at("accepted_kinds"))
                        c.accepted_kinds.insert(k.get<std::string>());
                n.satcomms = std::move(c);
            }
            if (arr[i].contains("airframe")) {
                const auto& af = arr[i].at("airframe");
                const std::string apath = path + ".airframe";
                expect_object(af, apath);
                reject_unknown(af, apath,
                               {"speed_min_mps", "speed_cruise_mps", "speed_max_mps",
                                "max_altitude_m", "endurance_ms", "capture_radius_m"});
                n.airframe.speed_min_mps = get_opt<double>(af, apath, "speed_min_mps", 15.0);
                n.airframe.speed_cruise_mps = get_opt<double>(af, apath, "speed_cruise_mps", 18.0);
                n.airframe.speed_max_mps = get_opt<double>(af, apath, "speed_max_mps", 23.0);
                n.airframe.max_altitude_m = get_opt<double>(af, apath, "max_altitude_m", 350.0);
                n.airframe.endurance_ms =
                    get_opt<DurationMs>(af, apath, "endurance_ms", 50ll * 60 * 1000);
                n.airframe.capture_radius_m = get_opt<double>(af, apath, "capture_radius_m", 31.0);
            }
            n.speed_mps = get_opt<double>(arr[i], path, "speed_mps", 18.0);
            if (arr[i].contains("waypoints")) {
                const auto& wps = arr[i].at("waypoints");
                if (!wps.is_array()) fail(path + ".waypoints", "expected an array");
                for (std::size_t w = 0; w < wps.size(); ++w)
                    n.waypoints.push_back(
                        vec3_from(wps[w], path + ".waypoints[" + std::to_string(w) + "]"));
            }
            cfg.nodes.push_back(std::move(n));
        }
    }

    if (j.contains("links")) {
        const auto& arr = j.at("links");
        if (!arr.is_array()) fail("links", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "links[" + std::to_string(i) + "]";
            expect_object(arr[i], path);
            reject_unknown(arr[i], path,
                           {"id", "a", "b", "latency_ms", "per_copy_loss", "max_range_m",
                            "initially_up", "schedule"});
            LinkConfig l;
            l.a = get_req<std::string>(arr[i], path, "a");
            l.b = get_req<std::string>(arr[i], path, "b");
            l.id = get_opt<std::string>(arr[i], path, "id", l.a + "--" + l.b);
            l.latency_ms = get_opt<DurationMs>(arr[i], path, "latency_ms", 0);
            l.per_copy_loss = get_opt<double>(arr[i], path, "per_copy_loss", 0.0);
            if (arr[i].contains("max_range_m"))
                l.max_range_m = arr[i].at("max_range_m").get<double>();
            l.initially_up = get_opt<bool>(arr[i], path, "initially_up", true);
            if (arr[i].contains("schedule")) {
                for (std::size_t s = 0; s < arr[i].at("schedule").size(); ++s) {
                    const auto& e = arr[i].at("schedule")[s];
                    const std::string spath = path + ".schedule[" + std::to_string(s) + "]";
                    expect_object(e, spath);
                    reject_unknown(e, spath, {"t_ms", "up"});
                    l.schedule.push_back({get_req<TimeMs>(e, spath, "t_ms"),
                                          get_req<bool>(e, spath, "up")});
                }
            }
            cfg.links.push_back(std::move(l));
        }
    }

    if (j.contains("traffic")) {
        const auto& arr = j.at("traffic");
        if (!arr.is_array()) fail("traffic", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "traffic[" + std::to_string(i) + "]";
            expect_object(arr[i], path);
            reject_unknown(arr[i], path,
                           {"node", "kind", "size_bytes", "period_ms", "start_ms", "count",
                            "priority", "label"});
            TrafficConfig t;
            t.node = get_req<std::string>(arr[i], path, "node");
            t.kind = get_opt<std::string>(arr[i], path, "kind", "EstimatedState");
            t.size_bytes = get_req<std::size_t>(arr[i], path, "size_bytes");
            t.period_ms = get_req<DurationMs>(arr[i], path, "period_ms");
            t.start_ms = get_opt<TimeMs>(arr[i], path, "start_ms", 0);
            if (arr[i].contains("count")) t.count = arr[i].at("count").get<std::uint64_t>();
            const auto prio = get_opt<std::string>(arr[i], path, "priority", "normal");
            if (prio == "high")
                t.priority = Priority::High;
            else if (prio == "normal")
                t.priority = Priority::Normal;
            else
                fail(path + ".priority", "expected 'high' or 'normal'");
            t.label = get_opt<std::string>(arr[i], path, "label", "");
            cfg.traffic.push_back(std::move(t));
        }
    }

    if (j.contains("script")) {
        const auto& arr = j.at("script");
        if (!arr.is_array()) fail("script", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "script[" + std::to_string(i) + "]";
            expect_object(arr[i], path);
            reject_unknown(arr[i], path,
                           {"name", "row", "extension", "t_ms", "eval_at_ms", "actions",
                            "expect_action_ok", "expect", "expect_pass"});
            ScriptStep s;
            s.name = get_req<std::string>(arr[i], path, "name");
            s.row = get_opt<std::string>(arr[i], path, "row", s.name);
            s.extension = get_opt<bool>(arr[i], path, "extension", false);
            s.t_ms = get_req<TimeMs>(arr[i], path, "t_ms");
            if (arr[i].contains("eval_at_ms")) s.eval_at_ms = arr[i].at("eval_at_ms").get<TimeMs>();
            if (arr[i].contains("actions"))
                for (const auto& a : arr[i].at("actions")) s.actions.push_back(a);
            if (arr[i].contains("expect_action_ok"))
                s.expect_action_ok = arr[i].at("expect_action_ok").get<std::vector<bool>>();
            if (arr[i].contains("expect")) s.expect = arr[i].at("expect");
            s.expect_pass = get_opt<bool>(arr[i], path, "expect_pass", true);
            cfg.script.push_back(std::move(s));
        }
    }

    validate_config(cfg);
    return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["duration_ms"] = cfg.duration_ms;
    j["seed"] = cfg.seed;
    j["satcomms_tick_ms"] = cfg.satcomms_tick_ms;
    j["hop_ttl"] = cfg.hop_ttl;
    if (!cfg.profiles.empty()) {
        json p = json::object();
        for (const auto& [name, prof] : cfg.profiles) p[name] = profile_to(prof);
        j["profiles"] = p;
    }
    if (!cfg.ephemerides.empty()) {
        json arr = json::array();
        for (const auto& e : cfg.ephemerides)
            arr.push_back({{"satellite_id", e.satellite_id},
                           {"last_passage_ms", e.last_passage},
                           {"period_ms", e.period},
                           {"window_ms", e.window}});
        j["ephemerides"] = arr;
    }
    json nodes = json::array();
    for (const auto& n : cfg.nodes) {
        json nj{{"id", n.id}, {"kind", node_kind_name(n.kind)}};
        if (!n.powered) nj["powered"] = false;
        if (n.position.x != 0 || n.position.y != 0 || n.position.z != 0)
            nj["position"] = vec3_to(n.position);
        if (n.radio) nj["radio"] = *n.radio;
        if (n.queue_capacity_bytes != (1ull << 20))
            nj["queue_capacity_bytes"] = n.queue_capacity_bytes;
        if (n.reassembly_max_age_ms) nj["reassembly_max_age_ms"] = *n.reassembly_max_age_ms;
        if (n.relay_max_age_ms) nj["relay_max_age_ms"] = *n.relay_max_age_ms;
        if (!n.routes.empty()) {
            json routes = json::array();
            for (const auto& [dest, hop] : n.routes)
                routes.push_back({{"dest", dest}, {"next_hop", hop}});
            nj["routes"] = routes;
        }
        if (n.satcomms) {
            json sc{{"dest", n.satcomms->dest},
                    {"transmit_when_possible", n.satcomms->transmit_when_possible},
                    {"target_configured", n.satcomms->target_configured}};
            if (!n.satcomms->target.empty()) sc["target"] = n.satcomms->target;
            if (!n.satcomms->accepted_kinds.empty())
                sc["accepted_kinds"] = n.satcomms->accepted_kinds;
            nj["satcomms"] = sc;
        }
        if (n.speed_mps != 18.0) nj["speed_mps"] = n.speed_mps;
        if (!n.waypoints.empty()) {
            json wps = json::array();
            for (const auto& w : n.waypoints) wps.push_back(vec3_to(w));
            nj["waypoints"] = wps;
        }
        nodes.push_back(nj);
    }
    j["nodes"] = nodes;
    if (!cfg.links.empty()) {
        json links = json::array();
        for (const auto& l : cfg.links) {
            json lj{{"id", l.id}, {"a", l.a}, {"b", l.b}};
            if (l.latency_ms) lj["latency_ms"] = l.latency_ms;
            if (l.per_copy_loss != 0.0) lj["per_copy_loss"] = l.per_copy_loss;
            if (l.max_range_m) lj["max_range_m"] = *l.max_range_m;
            if (!l.initially_up) lj["initially_up"] = false;
            if (!l.schedule.empty()) {
                json sched = json::array();
                for (const auto& s : l.schedule)
                    sched.push_back({{"t_ms", s.t_ms}, {"up", s.up}});
                lj["schedule"] = sched;
            }
            links.push_back(lj);
        }
        j["links"] = links;
    }
    if (!cfg.traffic.empty()) {
        json traffic = json::array();
        for (const auto& t : cfg.traffic) {
            json tj{{"node", t.node},
                    {"kind", t.kind},
                    {"size_bytes", t.size_bytes},
                    {"period_ms", t.period_ms}};
            if (t.start_ms) tj["start_ms"] = t.start_ms;
            if (t.count) tj["count"] = *t.count;
            if (t.priority == Priority::High) tj["priority"] = "high";
            if (!t.label.empty()) tj["label"] = t.label;
            traffic.push_back(tj);
        }
        j["traffic"] = traffic;
    }
    if (!cfg.script.empty()) {
        json script = json::array();
        for (const auto& s : cfg.script) {
            json sj{{"name", s.name}, {"t_ms", s.t_ms}};
            if (s.row != s.name) sj["row"] = s.row;
            if (s.extension) sj["extension"] = true;
            if (s.eval_at_ms) sj["eval_at_ms"] = *s.eval_at_ms;
            if (!s.actions.empty()) sj["actions"] = s.actions;
            if (s.expect_action_ok) sj["expect_action_ok"] = *s.expect_action_ok;
            if (s.expect) sj["expect"] = *s.expect;
            if (!s.expect_pass) sj["expect_pass"] = false;
            script.push_back(sj);
        }
        j["script"] = script;
    }
    return j;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("config file '" + path + "' is not readable");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': invalid JSON: " + e.what());
    }
    return config_from_json(j);
}

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.duration_ms <= 0) fail("duration_ms", "must be > 0");
    if (cfg.satcomms_tick_ms <= 0) fail("satcomms_tick_ms", "must be > 0");
    if (cfg.hop_ttl < 1) fail("hop_ttl", "must be >= 1");
    if (cfg.nodes.size() > 256) fail("nodes", "at most 256 nodes (8-bit source ids)");

    std::set<std::string> node_ids;
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        const auto& n = cfg.nodes[i];
        const std::string path = "nodes[" + std::to_string(i) + "]";
        if (n.id.empty()) fail(path + ".id", "must not be empty");
        if (!node_ids.insert(n.id).second) fail(path + ".id", "duplicate node id '" + n.id + "'");
        if (n.radio && !cfg.find_profile(*n.radio))
            fail(path + ".radio", "unknown profile '" + *n.radio + "'");
        if (n.satcomms) {
            if (!n.radio) fail(path + ".satcomms", "satcomms requires a radio profile");
            if (n.satcomms->target_configured && !n.satcomms->target.empty() &&
                !cfg.find_ephemeris(n.satcomms->target))
                fail(path + ".satcomms.target",
                     "no ephemeris for target '" + n.satcomms->target + "'");
        }
        if (n.kind == NodeKind::Vehicle) {
            if (n.speed_mps < n.airframe.speed_min_mps || n.speed_mps > n.airframe.speed_max_mps)
                fail(path + ".speed_mps", "outside the airframe speed envelope");
            for (std::size_t w = 0; w < n.waypoints.size(); ++w)
                if (n.waypoints[w].z > n.airframe.max_altitude_m)
                    fail(path + ".waypoints[" + std::to_string(w) + "]",
                         "altitude above airframe ceiling");
        }
    }

    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        const auto& n = cfg.nodes[i];
        const std::string path = "nodes[" + std::to_string(i) + "]";
        for (const auto& [dest, hop] : n.routes) {
            if (!node_ids.count(dest)) fail(path + ".routes", "unknown dest '" + dest + "'");
            if (!node_ids.count(hop)) fail(path + ".routes", "unknown next_hop '" + hop + "'");
        }
        if (n.satcomms) {
            if (!n.satcomms->dest.empty() && !node_ids.count(n.satcomms->dest))
                fail(path + ".satcomms.dest", "unknown node '" + n.satcomms->dest + "'");
            if (!n.satcomms->target.empty() && !node_ids.count(n.satcomms->target))
                fail(path + ".satcomms.target", "unknown node '" + n.satcomms->target + "'");
        }
    }

    std::set<std::string> eph_ids;
    for (std::size_t i = 0; i < cfg.ephemerides.size(); ++i) {
        const auto& e = cfg.ephemerides[i];
        const std::string path = "ephemerides[" + std::to_string(i) + "]";
        if (!node_ids.count(e.satellite_id))
            fail(path + ".satellite_id", "unknown node '" + e.satellite_id + "'");
        if (!eph_ids.insert(e.satellite_id).second)
            fail(path + ".satellite_id", "duplicate ephemeris for '" + e.satellite_id + "'");
    }

    std::set<std::string> link_ids;
    for (std::size_t i = 0; i < cfg.links.size(); ++i) {
        const auto& l = cfg.links[i];
        const std::string path = "links[" + std::to_string(i) + "]";
        if (!node_ids.count(l.a)) fail(path + ".a", "unknown node '" + l.a + "'");
        if (!node_ids.count(l.b)) fail(path + ".b", "unknown node '" + l.b + "'");
        if (l.a == l.b) fail(path, "link endpoints must differ");
        if (!link_ids.insert(l.id).second) fail(path + ".id", "duplicate link id '" + l.id + "'");
        if (l.per_copy_loss < 0.0 || l.per_copy_loss > 1.0)
            fail(path + ".per_copy_loss", "must be in [0, 1]");
        if (l.latency_ms < 0) fail(path + ".latency_ms", "must be >= 0");
        for (std::size_t s = 1; s < l.schedule.size(); ++s)
            if (l.schedule[s].t_ms < l.schedule[s - 1].t_ms)
                fail(path + ".schedule", "entries must be time-ordered");
    }

    for (std::size_t i = 0; i < cfg.traffic.size(); ++i) {
        const auto& t = cfg.traffic[i];
        const std::string path = "traffic[" + std::to_string(i) + "]";
        if (!node_ids.count(t.node)) fail(path + ".node", "unknown node '" + t.node + "'");
        if (t.period_ms <= 0) fail(path + ".period_ms", "must be > 0");
        if (t.size_bytes > 6630) fail(path + ".size_bytes", "exceeds the 6630-byte datum limit");
    }

    std::map<std::string, RoutingTable> tables;
    for (const auto& n : cfg.nodes)
        if (!n.routes.empty()) tables[n.id] = n.routes;
    check_no_routing_loops(tables);
}

} // namespace satdtn

#include "satdtn/scenarios.hpp"

#include <stdexcept>

namespace satdtn {

using nlohmann::json;

namespace {

NodeConfig node(const std::string& id, NodeKind kind) {
    NodeConfig n;
    n.id = id;
    n.kind = kind;
    return n;
}

LinkConfig link(const std::string& a, const std::string& b, DurationMs latency,
                bool up = true) {
    LinkConfig l;
    l.id = a + "--" + b;
    l.a = a;
    l.b = b;
    l.latency_ms = latency;
    l.initially_up = up;
    return l;
}

SatCommsConfig satcomms(const std::string& target, const std::string& dest, bool transmit,
                        bool configured) {
    SatCommsConfig c;
    c.target = target;
    c.dest = dest;
    c.transmit_when_possible = transmit;
    c.target_configured = configured;
    return c;
}

ScriptStep step(const std::string& name, TimeMs t, std::vector<json> actions, json expect,
                bool extension = false) {
    ScriptStep s;
    s.name = name;
    s.row = name;
    s.extension = extension;
    s.t_ms = t;
    s.actions = std::move(actions);
    if (!expect.is_null()) s.expect = std::move(expect);
    return s;
}

json all_of(std::vector<json> preds) {
    return json{{"type", "all_of"}, {"preds", preds}};
}

} // namespace

// ---------------------------------------------------------------------------

ScenarioConfig build_workbench(double uplink_loss) {
    ScenarioConfig cfg;
    cfg.name = "workbench";
    cfg.duration_ms = 60'000;
    cfg.seed = 1;

    auto testbed = node("testbed", NodeKind::Vehicle);
    testbed.radio = "HUMSAT";
    testbed.satcomms = satcomms("sat-sim", "console", true, true);
    cfg.nodes.push_back(testbed);

    auto sim = node("sat-sim", NodeKind::Satellite);
    sim.routes["console"] = "console";
    cfg.nodes.push_back(sim);

    cfg.nodes.push_back(node("console", NodeKind::Workstation));

    // Bench loop: no visibility gating, so the simulator is always in view.
    cfg.ephemerides.push_back({"sat-sim", 0, 60'000, 60'000});

    auto uplink = link("testbed", "sat-sim", 0);
    uplink.per_copy_loss = uplink_loss;
    cfg.links.push_back(uplink);
    cfg.links.push_back(link("sat-sim", "console", 50));

    cfg.script.push_back(step(
        "Queue telemetry datum", 1000,
        {json{{"type", "enqueue"}, {"node", "testbed"}, {"kind", "EstimatedState"},
              {"size_bytes", 45}, {"label", "wb-1"}}},
        json{{"type", "fragment_count"}, {"label", "wb-1"}, {"n", 2}}, true));
    cfg.script.push_back(step(
        "Queue status datum", 1500,
        {json{{"type", "enqueue"}, {"node", "testbed"}, {"kind", "StatusReport"},
              {"size_bytes", 100}, {"label", "wb-2"}}},
        json{{"type", "fragment_count"}, {"label", "wb-2"}, {"n", 4}}, true));
    cfg.script.push_back(step(
        "Queue position fix", 2000,
        {json{{"type", "enqueue"}, {"node", "testbed"}, {"kind", "EstimatedState"},
              {"size_bytes", 26}, {"label", "wb-3"}}},
        json{{"type", "fragment_count"}, {"label", "wb-3"}, {"n", 1}}, true));
    cfg.script.push_back(step(
        "Verify redundant transmission", 30'000, {},
        all_of({json{{"type", "copies_match_redundancy"}, {"node", "testbed"}},
                json{{"type", "copies_sent_at_least"}, {"node", "testbed"}, {"n", 28}}}),
        true));
    cfg.script.push_back(step(
        "Verify duplicate suppression", 30'500, {},
        json{{"type", "duplicates_match_redundancy"}, {"node", "console"},
             {"source", "testbed"}},
        true));
    cfg.script.push_back(step(
        "Verify data reconstruction", 31'000, {},
        all_of({json{{"type", "datums_delivered_equals"}, {"node", "console"}, {"n", 3}},
                json{{"type", "delivered_bytes_match"}, {"node", "console"}}}),
        true));
    return cfg;
}

// ---------------------------------------------------------------------------

ScenarioConfig build_dry_run(DryRunVariant variant) {
    ScenarioConfig cfg;
    cfg.name = variant == DryRunVariant::Nominal          ? "dry_run"
               : variant == DryRunVariant::MisrouteNoRecovery ? "dry_run_misroute"
                                                              : "dry_run_no_server_route";
    cfg.duration_ms = 300'000;
    cfg.seed = 2;

    auto testbed = node("testbed", NodeKind::Vehicle);
    testbed.radio = "HUMSAT";
    testbed.powered = false;
    testbed.satcomms = satcomms("", "console", false, false);
    cfg.nodes.push_back(testbed);

    auto sim = node("sat-sim", NodeKind::Satellite);
    sim.powered = false; // started by script
    cfg.nodes.push_back(sim);

    auto gwa = node("gw-a", NodeKind::Gateway);
    gwa.routes["console"] = "server";
    cfg.nodes.push_back(gwa);

    cfg.nodes.push_back(node("server", NodeKind::Server));

    cfg.nodes.push_back(node("gw-b", NodeKind::Gateway));

    cfg.nodes.push_back(node("console", NodeKind::Workstation));

    cfg.ephemerides.push_back({"sat-sim", 120'000, 600'000, 120'000});

    cfg.links.push_back(link("testbed", "sat-sim", 0));
    cfg.links.push_back(link("sat-sim", "gw-a", 50, false));
    cfg.links.push_back(link("gw-a", "server", 50, false));
    cfg.links.push_back(link("server", "gw-b", 50, false));
    cfg.links.push_back(link("gw-b", "console", 5));

    TrafficConfig telemetry;
    telemetry.node = "testbed";
    telemetry.kind = "EstimatedState";
    telemetry.size_bytes = 45;
    telemetry.period_ms = 5000;
    telemetry.start_ms = 10'000;
    telemetry.label = "telemetry";
    cfg.traffic.push_back(telemetry);

    cfg.script.push_back(step("Configure network interface in Simulator", 1000,
                              {json{{"type", "link_up"}, {"link", "sat-sim--gw-a"}}},
                              json{{"type", "link_up"}, {"link", "sat-sim--gw-a"}}));
    cfg.script.push_back(step("Configure Simulator NeptusConnections", 2000,
                              {json{{"type", "set_route"}, {"node", "sat-sim"},
                                    {"dest", "console"}, {"next_hop", "gw-a"}}},
                              json{{"type", "route_next_hop_is"}, {"node", "sat-sim"},
                                   {"dest", "console"}, {"next_hop", "gw-a"}}));
    cfg.script.push_back(step("Connect communication gateways to internet", 3000,
                              {json{{"type", "link_up"}, {"link", "gw-a--server"}},
                               json{{"type", "link_up"}, {"link", "server--gw-b"}}},
                              all_of({json{{"type", "link_up"}, {"link", "gw-a--server"}},
                                      json{{"type", "link_up"}, {"link", "server--gw-b"}}})));
    cfg.script.push_back(step("Route incoming communication [client]", 4000,
                              {json{{"type", "set_route"}, {"node", "gw-b"},
                                    {"dest", "console"}, {"next_hop", "console"}}},
                              json{{"type", "route_next_hop_is"}, {"node", "gw-b"},
                                   {"dest", "console"}, {"next_hop", "console"}}));

    // The server-side forwarding rule. The scripted checklist reproduces the
    // first-attempt incident: the rule as saved pointed back at gateway A, so
    // the simulator start fails until the rule is corrected.
    if (variant == DryRunVariant::NoServerRoute) {
        ScriptStep s = step("Route incoming communication [server]", 5000,
                            {json{{"type", "noop"}}},
                            json{{"type", "route_exists"}, {"node", "server"},
                                 {"dest", "console"}});
        s.expect_pass = false; // knowingly absent in this variant
        cfg.script.push_back(s);
    } else {
        cfg.script.push_back(step("Route incoming communication [server]", 5000,
                                  {json{{"type", "set_route"}, {"node", "server"},
                                        {"dest", "console"}, {"next_hop", "gw-a"}}},
                                  json{{"type", "route_exists"}, {"node", "server"},
                                       {"dest", "console"}}));
    }

    cfg.script.push_back(step("Testbed power up", 6000,
                              {json{{"type", "power_on"}, {"node", "testbed"}}},
                              json{{"type", "satcomms_active"}, {"node", "testbed"}}));

    switch (variant) {
    case DryRunVariant::Nominal: {
        ScriptStep s = step(
            "Start Simulator", 7000,
            {json{{"type", "start_node"}, {"node", "sat-sim"}, {"dest", "console"}},
             json{{"type", "set_route"}, {"node", "server"}, {"dest", "console"},
                  {"next_hop", "gw-b"}},
             json{{"type", "start_node"}, {"node", "sat-sim"}, {"dest", "console"}}},
            json{{"type", "node_ready"}, {"node", "sat-sim"}, {"dest", "console"}});
        s.expect_action_ok = std::vector<bool>{false, true, true};
        cfg.script.push_back(s);
        break;
    }
    case DryRunVariant::MisrouteNoRecovery:
        cfg.script.push_back(step(
            "Start Simulator", 7000,
            {json{{"type", "start_node"}, {"node", "sat-sim"}, {"dest", "console"}}},
            json{{"type", "node_ready"}, {"node", "sat-sim"}, {"dest", "console"}}));
        break;
    case DryRunVariant::NoServerRoute:
        // Plain power-up: the simulator runs, data flows as far as the
        // server and is stored there.
        cfg.script.push_back(step("Start Simulator", 7000,
                                  {json{{"type", "power_on"}, {"node", "sat-sim"}}},
                                  json{{"type", "node_powered"}, {"node", "sat-sim"}}));
        break;
    }

    cfg.script.push_back(step("Configure Satellite", 8000,
                              {json{{"type", "configure_satellite"}, {"node", "testbed"},
                                    {"target", "sat-sim"}}},
                              json{{"type", "satcomms_configured_send_off"},
                                   {"node", "testbed"}}));

    ScriptStep start_tx = step("Start transmission!", 9000,
                               {json{{"type", "set_transmit"}, {"node", "testbed"},
                                     {"enabled", true}}},
                               json{{"type", "copies_sent_at_least"}, {"node", "testbed"},
                                    {"n", 1}});
    start_tx.eval_at_ms = 125'000; // just after the pass opens
    cfg.script.push_back(start_tx);

    cfg.script.push_back(step("Check transmission", 130'000, {},
                              json{{"type", "copies_sent_at_least"}, {"node", "testbed"},
                                   {"n", 4}}));

    {
        ScriptStep s = step("Check Simulator reception", 135'000, {},
                            json{{"type", "frames_received_at_least"}, {"node", "sat-sim"},
                                 {"n", 1}});
        if (variant == DryRunVariant::MisrouteNoRecovery) s.expect_pass = false;
        cfg.script.push_back(s);
    }
    {
        ScriptStep s = step("Check Neptus reception", 140'000, {},
                            json{{"type", "frames_received_at_least"}, {"node", "console"},
                                 {"n", 1}});
        if (variant != DryRunVariant::Nominal) s.expect_pass = false;
        cfg.script.push_back(s);
    }
    {
        ScriptStep s = step(
            "Check message reconstruction in Neptus", 239'000, {},
            all_of({json{{"type", "datums_delivered_at_least"}, {"node", "console"}, {"n", 1}},
                    json{{"type", "delivered_bytes_match"}, {"node", "console"}}}));
        if (variant != DryRunVariant::Nominal) s.expect_pass = false;
        cfg.script.push_back(s);
    }
    return cfg;
}

// ---------------------------------------------------------------------------

std::vector<Vec3> default_survey_plan() {
    return {{0, 0, 100},   {400, 0, 100},   {400, 200, 100},
            {0, 200, 100}, {0, 400, 100},   {400, 400, 100}};
}

ScenarioConfig build_field_trial(bool wind_outage, const std::vector<Vec3>& plan) {
    if (plan.empty()) throw ConfigError("field_trial: survey plan must have waypoints");

    ScenarioConfig cfg;
    cfg.name = wind_outage ? "field_trial_wind" : "field_trial";
    cfg.duration_ms = wind_outage ? 7'500'000 : 2'000'000;
    cfg.seed = 3;

    auto uav = node("uav", NodeKind::Vehicle);
    uav.radio = "HUMSAT";
    uav.powered = false;
    uav.satcomms = satcomms("", "console", false, false);
    cfg.nodes.push_back(uav);

    auto sim = node("sat-sim", NodeKind::Satellite);
    sim.position = {0, 800, 0};
    cfg.nodes.push_back(sim);

    auto gwa = node("gw-a", NodeKind::Gateway);
    gwa.routes["console"] = "server";
    cfg.nodes.push_back(gwa);
    cfg.nodes.push_back(node("server", NodeKind::Server));
    cfg.nodes.push_back(node("gw-b", NodeKind::Gateway));
    cfg.nodes.push_back(node("console", NodeKind::Workstation));

    // 600 km circular orbit rounded to whole seconds, 5-minute window. The
    // first pass opens 20 minutes into the mission.
    cfg.ephemerides.push_back({"sat-sim", 1'200'000, 5'802'000, 300'000});

    auto uplink = link("uav", "sat-sim", 0);
    uplink.max_range_m = 5000;
    if (wind_outage) {
        // Strong winds push the vehicle out of the simulator's range halfway
        // through the first pass; contact is only possible again later.
        uplink.schedule.push_back({1'260'500, false});
        uplink.schedule.push_back({1'600'000, true});
    }
    cfg.links.push_back(uplink);
    cfg.links.push_back(link("sat-sim", "gw-a", 50, false));
    cfg.links.push_back(link("gw-a", "server", 50, false));
    cfg.links.push_back(link("server", "gw-b", 50, false));
    cfg.links.push_back(link("gw-b", "console", 5));

    TrafficConfig telemetry;
    telemetry.node = "uav";
    telemetry.kind = "EstimatedState";
    telemetry.size_bytes = 45;
    telemetry.period_ms = 5000;
    telemetry.start_ms = 100'000;
    telemetry.label = "telemetry";
    cfg.traffic.push_back(telemetry);

    // Setup phase (shared with the dry-run checklist; the forwarding rule is
    // correct on the first try here).
    cfg.script.push_back(step("Configure network interface in Simulator", 1000,
                              {json{{"type", "link_up"}, {"link", "sat-sim--gw-a"}}},
                              json{{"type", "link_up"}, {"link", "sat-sim--gw-a"}}));
    cfg.script.push_back(step("Configure Simulator NeptusConnections", 2000,
                              {json{{"type", "set_route"}, {"node", "sat-sim"},
                                    {"dest", "console"}, {"next_hop", "gw-a"}}},
                              json{{"type", "route_next_hop_is"}, {"node", "sat-sim"},
                                   {"dest", "console"}, {"next_hop", "gw-a"}}));
    cfg.script.push_back(step("Connect communication gateways to internet", 3000,
                              {json{{"type", "link_up"}, {"link", "gw-a--server"}},
                               json{{"type", "link_up"}, {"link", "server--gw-b"}}},
                              all_of({json{{"type", "link_up"}, {"link", "gw-a--server"}},
                                      json{{"type", "link_up"}, {"link", "server--gw-b"}}})));
    cfg.script.push_back(step("Route incoming communication [client]", 4000,
                              {json{{"type", "set_route"}, {"node", "gw-b"},
                                    {"dest", "console"}, {"next_hop", "console"}}},
                              json{{"type", "route_next_hop_is"}, {"node", "gw-b"},
                                   {"dest", "console"}, {"next_hop", "console"}}));
    cfg.script.push_back(step("Route incoming communication [server]", 5000,
                              {json{{"type", "set_route"}, {"node", "server"},
                                    {"dest", "console"}, {"next_hop", "gw-b"}}},
                              json{{"type", "node_ready"}, {"node", "sat-sim"},
                                   {"dest", "console"}}));

    // Pre-flight phase.
    cfg.script.push_back(step("Power up UAV", 60'000,
                              {json{{"type", "power_on"}, {"node", "uav"}}},
                              json{{"type", "node_powered"}, {"node", "uav"}}));
    cfg.script.push_back(step("Check SDR communication", 70'000, {},
                              json{{"type", "satcomms_active"}, {"node", "uav"}}));
    cfg.script.push_back(step(
        "Check SDR range", 80'000,
        {json{{"type", "set_position"}, {"node", "uav"}, {"position", {3000.0, 0.0, 0.0}}}},
        all_of({json{{"type", "distance_within"}, {"a", "uav"}, {"b", "sat-sim"},
                     {"max_m", 5000.0}},
                json{{"type", "link_up"}, {"link", "uav--sat-sim"}}})));
    cfg.script.push_back(step(
        "UAV takeoff", 90'000,
        {json{{"type", "set_position"}, {"node", "uav"}, {"position", {0.0, 0.0, 0.0}}},
         json{{"type", "takeoff"}, {"node", "uav"}}},
        json{{"type", "airborne"}, {"node", "uav"}, {"value", true}}));

    // Flight phase.
    json wps = json::array();
    for (const auto& w : plan) wps.push_back({w.x, w.y, w.z});
    cfg.script.push_back(step("Survey plan upload", 600'000,
                              {json{{"type", "upload_plan"}, {"node", "uav"},
                                    {"waypoints", wps}, {"speed_mps", 18.0}}},
                              json{{"type", "plan_uploaded"}, {"node", "uav"}}));
    cfg.script.push_back(step("Configure Satellite", 610'000,
                              {json{{"type", "configure_satellite"}, {"node", "uav"},
                                    {"target", "sat-sim"}}},
                              json{{"type", "satcomms_configured_send_off"}, {"node", "uav"}}));
    ScriptStep start_tx = step("Start transmission!", 620'000,
                               {json{{"type", "set_transmit"}, {"node", "uav"},
                                     {"enabled", true}}},
                               json{{"type", "copies_sent_at_least"}, {"node", "uav"},
                                    {"n", 1}});
    start_tx.eval_at_ms = 1'205'000;
    cfg.script.push_back(start_tx);
    cfg.script.push_back(step(
        "Survey Plan Execution", 630'000,
        {json{{"type", "start_plan"}, {"node", "uav"}},
         json{{"type", "enqueue"}, {"node", "uav"}, {"kind", "SurveyLog"},
              {"size_bytes", 4004}, {"priority", "high"}, {"label", "survey-log"}}},
        json{{"type", "plan_active"}, {"node", "uav"}}));
    cfg.script.push_back(step("Check transmission", 1'210'000, {},
                              json{{"type", "copies_sent_at_least"}, {"node", "uav"},
                                   {"n", 4}}));
    cfg.script.push_back(step("Check Simulator reception", 1'215'000, {},
                              json{{"type", "frames_received_at_least"}, {"node", "sat-sim"},
                                   {"n", 1}}));
    cfg.script.push_back(step("Check Neptus reception", 1'220'000, {},
                              json{{"type", "frames_received_at_least"}, {"node", "console"},
                                   {"n", 1}}));
    {
        // In the wind variant the mid-pass outage leaves the survey log
        // incomplete at the end of the first pass.
        ScriptStep s = step("Check message reconstruction in Neptus", 1'495'000, {},
                            json{{"type", "datum_delivered"}, {"label", "survey-log"}});
        if (wind_outage) s.expect_pass = false;
        cfg.script.push_back(s);
    }
    cfg.script.push_back(step("Waits for end of transmission", 1'497'000, {},
                              all_of({json{{"type", "airborne"}, {"node", "uav"},
                                           {"value", true}},
                                      json{{"type", "loiter_in_window"}, {"node", "uav"},
                                           {"sat", "sat-sim"}}})));
    cfg.script.push_back(step("UAV Land", 1'550'000,
                              {json{{"type", "land"}, {"node", "uav"}}},
                              json{{"type", "landed_safely"}, {"node", "uav"}}));

    if (wind_outage) {
        cfg.script.push_back(step("Reconstruction completes on following pass", 7'400'000, {},
                                  json{{"type", "datum_delivered"}, {"label", "survey-log"}},
                                  true));
    } else {
        cfg.script.push_back(step(
            "Pass saturation", 1'501'000, {},
            json{{"type", "pass_raw_bytes_between"}, {"sat", "sat-sim"}, {"window", 0},
                 {"min", 44'744}, {"max", 45'256}},
            true));
    }
    return cfg;
}

// ---------------------------------------------------------------------------

ScenarioConfig build_multi_vehicle(std::size_t n, bool relay) {
    if (n < 1) throw ConfigError("multi_vehicle: need at least one vehicle");
    if (relay && n < 2) throw ConfigError("multi_vehicle: relay variant needs n >= 2");

    ScenarioConfig cfg;
    cfg.name = "multi_vehicle_" + std::to_string(n) + (relay ? "_relay" : "");
    cfg.seed = 4;

    const std::size_t senders = relay ? n - 1 : n;
    const std::string target = relay ? "v" + std::to_string(n) : "sat-sim";

    for (std::size_t i = 1; i <= n; ++i) {
        auto v = node("v" + std::to_string(i), NodeKind::Vehicle);
        v.radio = "HUMSAT";
        v.position = {static_cast<double>(100 * i), 0, 0};
        if (!relay || i < n) v.satcomms = satcomms(target, "console", true, true);
        if (relay && i == n) v.routes["console"] = "console";
        cfg.nodes.push_back(v);
    }

    auto sim = node("sat-sim", NodeKind::Satellite);
    sim.position = {0, 800, 0};
    sim.powered = !relay; // the relay probe runs with the satellite disabled
    sim.routes["console"] = "console";
    cfg.nodes.push_back(sim);
    cfg.nodes.push_back(node("console", NodeKind::Workstation));

    if (relay) {
        // The relay vehicle is always reachable: a degenerate ephemeris whose
        // window spans the whole period.
        cfg.ephemerides.push_back({target, 0, 300'000, 300'000});
        cfg.duration_ms = static_cast<DurationMs>(300'000 * (senders * 2 + 2));
        for (std::size_t i = 1; i < n; ++i)
            cfg.links.push_back(link("v" + std::to_string(i), target, 0));
        cfg.links.push_back(link(target, "console", 50));
    } else {
        cfg.ephemerides.push_back({"sat-sim", 60'000, 600'000, 300'000});
        cfg.duration_ms = static_cast<DurationMs>(60'000 + 600'000 * (n + 1));
        for (std::size_t i = 1; i <= n; ++i)
            cfg.links.push_back(link("v" + std::to_string(i), "sat-sim", 0));
        cfg.links.push_back(link("sat-sim", "console", 50));
    }

    // One equal-sized bulk datum per sender: 300 fragments each, several
    // passes worth of airtime, so slots stay saturated in the first window.
    std::vector<json> enqueues;
    std::vector<json> frag_checks;
    std::vector<json> delivered_checks;
    for (std::size_t i = 1; i <= senders; ++i) {
        const std::string label = "bulk-" + std::to_string(i);
        enqueues.push_back(json{{"type", "enqueue"}, {"node", "v" + std::to_string(i)},
                                {"kind", "SurveyLog"}, {"size_bytes", 7800}, {"label", label}});
        frag_checks.push_back(json{{"type", "fragment_count"}, {"label", label}, {"n", 300}});
        delivered_checks.push_back(json{{"type", "datum_delivered"}, {"label", label}});
    }
    cfg.script.push_back(step("Queue bulk transfers", 1000, enqueues, all_of(frag_checks), true));

    // In the relay variant the first window opens before anything is queued,
    // so the slot checks look at the first loaded window instead.
    const std::int64_t slot_window = relay ? 1 : 0;
    const TimeMs slot_check_at = relay ? 601'000 : 361'000;
    if (senders >= 2) {
        cfg.script.push_back(step("Slot assignment", slot_check_at, {},
                                  json{{"type", "slots_disjoint_contained"}, {"sat", target},
                                       {"window", slot_window}},
                                  true));
        cfg.script.push_back(step("Fair goodput split", slot_check_at + 1000, {},
                                  json{{"type", "pass_goodput_spread_max"}, {"sat", target},
                                       {"window", slot_window}, {"max_bytes", 26}},
                                  true));
    }
    cfg.script.push_back(step("Bulk data reconstructed", cfg.duration_ms - 1000, {},
                              all_of(delivered_checks), true));
    return cfg;
}

// ---------------------------------------------------------------------------

std::map<std::string, ScenarioConfig> canned_scenarios() {
    std::map<std::string, ScenarioConfig> m;
    m.emplace("workbench", build_workbench());
    m.emplace("dry_run", build_dry_run());
    m.emplace("dry_run_misroute", build_dry_run(DryRunVariant::MisrouteNoRecovery));
    m.emplace("dry_run_no_server_route", build_dry_run(DryRunVariant::NoServerRoute));
    m.emplace("field_trial", build_field_trial(false));
    m.emplace("field_trial_wind", build_field_trial(true));
    m.emplace("multi_vehicle_2", build_multi_vehicle(2));
    m.emplace("multi_vehicle_3", build_multi_vehicle(3));
    m.emplace("multi_vehicle_4", build_multi_vehicle(4));
    m.emplace("multi_vehicle_4_relay", build_multi_vehicle(4, true));
    return m;
}

} // namespace satdtn

#pragma once

// Canned, assertion-bearing scenarios covering the three validation stages
// (bench loop, communication dry-run, field mission) plus the multi-vehicle
// scalability probe. Each builder returns a plain ScenarioConfig, so every
// canned scenario can also be exported, diffed and extended as a config file.

#include <map>
#include <string>
#include <vector>

#include "satdtn/config.hpp"

namespace satdtn {

// Closed-loop bench setup: testbed vehicle, always-visible satellite
// simulator and a console on one lossless network. Asserts fragmentation,
// redundant transmission, duplicate suppression and byte-exact
// reconstruction. uplink_loss is a fault-injection knob for negative tests.
ScenarioConfig build_workbench(double uplink_loss = 0.0);

enum class DryRunVariant {
    // Scripted checklist incl. the first-attempt simulator crash against a
    // misrouted server and its in-step recovery; all 13 rows pass.
    Nominal,
    // The misroute is never repaired: the "Start Simulator" row fails.
    MisrouteNoRecovery,
    // The server route is never installed: frames pile up at the server and
    // the ledger ends with stored datums, none delivered.
    NoServerRoute,
};

// Two-gateway routed topology: testbed -> simulator -> gateway A -> server
// -> gateway B -> console, with the 13-row validation checklist.
ScenarioConfig build_dry_run(DryRunVariant variant = DryRunVariant::Nominal);

// Real vehicle motion over a survey plan with one 300 s pass (a second pass
// when wind_outage is set). wind_outage replays the first-flight incident:
// a mid-pass uplink outage leaves the survey log partially reassembled; the
// vehicle lands, stores the remainder and completes it on the next pass.
// Throws ConfigError if the survey plan is empty.
ScenarioConfig build_field_trial(bool wind_outage,
                                 const std::vector<Vec3>& plan = default_survey_plan());

std::vector<Vec3> default_survey_plan();

// n vehicles share one uplink with proportional slot scheduling. With
// relay = true the satellite is powered off and the last vehicle serves as
// an always-reachable store-and-forward relay instead (n >= 2).
ScenarioConfig build_multi_vehicle(std::size_t n, bool relay = false);

// Name -> config for the CLI exporter and the golden summaries.
std::map<std::string, ScenarioConfig> canned_scenarios();

} // namespace satdtn

#pragma once

// Deterministic discrete-event engine: a single (time, seq)-ordered event
// queue drives satcomms ticks, frame deliveries, pass windows, traffic,
// link schedules and scripted steps. A run is a pure function of
// (config, seed): two executions produce byte-identical event logs.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "satdtn/config.hpp"
#include "satdtn/linkmodel.hpp"
#include "satdtn/types.hpp"

namespace satdtn {

inline constexpr int kLogSchemaVersion = 1;

enum class EventKind {
    FrameArrival,
    TickSatComms,
    WindowOpen,
    WindowClose,
    EnqueueDatum,
    LinkStateChange,
    ScriptStep
};

// ---------------------------------------------------------------------------
// Vehicle motion

struct VehicleState {
    Vec3 position;
    double speed_mps = 18.0;
    std::vector<Vec3> waypoints;
    std::size_t current_wp = 0;
    bool plan_uploaded = false;
    bool plan_active = false;
    bool airborne = false;
    TimeMs airborne_since = 0;
    AirframeLimits limits;

    bool plan_complete() const { return current_wp >= waypoints.size(); }
};

// Piecewise-linear waypoint pursuit at the commanded speed. Legs switch
// inside the capture radius; the vehicle loiters (holds position) once the
// final waypoint is reached. Throws std::invalid_argument if dt_ms <= 0.
VehicleState step_vehicle(const VehicleState& v, DurationMs dt_ms);

// ---------------------------------------------------------------------------
// Metrics

struct NodeMetrics {
    std::uint64_t frames_sent = 0;      // distinct fragments handed to the radio
    std::uint64_t copies_sent = 0;      // over-the-air copy transmissions
    std::uint64_t frames_forwarded = 0; // relay forwards (bent pipe, per copy)
    std::uint64_t frames_received = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t decode_errors = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t datums_enqueued = 0; // accepted into the store queue
    std::uint64_t datums_delivered = 0;
    std::uint64_t bytes_goodput = 0; // payload bytes of datums completed here
    std::map<std::string, std::uint64_t> drops; // reason -> count (frame or datum)
    EnergyLedger energy;
};

struct SlotRecord {
    std::string node;
    TimeMs start = 0;
    TimeMs end = 0;
};

struct PassStats {
    TimeMs start = 0;
    TimeMs end = 0;
    std::uint64_t bytes_raw = 0; // over-the-air bytes sent, copies included
    std::uint64_t frames = 0;    // distinct fragments sent
    std::uint64_t copies = 0;
    std::uint64_t bytes_goodput = 0; // distinct payload bytes ingested at workstations
    std::uint64_t duplicates = 0;
    DurationMs tx_ms = 0;
    double energy_j = 0.0;
    std::map<std::string, std::uint64_t> goodput_by_source;
    std::vector<SlotRecord> slots;
};

struct StepResult {
    std::string name;
    std::string row;
    bool extension = false;
    bool outcome = false;     // actions matched and predicate held
    bool expected_pass = true;
    bool passed = false;      // outcome == expected_pass
    std::string note;
};

struct Metrics {
    std::map<std::string, NodeMetrics> node;
    std::map<std::string, std::map<std::int64_t, PassStats>> passes; // sat -> window idx
    std::vector<StepResult> steps;
    std::uint64_t datums_offered = 0; // every enqueue attempt
    std::uint64_t datums_delivered = 0;
    std::uint64_t datums_stored_end = 0;
    std::map<std::string, std::uint64_t> datums_dropped; // reason -> count
    bool endurance_violation = false;
    std::uint64_t events_executed = 0;

    bool conservation_holds() const;
    std::uint64_t dropped_total() const;
};

nlohmann::json metrics_to_json(const Metrics& m);

// ---------------------------------------------------------------------------
// Runs

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    std::optional<DurationMs> until_override;
    std::string log_path; // empty: keep the log in memory only
};

struct RunResult {
    Metrics metrics;
    std::vector<std::string> log_lines; // newline-delimited JSON records
    bool assertions_passed = true;      // every scripted step passed
};

// Execute a scenario to completion. Throws ConfigError on invalid configs
// and std::runtime_error if the log sink fails mid-run (partial log kept).
RunResult run(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Rebuild Metrics purely from a serialized event log. Equal to the online
// metrics of the run that produced the log.
Metrics fold_metrics(const std::vector<std::string>& log_lines);

} // namespace satdtn

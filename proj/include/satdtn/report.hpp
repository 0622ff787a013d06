#pragma once

// Report assembly and the text renderers behind the CLI: per-run reports
// (derived purely from Metrics, hence reproducible from a saved event log),
// the profile comparison table and the pass plan.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "satdtn/engine.hpp"
#include "satdtn/orbit.hpp"

namespace satdtn {

// Structured report: scenario name, per-node metrics, per-pass rows and
// assertion results.
nlohmann::json build_report(const std::string& scenario, const Metrics& m);

// Compact counters block used for golden summaries.
nlohmann::json report_summary(const nlohmann::json& report);

// Canonical serialization (stable across runs for identical metrics).
std::string report_to_string(const nlohmann::json& report);

void render_report_text(std::ostream& os, const nlohmann::json& report);

// One row per builtin profile: frame size, rate, redundancy, airtime,
// per-pass capacity/goodput and energy for a window of window_ms.
void render_profile_comparison(std::ostream& os, DurationMs window_ms);

// Pass plan rows from windows_between plus per-window HUMSAT capacity.
void render_pass_plan(std::ostream& os, const OrbitEphemeris& eph, TimeMs from, TimeMs to);

} // namespace satdtn

#pragma once

// Radio link constants and arithmetic: per-system profiles, frame airtime,
// per-pass capacity and goodput, delivery probability under redundant
// transmission, and energy accounting.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "satdtn/types.hpp"

namespace satdtn {

struct RadioProfile {
    std::string name;
    std::uint32_t frame_bytes = 0;   // bytes per over-the-air message, >= 7
    std::uint32_t air_rate_bps = 0;  // RF data rate, > 0
    std::uint32_t redundancy = 1;    // identical copies sent per fragment
    double tx_power_w = 0.0;
    double standby_power_w = 0.0;
    std::uint32_t feed_rate_bps = 0; // host-to-radio serial rate; may be below air rate
    double per_copy_loss = 0.0;      // i.i.d. Bernoulli loss per copy, [0, 1]
    std::optional<double> cost_per_message; // inert metadata
    // Operator-reported per-pass / per-day figures, kept as reference
    // metadata for the comparison report (not derived from the rate model).
    std::optional<std::uint32_t> ref_pass_bytes;
    std::optional<std::uint32_t> ref_daily_bytes;

    void validate() const; // throws std::invalid_argument
};

struct EnergyLedger {
    DurationMs tx_time_ms = 0;
    DurationMs standby_time_ms = 0;
    double joules = 0.0;
};

// Preset profiles keyed by name: HUMSAT, IRIDIUM_SBD, ARGOS, INMARSAT_M2M.
// HUMSAT is the default channel for store-and-forward scenarios; the rest
// exist for the comparison report.
const std::map<std::string, RadioProfile>& builtin_profiles();

// Airtime of one over-the-air copy, rounded up to whole milliseconds.
DurationMs frame_airtime(const RadioProfile& p);

// Airtime of one copy at the binding rate, min(air, feed). With the HumSat
// numbers the air link binds; the feed path matters only for profiles whose
// serial feed is slower than the RF rate.
DurationMs effective_frame_airtime(const RadioProfile& p);

// Time to move one fragment through the radio: redundancy back-to-back
// copies at the effective airtime. The scheduler admits fragments in whole
// quanta only.
DurationMs fragment_quantum(const RadioProfile& p);

// Raw channel capacity of a window in over-the-air bytes, redundant copies
// included: floor(window_s * air_rate / 8).
std::uint64_t pass_capacity(const RadioProfile& p, DurationMs window_ms);

// User payload deliverable in a window: whole fragment quanta times the
// payload carried per fragment. Throws std::invalid_argument if
// payload_per_frame exceeds frame_bytes - 6 (the fragmentation header).
std::uint64_t pass_goodput(const RadioProfile& p, DurationMs window_ms,
                           std::uint32_t payload_per_frame);

// Probability that at least one of the redundant copies survives:
// 1 - per_copy_loss ^ redundancy.
double delivery_probability(const RadioProfile& p);

// Advance a ledger by tx_ms of transmission and idle_ms of standby.
// Throws std::invalid_argument for negative durations.
void accrue_energy(EnergyLedger& ledger, const RadioProfile& p,
                   DurationMs tx_ms, DurationMs idle_ms);

} // namespace satdtn

#pragma once

// Periodic satellite visibility from the three-parameter pass model:
// last passage epoch, orbital period and communication window length.
// Windows are half-open [start, end) and recur once per period. The model
// is defined for all times, including times before the configured last
// passage (the phase is normalized into [0, period)).

#include <string>
#include <vector>

#include "satdtn/types.hpp"

namespace satdtn {

struct OrbitEphemeris {
    std::string satellite_id;
    TimeMs last_passage = 0; // ms since scenario epoch
    DurationMs period = 0;   // > 0
    DurationMs window = 0;   // 0 < window <= period

    bool valid() const { return period > 0 && window > 0 && window <= period; }
    void validate() const;
};

struct PassWindow {
    TimeMs start = 0;
    TimeMs end = 0; // exclusive; end - start == ephemeris window
    std::string satellite_id;

    bool contains(TimeMs t) const { return t >= start && t < end; }
};

// Phase of t relative to the pass cycle, normalized to [0, period).
TimeMs orbit_phase(const OrbitEphemeris& eph, TimeMs t);

// True iff the satellite is in view at time t.
bool is_visible(const OrbitEphemeris& eph, TimeMs t);

// Earliest window whose end is after t. If t lies inside a window that
// window is returned, otherwise the next one to open.
PassWindow next_window(const OrbitEphemeris& eph, TimeMs t);

// All windows overlapping the closed range [from, to], sorted by start.
// Throws std::invalid_argument if from > to.
std::vector<PassWindow> windows_between(const OrbitEphemeris& eph, TimeMs from, TimeMs to);

// Index of the window starting at start: (start - last_passage) / period.
std::int64_t window_index(const OrbitEphemeris& eph, TimeMs window_start);

// Circular-orbit period in seconds for a given altitude above the mean
// Earth radius. Throws std::invalid_argument for non-positive altitudes.
double period_from_altitude(double altitude_km);

} // namespace satdtn

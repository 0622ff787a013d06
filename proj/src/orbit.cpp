#include "satdtn/orbit.hpp"

#include <cmath>
#include <stdexcept>

namespace satdtn {

namespace {

// Floor division for possibly-negative numerators.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace

void OrbitEphemeris::validate() const {
    if (period <= 0)
        throw std::invalid_argument("ephemeris '" + satellite_id + "': period must be > 0");
    if (window <= 0 || window > period)
        throw std::invalid_argument("ephemeris '" + satellite_id +
                                    "': window must satisfy 0 < window <= period");
}

TimeMs orbit_phase(const OrbitEphemeris& eph, TimeMs t) {
    TimeMs m = (t - eph.last_passage) % eph.period;
    if (m < 0) m += eph.period;
    return m;
}

bool is_visible(const OrbitEphemeris& eph, TimeMs t) {
    return orbit_phase(eph, t) < eph.window;
}

PassWindow next_window(const OrbitEphemeris& eph, TimeMs t) {
    std::int64_t k = floor_div(t - eph.last_passage, eph.period);
    TimeMs start = eph.last_passage + k * eph.period;
    if (t >= start + eph.window) {
        ++k;
        start += eph.period;
    }
    return PassWindow{start, start + eph.window, eph.satellite_id};
}

std::vector<PassWindow> windows_between(const OrbitEphemeris& eph, TimeMs from, TimeMs to) {
    if (from > to) throw std::invalid_argument("windows_between: from > to");
    // Window k = [T0 + k*P, T0 + k*P + W) overlaps [from, to] iff
    // start <= to and end > from.
    std::int64_t k_min = floor_div(from - eph.last_passage - eph.window, eph.period) + 1;
    std::int64_t k_max = floor_div(to - eph.last_passage, eph.period);
    std::vector<PassWindow> out;
    for (std::int64_t k = k_min; k <= k_max; ++k) {
        TimeMs start = eph.last_passage + k * eph.period;
        out.push_back(PassWindow{start, start + eph.window, eph.satellite_id});
    }
    return out;
}

std::int64_t window_index(const OrbitEphemeris& eph, TimeMs window_start) {
    return floor_div(window_start - eph.last_passage, eph.period);
}

double period_from_altitude(double altitude_km) {
    if (!(altitude_km > 0.0))
        throw std::invalid_argument("period_from_altitude: altitude must be > 0");
    constexpr double earth_radius_km = 6378.137;
    constexpr double mu_km3_s2 = 398600.4418;
    const double a = earth_radius_km + altitude_km;
    return 2.0 * M_PI * std::sqrt(a * a * a / mu_km3_s2);
}

} // namespace satdtn

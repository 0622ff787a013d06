#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "satdtn/orbit.hpp"
#include "satdtn/rng.hpp"

using namespace satdtn;

namespace {

// Independent oracle: find windows overlapping [from, to] by scanning
// is_visible at 1 ms resolution, extended one period on each side so
// windows that only poke into the range are still found. Requires
// window < period so the scan can anchor on an invisible instant.
std::vector<PassWindow> scan_windows(const OrbitEphemeris& eph, TimeMs from, TimeMs to) {
    std::vector<PassWindow> found;
    TimeMs t = from - 2 * eph.period;
    while (is_visible(eph, t)) ++t; // at most `window` steps
    const TimeMs stop = to + eph.period;
    bool in = false;
    TimeMs start = 0;
    for (; t <= stop; ++t) {
        bool v = is_visible(eph, t);
        if (v && !in) {
            in = true;
            start = t;
        } else if (!v && in) {
            in = false;
            TimeMs end = t;
            if (start <= to && end > from)
                found.push_back(PassWindow{start, end, eph.satellite_id});
        }
    }
    return found;
}

// Independent evaluation of the circular-orbit period, kept separate from
// the implementation under test.
double kepler_period_s(double altitude_km) {
    const double a = 6378.137 + altitude_km;
    return 2.0 * M_PI * std::sqrt(a * a * a / 398600.4418);
}

OrbitEphemeris eph(TimeMs t0, DurationMs p, DurationMs w) {
    return OrbitEphemeris{"sat", t0, p, w};
}

} // namespace

TEST_CASE("is_visible at window boundaries") {
    auto e = eph(1000, 6000, 300);
    CHECK(is_visible(e, 1000));         // window start
    CHECK_FALSE(is_visible(e, 1300));   // half-open end
    CHECK(is_visible(e, 7000));         // (7000-1000) mod 6000 == 0
    CHECK_FALSE(is_visible(e, 999));    // phase 5999 >= 300
    CHECK(is_visible(e, 1299));
    CHECK(is_visible(e, 1000 - 6000));  // one period earlier
}

TEST_CASE("next_window returns the earliest window ending after t") {
    auto e = eph(0, 6000, 300);

    auto w = next_window(e, 100);
    CHECK(w.start == 0);
    CHECK(w.end == 300);

    w = next_window(e, 300); // end is exclusive
    CHECK(w.start == 6000);
    CHECK(w.end == 6300);

    w = next_window(e, 17999);
    CHECK(w.start == 18000);
    CHECK(w.end == 18300);

    w = next_window(e, -100); // before the configured last passage
    CHECK(w.start == 0);
}

TEST_CASE("windows_between basic ranges") {
    auto e = eph(0, 6000, 300);

    auto ws = windows_between(e, 0, 12000);
    REQUIRE(ws.size() == 3);
    CHECK(ws[0].start == 0);
    CHECK(ws[1].start == 6000);
    CHECK(ws[2].start == 12000);

    CHECK(windows_between(e, 400, 5000).empty());

    ws = windows_between(e, 250, 260);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].start == 0);
    CHECK(ws[0].end == 300);

    CHECK_THROWS_AS(windows_between(e, 10, 9), std::invalid_argument);
}

TEST_CASE("windows_between matches the 1 ms scan oracle") {
    SplitMix64 rng(20240901);
    for (int trial = 0; trial < 20; ++trial) {
        OrbitEphemeris e;
        e.satellite_id = "sat";
        e.period = 500 + static_cast<DurationMs>(rng.next_below(4500));
        // The scan oracle needs at least one invisible instant per cycle.
        e.window = 1 + static_cast<DurationMs>(rng.next_below(e.period - 1));
        e.last_passage = static_cast<TimeMs>(rng.next_below(20000)) - 10000;
        TimeMs from = static_cast<TimeMs>(rng.next_below(30000)) - 15000;
        TimeMs to = from + static_cast<TimeMs>(rng.next_below(3 * e.period));

        auto expect = scan_windows(e, from, to);
        auto got = windows_between(e, from, to);
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].start == expect[i].start);
            CHECK(got[i].end == expect[i].end);
        }
    }
}

TEST_CASE("periodicity and containment invariants") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 10000; ++trial) {
        OrbitEphemeris e;
        e.satellite_id = "sat";
        e.period = 1 + static_cast<DurationMs>(rng.next_below(100000));
        e.window = 1 + static_cast<DurationMs>(rng.next_below(e.period));
        e.last_passage = static_cast<TimeMs>(rng.next_u64() % 2000000) - 1000000;
        TimeMs t = static_cast<TimeMs>(rng.next_u64() % 4000000) - 2000000;

        REQUIRE(is_visible(e, t) == is_visible(e, t + e.period));

        auto w = next_window(e, t);
        REQUIRE(w.end - w.start == e.window);
        REQUIRE(w.end > t);
        if (is_visible(e, t)) {
            REQUIRE(w.contains(t));
        } else {
            REQUIRE(w.start > t);
        }
        // start is congruent to the last passage modulo the period
        REQUIRE((w.start - e.last_passage) % e.period == 0);
    }
}

TEST_CASE("duty cycle over whole periods") {
    SplitMix64 rng(5150);
    for (int trial = 0; trial < 8; ++trial) {
        OrbitEphemeris e;
        e.satellite_id = "sat";
        e.period = 100 + static_cast<DurationMs>(rng.next_below(900));
        e.window = 1 + static_cast<DurationMs>(rng.next_below(e.period));
        e.last_passage = static_cast<TimeMs>(rng.next_below(1000)) - 500;
        const int n = 1 + static_cast<int>(rng.next_below(3));
        TimeMs t0 = static_cast<TimeMs>(rng.next_below(5000)) - 2500;

        TimeMs visible = 0;
        for (TimeMs t = t0; t < t0 + n * e.period; ++t)
            if (is_visible(e, t)) ++visible;
        CHECK(visible == n * e.window);
    }
}

TEST_CASE("ephemeris validation") {
    CHECK_THROWS_AS(eph(0, 0, 1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(eph(0, 100, 0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(eph(0, 100, 101).validate(), std::invalid_argument);
    CHECK_NOTHROW(eph(0, 100, 100).validate()); // always visible is legal
}

TEST_CASE("period_from_altitude against the closed form") {
    CHECK(period_from_altitude(600.0) ==
          doctest::Approx(kepler_period_s(600.0)).epsilon(1e-12));
    CHECK(period_from_altitude(600.0) == doctest::Approx(5801.6).epsilon(0.001));
    CHECK(period_from_altitude(780.0) == doctest::Approx(6027.0).epsilon(0.005));
    CHECK(period_from_altitude(35786.0) == doctest::Approx(86164.0).epsilon(0.005));
    CHECK_THROWS_AS(period_from_altitude(0.0), std::invalid_argument);
    CHECK_THROWS_AS(period_from_altitude(-10.0), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "satdtn/linkmodel.hpp"
#include "satdtn/rng.hpp"

using namespace satdtn;

namespace {

const RadioProfile& preset(const std::string& name) {
    return builtin_profiles().at(name);
}

RadioProfile lossy_humsat(double loss, std::uint32_t redundancy) {
    RadioProfile p = preset("HUMSAT");
    p.per_copy_loss = loss;
    p.redundancy = redundancy;
    return p;
}

} // namespace

TEST_CASE("builtin profile constants") {
    CHECK(preset("HUMSAT").frame_bytes == 32);
    CHECK(preset("HUMSAT").air_rate_bps == 1200);
    CHECK(preset("HUMSAT").redundancy == 4);
    CHECK(preset("HUMSAT").tx_power_w == doctest::Approx(3.2));
    CHECK(preset("HUMSAT").standby_power_w == doctest::Approx(0.14));
    CHECK(preset("HUMSAT").feed_rate_bps == 9600);

    CHECK(preset("IRIDIUM_SBD").frame_bytes == 50);
    CHECK(preset("IRIDIUM_SBD").air_rate_bps == 2400);
    CHECK(preset("IRIDIUM_SBD").redundancy == 1);
    CHECK(preset("IRIDIUM_SBD").tx_power_w == doctest::Approx(1.0));

    CHECK(preset("ARGOS").frame_bytes == 31);
    CHECK(preset("ARGOS").air_rate_bps == 400);
    CHECK(preset("ARGOS").tx_power_w == doctest::Approx(1.0));
    CHECK(preset("ARGOS").ref_pass_bytes == 3100);

    CHECK(preset("INMARSAT_M2M").frame_bytes == 6400);
    CHECK(preset("INMARSAT_M2M").redundancy == 1);
    CHECK(preset("INMARSAT_M2M").tx_power_w == doctest::Approx(9.0));

    for (const auto& [name, p] : builtin_profiles()) CHECK_NOTHROW(p.validate());
}

TEST_CASE("profile validation rejects bad fields") {
    RadioProfile p = preset("HUMSAT");
    p.frame_bytes = 6;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset("HUMSAT");
    p.air_rate_bps = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset("HUMSAT");
    p.redundancy = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset("HUMSAT");
    p.per_copy_loss = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("frame airtime") {
    CHECK(frame_airtime(preset("HUMSAT")) == 214); // ceil(256000/1200)
    CHECK(frame_airtime(preset("ARGOS")) == 620);  // 248000/400
    CHECK(effective_frame_airtime(preset("HUMSAT")) == 214); // feed 9600 does not bind

    RadioProfile slow_feed = preset("HUMSAT");
    slow_feed.feed_rate_bps = 600; // feed becomes the bottleneck
    CHECK(effective_frame_airtime(slow_feed) == 427);
}

TEST_CASE("pass capacity") {
    CHECK(pass_capacity(preset("HUMSAT"), 300'000) == 45'000);
    CHECK(pass_capacity(preset("HUMSAT"), 0) == 0);
    CHECK(pass_capacity(preset("ARGOS"), 62'000) == 3'100);
}

TEST_CASE("pass goodput") {
    CHECK(pass_goodput(preset("HUMSAT"), 300'000, 26) == 9'100); // 350 * 26
    CHECK(pass_goodput(preset("HUMSAT"), 0, 26) == 0);

    RadioProfile single = lossy_humsat(0.0, 1);
    CHECK(pass_goodput(single, 300'000, 26) == 36'426); // 1401 * 26

    CHECK_THROWS_AS(pass_goodput(preset("HUMSAT"), 300'000, 27), std::invalid_argument);
}

TEST_CASE("capacity and goodput monotonicity") {
    SplitMix64 rng(404);
    for (int i = 0; i < 200; ++i) {
        RadioProfile p = preset("HUMSAT");
        p.air_rate_bps = 100 + static_cast<std::uint32_t>(rng.next_below(10000));
        p.feed_rate_bps = p.air_rate_bps;
        DurationMs w1 = static_cast<DurationMs>(rng.next_below(400000));
        DurationMs w2 = w1 + static_cast<DurationMs>(rng.next_below(100000));
        CHECK(pass_capacity(p, w1) <= pass_capacity(p, w2));

        RadioProfile faster = p;
        faster.air_rate_bps += 1 + static_cast<std::uint32_t>(rng.next_below(1000));
        faster.feed_rate_bps = faster.air_rate_bps;
        CHECK(pass_capacity(p, w1) <= pass_capacity(faster, w1));

        // goodput never exceeds the de-duplicated payload share of capacity,
        // plus one frame of quantization slack
        const std::uint64_t cap = pass_capacity(p, w1);
        const std::uint64_t good = pass_goodput(p, w1, 26);
        CHECK(good <= cap / p.redundancy * 26 / p.frame_bytes + 26);
    }
}

TEST_CASE("delivery probability") {
    CHECK(delivery_probability(lossy_humsat(0.0, 4)) == doctest::Approx(1.0));
    CHECK(delivery_probability(lossy_humsat(1.0, 4)) == doctest::Approx(0.0));
    CHECK(delivery_probability(lossy_humsat(0.5, 4)) == doctest::Approx(0.9375));
}

TEST_CASE("delivery probability matches Monte-Carlo draws") {
    RadioProfile p = lossy_humsat(0.5, 4);
    SplitMix64 rng(1234);
    const int trials = 1'000'000;
    int delivered = 0;
    for (int i = 0; i < trials; ++i) {
        bool any = false;
        for (std::uint32_t k = 0; k < p.redundancy; ++k)
            if (!sample_loss(rng, p.per_copy_loss)) any = true;
        if (any) ++delivered;
    }
    const double rate = static_cast<double>(delivered) / trials;
    CHECK(std::abs(rate - delivery_probability(p)) <= 0.002);
}

TEST_CASE("delivery probability monotonicity") {
    SplitMix64 rng(99);
    for (int i = 0; i < 200; ++i) {
        double loss = rng.next_double();
        double more_loss = loss + (1.0 - loss) * rng.next_double();
        std::uint32_t r = 1 + static_cast<std::uint32_t>(rng.next_below(8));
        CHECK(delivery_probability(lossy_humsat(more_loss, r)) <=
              delivery_probability(lossy_humsat(loss, r)) + 1e-12);
        CHECK(delivery_probability(lossy_humsat(loss, r)) <=
              delivery_probability(lossy_humsat(loss, r + 1)) + 1e-12);
    }
}

TEST_CASE("energy ledger accrual") {
    EnergyLedger ledger;
    const RadioProfile& p = preset("HUMSAT");

    accrue_energy(ledger, p, 300'000, 0);
    CHECK(ledger.joules == doctest::Approx(960.0));
    CHECK(ledger.tx_time_ms == 300'000);

    accrue_energy(ledger, p, 0, 1'000'000);
    CHECK(ledger.joules == doctest::Approx(960.0 + 140.0));
    CHECK(ledger.standby_time_ms == 1'000'000);

    EnergyLedger before = ledger;
    accrue_energy(ledger, p, 0, 0);
    CHECK(ledger.joules == before.joules);
    CHECK(ledger.tx_time_ms == before.tx_time_ms);

    CHECK_THROWS_AS(accrue_energy(ledger, p, -1, 0), std::invalid_argument);
}

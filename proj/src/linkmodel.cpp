#include "satdtn/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satdtn {

void RadioProfile::validate() const {
    if (frame_bytes < 7)
        throw std::invalid_argument("profile '" + name + "': frame_bytes must be >= 7");
    if (air_rate_bps == 0)
        throw std::invalid_argument("profile '" + name + "': air_rate_bps must be > 0");
    if (feed_rate_bps == 0)
        throw std::invalid_argument("profile '" + name + "': feed_rate_bps must be > 0");
    if (redundancy < 1)
        throw std::invalid_argument("profile '" + name + "': redundancy must be >= 1");
    if (per_copy_loss < 0.0 || per_copy_loss > 1.0)
        throw std::invalid_argument("profile '" + name + "': per_copy_loss must be in [0, 1]");
    if (tx_power_w < 0.0 || standby_power_w < 0.0)
        throw std::invalid_argument("profile '" + name + "': power must be non-negative");
}

const std::map<std::string, RadioProfile>& builtin_profiles() {
    static const std::map<std::string, RadioProfile> presets = [] {
        std::map<std::string, RadioProfile> m;

        RadioProfile humsat;
        humsat.name = "HUMSAT";
        humsat.frame_bytes = 32;
        humsat.air_rate_bps = 1200;
        humsat.redundancy = 4;
        humsat.tx_power_w = 3.2;       // at 30 dBm
        humsat.standby_power_w = 0.14;
        humsat.feed_rate_bps = 9600;   // UART feed between host CPU and radio
        m.emplace(humsat.name, humsat);

        RadioProfile iridium;
        iridium.name = "IRIDIUM_SBD";
        iridium.frame_bytes = 50;
        iridium.air_rate_bps = 2400;
        iridium.redundancy = 1;
        iridium.tx_power_w = 1.0;
        iridium.feed_rate_bps = 2400;
        iridium.cost_per_message = 0.14;
        m.emplace(iridium.name, iridium);

        RadioProfile argos;
        argos.name = "ARGOS";
        argos.frame_bytes = 31;
        argos.air_rate_bps = 400;      // terminal uplink rate
        argos.redundancy = 1;
        argos.tx_power_w = 1.0;
        argos.feed_rate_bps = 400;
        argos.ref_pass_bytes = 3100;   // operator-reported interactive-mode figure
        argos.ref_daily_bytes = 10000;
        m.emplace(argos.name, argos);

        RadioProfile inmarsat;
        inmarsat.name = "INMARSAT_M2M";
        inmarsat.frame_bytes = 6400;
        inmarsat.air_rate_bps = 100000; // system headline rate; M2M modem rate unpublished
        inmarsat.redundancy = 1;
        inmarsat.tx_power_w = 9.0;
        inmarsat.feed_rate_bps = 100000;
        m.emplace(inmarsat.name, inmarsat);

        for (auto& [name, p] : m) p.validate();
        return m;
    }();
    return presets;
}

namespace {

DurationMs airtime_at_rate(std::uint32_t frame_bytes, std::uint32_t rate_bps) {
    const std::uint64_t bits_ms = static_cast<std::uint64_t>(frame_bytes) * 8ull * 1000ull;
    return static_cast<DurationMs>((bits_ms + rate_bps - 1) / rate_bps);
}

} // namespace

DurationMs frame_airtime(const RadioProfile& p) {
    return airtime_at_rate(p.frame_bytes, p.air_rate_bps);
}

DurationMs effective_frame_airtime(const RadioProfile& p) {
    return airtime_at_rate(p.frame_bytes, std::min(p.air_rate_bps, p.feed_rate_bps));
}

DurationMs fragment_quantum(const RadioProfile& p) {
    return effective_frame_airtime(p) * static_cast<DurationMs>(p.redundancy);
}

std::uint64_t pass_capacity(const RadioProfile& p, DurationMs window_ms) {
    if (window_ms < 0) throw std::invalid_argument("pass_capacity: negative window");
    return static_cast<std::uint64_t>(window_ms) * p.air_rate_bps / 8000ull;
}

std::uint64_t pass_goodput(const RadioProfile& p, DurationMs window_ms,
                           std::uint32_t payload_per_frame) {
    if (window_ms < 0) throw std::invalid_argument("pass_goodput: negative window");
    if (payload_per_frame > p.frame_bytes - 6)
        throw std::invalid_argument("pass_goodput: payload_per_frame exceeds frame capacity");
    const std::uint64_t quanta =
        static_cast<std::uint64_t>(window_ms) / static_cast<std::uint64_t>(fragment_quantum(p));
    return quanta * payload_per_frame;
}

double delivery_probability(const RadioProfile& p) {
    return 1.0 - std::pow(p.per_copy_loss, static_cast<double>(p.redundancy));
}

void accrue_energy(EnergyLedger& ledger, const RadioProfile& p,
                   DurationMs tx_ms, DurationMs idle_ms) {
    if (tx_ms < 0 || idle_ms < 0)
        throw std::invalid_argument("accrue_energy: negative duration");
    ledger.tx_time_ms += tx_ms;
    ledger.standby_time_ms += idle_ms;
    ledger.joules += p.tx_power_w * (static_cast<double>(tx_ms) / 1000.0) +
                     p.standby_power_w * (static_cast<double>(idle_ms) / 1000.0);
}

} // namespace satdtn

#include "satdtn/report.hpp"

#include <iomanip>
#include <ostream>

#include "satdtn/linkmodel.hpp"

namespace satdtn {

using nlohmann::json;

json build_report(const std::string& scenario, const Metrics& m) {
    json rep;
    rep["scenario"] = scenario;
    rep["metrics"] = metrics_to_json(m);

    json passes = json::array();
    for (const auto& [sat, windows] : m.passes) {
        for (const auto& [idx, p] : windows) {
            const DurationMs len = p.end - p.start;
            json row{{"sat", sat},
                     {"window", idx},
                     {"start_ms", p.start},
                     {"end_ms", p.end},
                     {"bytes_raw", p.bytes_raw},
                     {"bytes_goodput", p.bytes_goodput},
                     {"frames", p.frames},
                     {"copies", p.copies},
                     {"duplicates", p.duplicates},
                     {"energy_j", p.energy_j},
                     {"utilization", len > 0 ? static_cast<double>(p.tx_ms) / len : 0.0}};
            passes.push_back(row);
        }
    }
    rep["passes"] = passes;

    json assertions = json::array();
    std::uint64_t passed = 0;
    for (const auto& s : m.steps) {
        assertions.push_back({{"name", s.name},
                              {"row", s.row},
                              {"extension", s.extension},
                              {"outcome", s.outcome},
                              {"expected_pass", s.expected_pass},
                              {"passed", s.passed},
                              {"note", s.note}});
        if (s.passed) ++passed;
    }
    rep["assertions"] = assertions;
    rep["summary"] = {
        {"scenario", scenario},
        {"assertions", {{"total", m.steps.size()}, {"passed", passed}}},
        {"datums",
         {{"offered", m.datums_offered},
          {"delivered", m.datums_delivered},
          {"stored_end", m.datums_stored_end},
          {"dropped", m.datums_dropped}}},
        {"conservation_holds", m.conservation_holds()},
        {"endurance_violation", m.endurance_violation},
    };
    return rep;
}

json report_summary(const json& report) { return report.at("summary"); }

std::string report_to_string(const json& report) { return report.dump(2) + "\n"; }

void render_report_text(std::ostream& os, const json& report) {
    os << "scenario: " << report.at("scenario").get<std::string>() << "\n";

    const auto& summary = report.at("summary");
    os << "datums: offered " << summary.at("datums").at("offered")
       << ", delivered " << summary.at("datums").at("delivered")
       << ", stored " << summary.at("datums").at("stored_end")
       << ", dropped " << summary.at("datums").at("dropped").size() << " reason(s)\n";

    const auto& nodes = report.at("metrics").at("nodes");
    os << "\nnode              sent  copies     rx    dup  deliv  goodput     energy_j\n";
    for (auto it = nodes.begin(); it != nodes.end(); ++it) {
        const auto& n = it.value();
        os << std::left << std::setw(16) << it.key() << std::right << std::setw(6)
           << n.at("frames_sent").get<std::uint64_t>() << std::setw(8)
           << n.at("copies_sent").get<std::uint64_t>() << std::setw(7)
           << n.at("frames_received").get<std::uint64_t>() << std::setw(7)
           << n.at("duplicates").get<std::uint64_t>() << std::setw(7)
           << n.at("datums_delivered").get<std::uint64_t>() << std::setw(9)
           << n.at("bytes_goodput").get<std::uint64_t>() << std::setw(13) << std::fixed
           << std::setprecision(2) << n.at("energy").at("joules").get<double>() << "\n";
    }

    const auto& passes = report.at("passes");
    if (!passes.empty()) {
        os << "\npass             window      raw B     good B  frames  copies    dup  util\n";
        for (const auto& p : passes) {
            os << std::left << std::setw(16) << p.at("sat").get<std::string>() << std::right
               << std::setw(7) << p.at("window").get<std::int64_t>() << std::setw(11)
               << p.at("bytes_raw").get<std::uint64_t>() << std::setw(11)
               << p.at("bytes_goodput").get<std::uint64_t>() << std::setw(8)
               << p.at("frames").get<std::uint64_t>() << std::setw(8)
               << p.at("copies").get<std::uint64_t>() << std::setw(7)
               << p.at("duplicates").get<std::uint64_t>() << std::setw(6) << std::fixed
               << std::setprecision(2) << p.at("utilization").get<double>() << "\n";
        }
    }

    const auto& assertions = report.at("assertions");
    if (!assertions.empty()) {
        os << "\nassertions:\n";
        for (const auto& a : assertions) {
            os << "  [" << (a.at("passed").get<bool>() ? "PASS" : "FAIL") << "] "
               << a.at("name").get<std::string>();
            if (a.at("extension").get<bool>()) os << " (extension)";
            if (!a.at("passed").get<bool>() && !a.at("note").get<std::string>().empty())
                os << "  -- " << a.at("note").get<std::string>();
            os << "\n";
        }
    }
}

void render_profile_comparison(std::ostream& os, DurationMs window_ms) {
    os << "profile         frame B  rate bps  red  airtime ms  capacity B  goodput B  "
          "energy J  reported B/pass\n";
    for (const auto& [name, p] : builtin_profiles()) {
        const std::uint32_t payload = p.frame_bytes - 6;
        os << std::left << std::setw(16) << name << std::right << std::setw(7) << p.frame_bytes
           << std::setw(10) << p.air_rate_bps << std::setw(5) << p.redundancy << std::setw(12)
           << frame_airtime(p) << std::setw(12) << pass_capacity(p, window_ms) << std::setw(11)
           << pass_goodput(p, window_ms, payload) << std::setw(10) << std::fixed
           << std::setprecision(1) << p.tx_power_w * (static_cast<double>(window_ms) / 1000.0);
        if (p.ref_pass_bytes)
            os << std::setw(17) << *p.ref_pass_bytes;
        else
            os << std::setw(17) << "-";
        os << "\n";
    }
}

void render_pass_plan(std::ostream& os, const OrbitEphemeris& eph, TimeMs from, TimeMs to) {
    const auto& humsat = builtin_profiles().at("HUMSAT");
    os << "satellite: " << eph.satellite_id << "  period_ms: " << eph.period
       << "  window_ms: " << eph.window << "\n";
    os << "window      start_ms        end_ms  duration_s  capacity B\n";
    std::size_t i = 0;
    for (const auto& w : windows_between(eph, from, to)) {
        os << std::right << std::setw(6) << i++ << std::setw(14) << w.start << std::setw(14)
           << w.end << std::setw(12) << (w.end - w.start) / 1000 << std::setw(12)
           << pass_capacity(humsat, w.end - w.start) << "\n";
    }
}

} // namespace satdtn

#include "satdtn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <memory>
#include <queue>
#include <sstream>

#include "satdtn/dtn.hpp"
#include "satdtn/fragproto.hpp"
#include "satdtn/orbit.hpp"
#include "satdtn/rng.hpp"

namespace satdtn {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Vehicle motion

VehicleState step_vehicle(const VehicleState& v, DurationMs dt_ms) {
    if (dt_ms <= 0) throw std::invalid_argument("step_vehicle: dt must be > 0");
    VehicleState out = v;
    if (!out.plan_active || out.plan_complete()) return out; // loiter in place
    double remaining = out.speed_mps * (static_cast<double>(dt_ms) / 1000.0);
    while (remaining > 1e-9 && !out.plan_complete()) {
        const Vec3& tgt = out.waypoints[out.current_wp];
        const double d = distance_m(out.position, tgt);
        if (d <= remaining) {
            out.position = tgt;
            remaining -= d;
            ++out.current_wp;
        } else {
            const double f = remaining / d;
            out.position.x += (tgt.x - out.position.x) * f;
            out.position.y += (tgt.y - out.position.y) * f;
            out.position.z += (tgt.z - out.position.z) * f;
            remaining = 0.0;
            if (distance_m(out.position, tgt) <= out.limits.capture_radius_m) ++out.current_wp;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics helpers

std::uint64_t Metrics::dropped_total() const {
    std::uint64_t n = 0;
    for (const auto& [reason, count] : datums_dropped) n += count;
    return n;
}

bool Metrics::conservation_holds() const {
    return datums_offered == datums_delivered + datums_stored_end + dropped_total();
}

json metrics_to_json(const Metrics& m) {
    json j;
    json nodes = json::object();
    for (const auto& [id, nm] : m.node) {
        json nj{{"frames_sent", nm.frames_sent},
                {"copies_sent", nm.copies_sent},
                {"frames_forwarded", nm.frames_forwarded},
                {"frames_received", nm.frames_received},
                {"duplicates", nm.duplicates},
                {"decode_errors", nm.decode_errors},
                {"conflicts", nm.conflicts},
                {"datums_enqueued", nm.datums_enqueued},
                {"datums_delivered", nm.datums_delivered},
                {"bytes_goodput", nm.bytes_goodput},
                {"drops", nm.drops},
                {"energy",
                 {{"tx_time_ms", nm.energy.tx_time_ms},
                  {"standby_time_ms", nm.energy.standby_time_ms},
                  {"joules", nm.energy.joules}}}};
        nodes[id] = nj;
    }
    j["nodes"] = nodes;

    json passes = json::object();
    for (const auto& [sat, windows] : m.passes) {
        json wj = json::object();
        for (const auto& [idx, p] : windows) {
            json slots = json::array();
            for (const auto& s : p.slots)
                slots.push_back({{"node", s.node}, {"start", s.start}, {"end", s.end}});
            wj[std::to_string(idx)] = json{{"start", p.start},
                                           {"end", p.end},
                                           {"bytes_raw", p.bytes_raw},
                                           {"frames", p.frames},
                                           {"copies", p.copies},
                                           {"bytes_goodput", p.bytes_goodput},
                                           {"duplicates", p.duplicates},
                                           {"tx_ms", p.tx_ms},
                                           {"energy_j", p.energy_j},
                                           {"goodput_by_source", p.goodput_by_source},
                                           {"slots", slots}};
        }
        passes[sat] = wj;
    }
    j["passes"] = passes;

    json steps = json::array();
    for (const auto& s : m.steps)
        steps.push_back({{"name", s.name},
                         {"row", s.row},
                         {"extension", s.extension},
                         {"outcome", s.outcome},
                         {"expected_pass", s.expected_pass},
                         {"passed", s.passed},
                         {"note", s.note}});
    j["steps"] = steps;

    j["datums"] = {{"offered", m.datums_offered},
                   {"delivered", m.datums_delivered},
                   {"stored_end", m.datums_stored_end},
                   {"dropped", m.datums_dropped}};
    j["endurance_violation"] = m.endurance_violation;
    j["events_executed"] = m.events_executed;
    return j;
}

// ---------------------------------------------------------------------------
// Engine internals

namespace {

struct FrameInFlight {
    std::vector<std::uint8_t> wire;
    std::uint64_t datum_id = 0;
    std::string dest;
    int src_node = -1;
    TimeMs sent_at = 0;
    std::string sat;             // pass the frame was uplinked in
    std::int64_t window_idx = 0;
    std::uint32_t copy_index = 0;
    int hops = 0;
};

struct Event {
    TimeMs time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::TickSatComms;
    int node = -1;
    int link = -1;
    std::int64_t window_idx = 0;
    TimeMs window_start = 0;
    TimeMs window_end = 0;
    bool flag = false; // open / up / extra tick / check phase
    int step = -1;
    int traffic = -1;
    std::uint64_t traffic_n = 0;
    std::shared_ptr<const FrameInFlight> frame;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

struct DatumRec {
    std::uint64_t id = 0;
    int src = -1;
    std::string label;
    std::string kind;
    std::string dest;
    std::vector<std::uint8_t> data;
    std::uint16_t msg_id = 0;
    std::size_t frags = 0;
    bool accepted = false;
    std::string reject_reason;
    bool delivered = false;
    bool delivered_ok = false;
    std::int64_t in_flight = 0;
    std::string drop_cause; // latest frame-level loss or eviction cause
};

struct NodeState {
    NodeConfig cfg;
    int index = -1;
    bool powered = true;
    Vec3 pos;
    VehicleState vehicle;
    TimeMs last_motion_at = 0;
    TimeMs last_snapshot_at = std::numeric_limits<TimeMs>::min();
    std::optional<RadioProfile> radio;
    SatCommsConfig satcomms;
    bool has_satcomms = false;
    StoreQueue queue;
    std::uint16_t next_msg_id = 0;
    TimeMs radio_busy_until = 0;
    bool slot_restricted = false;
    TimeMs slot_start = 0;
    TimeMs slot_end = std::numeric_limits<TimeMs>::max();
    RoutingTable routes;
    ReassemblyStore reasm;
    DurationMs reasm_max_age = 0;
    struct StoredFrame {
        std::shared_ptr<const FrameInFlight> frame;
        TimeMs stored_at = 0;
    };
    std::deque<StoredFrame> relay_buf;
    EnergyLedger energy;
    bool energy_attached = false;
    TimeMs last_energy_at = 0;
    bool endurance_flagged = false;
    bool regular_tick_pending = false;

    NodeState() : queue(1ull << 20) {}
};

struct LinkState {
    LinkConfig cfg;
    bool admin_up = true;
    SplitMix64 rng{0};
};

class Engine {
public:
    Engine(const ScenarioConfig& cfg, const RunOptions& opts) : cfg_(cfg) {
        if (opts.seed_override) cfg_.seed = *opts.seed_override;
        if (opts.until_override) cfg_.duration_ms = *opts.until_override;
        validate_config(cfg_);
        log_path_ = opts.log_path;
    }

    RunResult execute();

private:
    // --- setup -------------------------------------------------------------
    void build_state();
    void schedule_initial_events();

    // --- event handlers ----------------------------------------------------
    void on_tick(Event& ev);
    void on_frame_arrival(Event& ev);
    void on_window(Event& ev);
    void on_enqueue(Event& ev);
    void on_link_change(Event& ev);
    void on_script(Event& ev);

    // --- mechanics ----------------------------------------------------------
    void push(Event ev) {
        ev.seq = next_seq_++;
        pq_.push(std::move(ev));
    }
    void schedule_tick(int node, TimeMs t, bool extra) {
        if (t > cfg_.duration_ms) return;
        if (!extra) {
            // one regular housekeeping chain per node, whatever the power
            // cycling history
            if (nodes_[node].regular_tick_pending) return;
            nodes_[node].regular_tick_pending = true;
        }
        Event ev;
        ev.time = t;
        ev.kind = EventKind::TickSatComms;
        ev.node = node;
        ev.flag = extra;
        push(std::move(ev));
    }
    int node_index(const std::string& id) const {
        auto it = node_index_.find(id);
        return it == node_index_.end() ? -1 : it->second;
    }
    int link_between(int a, int b) const {
        auto it = link_by_pair_.find({std::min(a, b), std::max(a, b)});
        return it == link_by_pair_.end() ? -1 : it->second;
    }
    const OrbitEphemeris* ephemeris_of(const std::string& node_id) const {
        return cfg_.find_ephemeris(node_id);
    }
    bool link_effective_up(const LinkState& l) const {
        if (!l.admin_up) return false;
        if (l.cfg.max_range_m) {
            const NodeState& a = nodes_[node_index(l.cfg.a)];
            const NodeState& b = nodes_[node_index(l.cfg.b)];
            if (distance_m(a.pos, b.pos) > *l.cfg.max_range_m) return false;
        }
        return true;
    }

    void emit(json rec) {
        rec["t"] = now_;
        rec["seq"] = rec_seq_++;
        std::string line = rec.dump();
        if (sink_.is_open()) {
            sink_ << line << '\n';
            if (!sink_)
                throw std::runtime_error("event log sink failed (partial log at " + log_path_ +
                                         ")");
        }
        log_.push_back(std::move(line));
    }

    void accrue(NodeState& n, DurationMs tx_ms, DurationMs idle_ms) {
        if (!n.radio || (tx_ms == 0 && idle_ms == 0)) return;
        accrue_energy(m_.node[n.cfg.id].energy, *n.radio, tx_ms, idle_ms);
        emit({{"ev", "energy"}, {"node", n.cfg.id}, {"tx_ms", tx_ms}, {"idle_ms", idle_ms}});
    }
    void accrue_idle_to_now(NodeState& n) {
        if (!n.radio || !n.energy_attached) return;
        if (now_ > n.last_energy_at) {
            accrue(n, 0, now_ - n.last_energy_at);
            n.last_energy_at = now_;
        }
    }

    PassStats& pass_stats(const std::string& sat, std::int64_t idx) {
        return m_.passes[sat][idx];
    }

    std::uint64_t offer_datum(NodeState& n, const std::string& kind,
                              std::vector<std::uint8_t> data, Priority prio,
                              const std::string& label);
    void relay_handle(NodeState& n, const std::shared_ptr<const FrameInFlight>& f,
                      bool from_buffer);
    void try_flush_all();
    void eviction_sweep();
    void drop_copy(const Event& ev, const char* cause);

    bool exec_action(const json& a);
    bool eval_predicate(const json& p);
    bool forward_path_ready(int from, const std::string& dest) const;
    void finalize_step(int idx);
    void classify_datums();
    void vehicle_snapshot(NodeState& n, const char* why);

    // --- state ---------------------------------------------------------------
    ScenarioConfig cfg_;
    std::string log_path_;
    std::vector<NodeState> nodes_;
    std::vector<LinkState> links_;
    std::map<std::string, int> node_index_;
    std::map<std::pair<int, int>, int> link_by_pair_;
    std::priority_queue<Event, std::vector<Event>, EventOrder> pq_;
    std::uint64_t next_seq_ = 0;
    TimeMs now_ = 0;
    std::vector<DatumRec> datums_;
    std::map<std::pair<int, std::uint16_t>, std::uint64_t> active_msg_;
    Metrics m_;
    std::vector<std::string> log_;
    std::ofstream sink_;
    std::uint64_t rec_seq_ = 0;
    struct StepState {
        std::vector<bool> action_results;
        bool finalized = false;
    };
    std::vector<StepState> step_state_;
};

void Engine::build_state() {
    nodes_.clear();
    nodes_.resize(cfg_.nodes.size());
    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) {
        NodeState& n = nodes_[i];
        n.cfg = cfg_.nodes[i];
        n.index = static_cast<int>(i);
        n.powered = n.cfg.powered;
        n.pos = n.cfg.position;
        n.vehicle.position = n.cfg.position;
        n.vehicle.speed_mps = n.cfg.speed_mps;
        n.vehicle.waypoints = n.cfg.waypoints;
        n.vehicle.plan_uploaded = !n.cfg.waypoints.empty();
        n.vehicle.limits = n.cfg.airframe;
        if (n.cfg.radio) n.radio = *cfg_.find_profile(*n.cfg.radio);
        if (n.cfg.satcomms) {
            n.satcomms = *n.cfg.satcomms;
            n.has_satcomms = true;
        }
        n.queue = StoreQueue(n.cfg.queue_capacity_bytes);
        n.routes = n.cfg.routes;
        DurationMs longest_period = 0;
        for (const auto& e : cfg_.ephemerides) longest_period = std::max(longest_period, e.period);
        n.reasm_max_age = n.cfg.reassembly_max_age_ms.value_or(
            longest_period > 0 ? 2 * longest_period : 2 * cfg_.duration_ms);
        if (n.powered && n.radio) {
            n.energy_attached = true;
            n.last_energy_at = 0;
        }
        node_index_[n.cfg.id] = n.index;
    }

    links_.clear();
    links_.resize(cfg_.links.size());
    for (std::size_t i = 0; i < cfg_.links.size(); ++i) {
        LinkState& l = links_[i];
        l.cfg = cfg_.links[i];
        l.admin_up = l.cfg.initially_up;
        l.rng = stream_for(cfg_.seed, "link:" + l.cfg.id);
        const int a = node_index(l.cfg.a), b = node_index(l.cfg.b);
        link_by_pair_.emplace(std::make_pair(std::min(a, b), std::max(a, b)),
                              static_cast<int>(i));
    }
}

void Engine::schedule_initial_events() {
    // Link schedules.
    for (std::size_t i = 0; i < links_.size(); ++i) {
        for (const auto& s : links_[i].cfg.schedule) {
            if (s.t_ms > cfg_.duration_ms) continue;
            Event ev;
            ev.time = s.t_ms;
            ev.kind = EventKind::LinkStateChange;
            ev.link = static_cast<int>(i);
            ev.flag = s.up;
            push(std::move(ev));
        }
    }

    // Pass windows: closes sort before opens at equal times so back-to-back
    // windows hand over cleanly.
    struct WindowEv {
        TimeMs t;
        int open_rank; // 0 = close, 1 = open
        int sat;
        std::int64_t idx;
        TimeMs start, end;
    };
    std::vector<WindowEv> wevs;
    for (const auto& e : cfg_.ephemerides) {
        const int sat = node_index(e.satellite_id);
        for (const auto& w : windows_between(e, 0, cfg_.duration_ms)) {
            const std::int64_t idx = window_index(e, w.start);
            const TimeMs open_t = std::max<TimeMs>(w.start, 0);
            if (open_t <= cfg_.duration_ms)
                wevs.push_back({open_t, 1, sat, idx, w.start, w.end});
            if (w.end <= cfg_.duration_ms)
                wevs.push_back({w.end, 0, sat, idx, w.start, w.end});
        }
    }
    std::stable_sort(wevs.begin(), wevs.end(), [](const WindowEv& a, const WindowEv& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.open_rank < b.open_rank;
    });
    for (const auto& w : wevs) {
        Event ev;
        ev.time = w.t;
        ev.kind = w.open_rank ? EventKind::WindowOpen : EventKind::WindowClose;
        ev.node = w.sat;
        ev.window_idx = w.idx;
        ev.window_start = w.start;
        ev.window_end = w.end;
        push(std::move(ev));
    }

    // Traffic generators.
    for (std::size_t i = 0; i < cfg_.traffic.size(); ++i) {
        const auto& t = cfg_.traffic[i];
        if (t.start_ms > cfg_.duration_ms) continue;
        Event ev;
        ev.time = t.start_ms;
        ev.kind = EventKind::EnqueueDatum;
        ev.traffic = static_cast<int>(i);
        ev.traffic_n = 0;
        push(std::move(ev));
    }

    // Script steps and their deferred checks.
    step_state_.resize(cfg_.script.size());
    for (std::size_t i = 0; i < cfg_.script.size(); ++i) {
        const auto& s = cfg_.script[i];
        Event act;
        act.time = s.t_ms;
        act.kind = EventKind::ScriptStep;
        act.step = static_cast<int>(i);
        act.flag = false;
        push(std::move(act));
        const TimeMs eval_at = std::max(s.eval_at_ms.value_or(s.t_ms), s.t_ms);
        if (eval_at > s.t_ms) {
            Event chk;
            chk.time = eval_at;
            chk.kind = EventKind::ScriptStep;
            chk.step = static_cast<int>(i);
            chk.flag = true;
            push(std::move(chk));
        }
    }

    // Housekeeping ticks for powered vehicles.
    for (auto& n : nodes_)
        if (n.cfg.kind == NodeKind::Vehicle && n.powered) schedule_tick(n.index, 0, false);
}

RunResult Engine::execute() {
    build_state();

    if (!log_path_.empty()) {
        sink_.open(log_path_, std::ios::trunc);
        if (!sink_.is_open())
            throw std::runtime_error("cannot open event log sink '" + log_path_ + "'");
    }

    emit({{"ev", "run_start"},
          {"scenario", cfg_.name},
          {"seed", cfg_.seed},
          {"duration_ms", cfg_.duration_ms},
          {"schema", kLogSchemaVersion}});
    for (const auto& n : nodes_) {
        json rec{{"ev", "node_info"}, {"node", n.cfg.id}, {"kind", node_kind_name(n.cfg.kind)}};
        if (n.radio) {
            rec["radio"] = n.radio->name;
            rec["tx_power_w"] = n.radio->tx_power_w;
            rec["standby_power_w"] = n.radio->standby_power_w;
        }
        emit(std::move(rec));
        m_.node[n.cfg.id]; // materialize the per-node counters
    }
    for (const auto& l : links_)
        emit({{"ev", "link_info"},
              {"link", l.cfg.id},
              {"a", l.cfg.a},
              {"b", l.cfg.b},
              {"loss", l.cfg.per_copy_loss}});

    schedule_initial_events();

    while (!pq_.empty()) {
        Event ev = pq_.top();
        pq_.pop();
        if (ev.time > cfg_.duration_ms) break;
        now_ = ev.time;
        ++m_.events_executed;
        switch (ev.kind) {
        case EventKind::TickSatComms: on_tick(ev); break;
        case EventKind::FrameArrival: on_frame_arrival(ev); break;
        case EventKind::WindowOpen:
        case EventKind::WindowClose: on_window(ev); break;
        case EventKind::EnqueueDatum: on_enqueue(ev); break;
        case EventKind::LinkStateChange: on_link_change(ev); break;
        case EventKind::ScriptStep: on_script(ev); break;
        }
    }

    now_ = cfg_.duration_ms;
    for (auto& n : nodes_) accrue_idle_to_now(n);

    // Any step the script never evaluated counts as failed.
    for (std::size_t i = 0; i < cfg_.script.size(); ++i)
        if (!step_state_[i].finalized) finalize_step(static_cast<int>(i));

    classify_datums();

    emit({{"ev", "run_end"}, {"events", m_.events_executed}});
    if (sink_.is_open()) sink_.flush();

    RunResult res;
    res.assertions_passed = true;
    for (const auto& s : m_.steps)
        if (!s.passed) res.assertions_passed = false;
    res.metrics = std::move(m_);
    res.log_lines = std::move(log_);
    return res;
}

// ---------------------------------------------------------------------------
// Datum intake

std::uint64_t Engine::offer_datum(NodeState& n, const std::string& kind,
                                  std::vector<std::uint8_t> data, Priority prio,
                                  const std::string& label) {
    ++m_.datums_offered;
    DatumRec rec;
    rec.id = datums_.size() + 1;
    rec.src = n.index;
    rec.label = label;
    rec.kind = kind;
    rec.dest = n.has_satcomms ? n.satcomms.dest : "";
    rec.data = data;

    auto reject = [&](const char* reason) {
        rec.reject_reason = reason;
        ++m_.node[n.cfg.id].drops[reason];
        emit({{"ev", "datum_rej"},
              {"node", n.cfg.id},
              {"datum", rec.id},
              {"kind", kind},
              {"reason", reason}});
        datums_.push_back(std::move(rec));
        return datums_.back().id;
    };

    if (!n.powered) return reject("node_off");
    if (n.has_satcomms && !n.satcomms.accepts(kind)) return reject("kind_filtered");
    if (!n.queue.can_accept(data.size())) return reject("queue_full");

    rec.accepted = true;
    rec.msg_id = n.next_msg_id++;
    const std::uint8_t src8 = static_cast<std::uint8_t>(n.index);
    auto frags = fragment_datum(src8, rec.msg_id, data);
    rec.frags = frags.size();

    QueuedDatum qd;
    qd.datum_id = rec.id;
    qd.priority = prio;
    qd.enqueued_at = now_;
    qd.kind = kind;
    qd.remaining_bytes = data.size();
    qd.fragments = std::move(frags);
    n.queue.push(std::move(qd));

    active_msg_[{n.index, rec.msg_id}] = rec.id;
    ++m_.node[n.cfg.id].datums_enqueued;
    emit({{"ev", "datum_enq"},
          {"node", n.cfg.id},
          {"datum", rec.id},
          {"label", label},
          {"kind", kind},
          {"bytes", data.size()},
          {"frags", rec.frags},
          {"prio", prio == Priority::High ? "high" : "normal"},
          {"msg", rec.msg_id}});
    datums_.push_back(std::move(rec));
    return datums_.back().id;
}

// ---------------------------------------------------------------------------
// Handlers

void Engine::on_tick(Event& ev) {
    NodeState& n = nodes_[ev.node];
    if (!ev.flag) n.regular_tick_pending = false;
    if (!n.powered) return; // chain resumes at power-on
    if (!ev.flag) schedule_tick(n.index, now_ + cfg_.satcomms_tick_ms, false);

    // Motion.
    if (n.cfg.kind == NodeKind::Vehicle && n.vehicle.airborne) {
        const DurationMs dt = now_ - n.last_motion_at;
        if (dt > 0) {
            n.vehicle = step_vehicle(n.vehicle, dt);
            n.pos = n.vehicle.position;
            n.last_motion_at = now_;
            if (now_ - n.last_snapshot_at >= 10'000) vehicle_snapshot(n, "cruise");
        }
        if (!n.endurance_flagged &&
            now_ - n.vehicle.airborne_since > n.vehicle.limits.endurance_ms) {
            n.endurance_flagged = true;
            m_.endurance_violation = true;
            emit({{"ev", "endurance"}, {"node", n.cfg.id}});
        }
    }

    accrue_idle_to_now(n);

    if (!n.has_satcomms || !n.radio) return;
    const OrbitEphemeris* eph =
        n.satcomms.target_configured ? ephemeris_of(n.satcomms.target) : nullptr;
    if (!eph) return;

    SatCommsTickContext ctx;
    ctx.now = now_;
    ctx.visible = is_visible(*eph, now_);
    std::int64_t widx = 0;
    if (ctx.visible) {
        const PassWindow w = next_window(*eph, now_);
        ctx.window_end = w.end;
        widx = window_index(*eph, w.start);
    }
    if (n.slot_restricted) {
        ctx.slot_start = n.slot_start;
        ctx.slot_end = n.slot_end;
    }
    const int target_idx = node_index(n.satcomms.target);
    const int uplink = link_between(n.index, target_idx);
    ctx.uplink_up = uplink < 0 || link_effective_up(links_[uplink]);
    ctx.copy_airtime = effective_frame_airtime(*n.radio);
    ctx.redundancy = n.radio->redundancy;

    auto copies = satcomms_tick(n.satcomms, n.queue, n.radio_busy_until, ctx);
    if (copies.empty()) return;

    const DurationMs quantum = ctx.copy_airtime * static_cast<DurationMs>(ctx.redundancy);
    n.radio_busy_until = now_ + quantum;
    accrue(n, quantum, 0);
    n.last_energy_at = now_ + quantum;

    const std::uint64_t datum_id =
        active_msg_.count({n.index, copies[0].fragment.header.msg_id})
            ? active_msg_[{n.index, copies[0].fragment.header.msg_id}]
            : 0;
    const DurationMs latency = uplink >= 0 ? links_[uplink].cfg.latency_ms : 0;
    const std::string link_id = uplink >= 0 ? links_[uplink].cfg.id : "(direct)";

    NodeMetrics& nm = m_.node[n.cfg.id];
    PassStats& ps = pass_stats(n.satcomms.target, widx);
    for (const auto& c : copies) {
        if (c.copy_index == 0) {
            ++nm.frames_sent;
            ++ps.frames;
        }
        ++nm.copies_sent;
        ++ps.copies;
        ps.bytes_raw += n.radio->frame_bytes;
        ps.tx_ms += c.airtime;
        ps.energy_j += n.radio->tx_power_w * (static_cast<double>(c.airtime) / 1000.0);

        auto f = std::make_shared<FrameInFlight>();
        f->wire = encode_frame(c.fragment, n.radio->frame_bytes);
        f->datum_id = datum_id;
        f->dest = n.satcomms.dest;
        f->src_node = n.index;
        f->sent_at = c.start;
        f->sat = n.satcomms.target;
        f->window_idx = widx;
        f->copy_index = c.copy_index;
        f->hops = 0;

        emit({{"ev", "copy_tx"},
              {"node", n.cfg.id},
              {"sat", n.satcomms.target},
              {"window", widx},
              {"link", link_id},
              {"datum", datum_id},
              {"msg", c.fragment.header.msg_id},
              {"frag", c.fragment.header.frag_index},
              {"copy", c.copy_index},
              {"airtime", c.airtime},
              {"frame_bytes", n.radio->frame_bytes},
              {"tx_power_w", n.radio->tx_power_w}});

        if (datum_id) ++datums_[datum_id - 1].in_flight;
        Event arr;
        arr.time = c.start + c.airtime + latency;
        arr.kind = EventKind::FrameArrival;
        arr.node = target_idx;
        arr.link = uplink;
        arr.frame = std::move(f);
        push(std::move(arr));
    }
    schedule_tick(n.index, n.radio_busy_until, true);
}

void Engine::drop_copy(const Event& ev, const char* cause) {
    const auto& f = *ev.frame;
    if (f.datum_id) {
        DatumRec& d = datums_[f.datum_id - 1];
        d.drop_cause = cause;
    }
    ++m_.node[nodes_[ev.node].cfg.id].drops[cause];
    emit({{"ev", "copy_drop"},
          {"node", nodes_[ev.node].cfg.id},
          {"link", ev.link >= 0 ? links_[ev.link].cfg.id : "(direct)"},
          {"cause", cause},
          {"datum", f.datum_id},
          {"sat", f.sat},
          {"window", f.window_idx}});
}

void Engine::on_frame_arrival(Event& ev) {
    const auto f = ev.frame;
    if (f->datum_id) --datums_[f->datum_id - 1].in_flight;

    if (ev.link >= 0) {
        LinkState& l = links_[ev.link];
        if (!l.admin_up) return drop_copy(ev, "link_down");
        if (l.cfg.max_range_m) {
            const NodeState& a = nodes_[node_index(l.cfg.a)];
            const NodeState& b = nodes_[node_index(l.cfg.b)];
            if (distance_m(a.pos, b.pos) > *l.cfg.max_range_m)
                return drop_copy(ev, "out_of_range");
        }
        if (l.cfg.per_copy_loss > 0.0 && sample_loss(l.rng, l.cfg.per_copy_loss))
            return drop_copy(ev, "channel_loss");
    }

    NodeState& n = nodes_[ev.node];
    if (!n.powered) return drop_copy(ev, "node_off");

    NodeMetrics& nm = m_.node[n.cfg.id];
    ++nm.frames_received;

    json rec{{"ev", "frame_rx"},
             {"node", n.cfg.id},
             {"link", ev.link >= 0 ? links_[ev.link].cfg.id : "(direct)"},
             {"frame", to_hex(f->wire)},
             {"sat", f->sat},
             {"window", f->window_idx},
             {"datum", f->datum_id}};

    auto decoded = decode_frame(f->wire, f->wire.size());
    if (std::holds_alternative<DecodeError>(decoded)) {
        ++nm.decode_errors;
        ++nm.drops["decode_error"];
        rec["outcome"] = "decode_error";
        rec["detail"] = decode_error_name(std::get<DecodeError>(decoded));
        emit(std::move(rec));
        return;
    }
    const Fragment& frag = std::get<Fragment>(decoded);
    rec["src"] = frag.header.src_node;
    rec["plen"] = frag.header.payload_len;

    if (n.cfg.kind == NodeKind::Workstation) {
        auto r = n.reasm.ingest(frag, now_);
        PassStats& ps = pass_stats(f->sat, f->window_idx);
        const std::string src_id = frag.header.src_node < nodes_.size()
                                       ? nodes_[frag.header.src_node].cfg.id
                                       : std::to_string(frag.header.src_node);
        rec["src_id"] = src_id;
        switch (r.kind) {
        case IngestKind::Duplicate:
            ++nm.duplicates;
            ++ps.duplicates;
            rec["outcome"] = "duplicate";
            break;
        case IngestKind::Conflict:
            ++nm.conflicts;
            rec["outcome"] = "conflict";
            break;
        case IngestKind::Stored:
            ps.bytes_goodput += frag.header.payload_len;
            ps.goodput_by_source[src_id] += frag.header.payload_len;
            rec["outcome"] = "stored";
            break;
        case IngestKind::Completed: {
            ps.bytes_goodput += frag.header.payload_len;
            ps.goodput_by_source[src_id] += frag.header.payload_len;
            ++nm.datums_delivered;
            rec["outcome"] = "completed";
            if (f->datum_id) {
                DatumRec& d = datums_[f->datum_id - 1];
                d.delivered = true;
                d.delivered_ok = (r.data == d.data);
                nm.bytes_goodput += d.data.size();
                rec["delivered_bytes"] = d.data.size();
                rec["ok"] = d.delivered_ok;
            }
            break;
        }
        }
        emit(std::move(rec));
        return;
    }

    // Relay behavior: satellites, gateways, servers and vehicles decode to
    // validate, then forward each copy toward the route's next hop.
    emit(std::move(rec));
    relay_handle(n, f, false);
}

void Engine::relay_handle(NodeState& n, const std::shared_ptr<const FrameInFlight>& f,
                          bool from_buffer) {
    NodeMetrics& nm = m_.node[n.cfg.id];
    if (f->hops + 1 >= cfg_.hop_ttl) {
        if (f->datum_id) datums_[f->datum_id - 1].drop_cause = "ttl_exceeded";
        ++nm.drops["ttl_exceeded"];
        emit({{"ev", "copy_drop"},
              {"node", n.cfg.id},
              {"link", "(relay)"},
              {"cause", "ttl_exceeded"},
              {"datum", f->datum_id},
              {"sat", f->sat},
              {"window", f->window_idx}});
        return;
    }

    auto store_here = [&] {
        n.relay_buf.push_back({f, now_});
        if (!from_buffer)
            emit({{"ev", "relay_store"}, {"node", n.cfg.id}, {"datum", f->datum_id}});
    };

    auto hop = route_next_hop(n.routes, f->dest);
    if (!hop) return store_here();
    const int hop_idx = node_index(*hop);
    const int li = hop_idx == n.index ? -1 : link_between(n.index, hop_idx);
    if (hop_idx != n.index) {
        if (li < 0) return store_here();
        if (!link_effective_up(links_[li])) return store_here();
    }

    auto fwd = std::make_shared<FrameInFlight>(*f);
    fwd->hops = f->hops + 1;
    ++nm.frames_forwarded;
    if (f->datum_id) ++datums_[f->datum_id - 1].in_flight;
    emit({{"ev", "forward"},
          {"node", n.cfg.id},
          {"to", *hop},
          {"link", li >= 0 ? links_[li].cfg.id : "(local)"},
          {"datum", f->datum_id}});

    Event arr;
    arr.time = now_ + (li >= 0 ? links_[li].cfg.latency_ms : 0);
    arr.kind = EventKind::FrameArrival;
    arr.node = hop_idx;
    arr.link = li;
    arr.frame = std::move(fwd);
    push(std::move(arr));
}

void Engine::try_flush_all() {
    for (auto& n : nodes_) {
        if (n.relay_buf.empty() || !n.powered) continue;
        std::deque<NodeState::StoredFrame> keep;
        std::size_t flushed = 0;
        while (!n.relay_buf.empty()) {
            auto entry = n.relay_buf.front();
            n.relay_buf.pop_front();
            auto hop = route_next_hop(n.routes, entry.frame->dest);
            bool can = false;
            if (hop) {
                const int hop_idx = node_index(*hop);
                const int li = hop_idx == n.index ? -1 : link_between(n.index, hop_idx);
                can = hop_idx == n.index || (li >= 0 && link_effective_up(links_[li]));
            }
            if (can) {
                relay_handle(n, entry.frame, true);
                ++flushed;
            } else {
                keep.push_back(std::move(entry));
            }
        }
        n.relay_buf = std::move(keep);
        if (flushed)
            emit({{"ev", "relay_flush"}, {"node", n.cfg.id}, {"n", flushed}});
    }
}

void Engine::eviction_sweep() {
    for (auto& n : nodes_) {
        // Reassembly buffers age out after the configured idle time.
        for (const auto& key : n.reasm.evict_stale(now_, n.reasm_max_age)) {
            std::uint64_t datum_id = 0;
            if (auto it = active_msg_.find({key.first, key.second}); it != active_msg_.end())
                datum_id = it->second;
            if (datum_id) datums_[datum_id - 1].drop_cause = "reassembly_evicted";
            emit({{"ev", "reasm_evict"},
                  {"node", n.cfg.id},
                  {"src", key.first},
                  {"msg", key.second},
                  {"datum", datum_id}});
        }
        // Stored relay frames age out only when the node opts in.
        if (n.cfg.relay_max_age_ms) {
            std::deque<NodeState::StoredFrame> keep;
            while (!n.relay_buf.empty()) {
                auto entry = n.relay_buf.front();
                n.relay_buf.pop_front();
                if (now_ - entry.stored_at > *n.cfg.relay_max_age_ms) {
                    if (entry.frame->datum_id)
                        datums_[entry.frame->datum_id - 1].drop_cause = "relay_evicted";
                    ++m_.node[n.cfg.id].drops["relay_evicted"];
                    emit({{"ev", "relay_evict"},
                          {"node", n.cfg.id},
                          {"datum", entry.frame->datum_id}});
                } else {
                    keep.push_back(std::move(entry));
                }
            }
            n.relay_buf = std::move(keep);
        }
    }
}

void Engine::on_window(Event& ev) {
    const bool open = ev.kind == EventKind::WindowOpen;
    const std::string& sat_id = nodes_[ev.node].cfg.id;
    emit({{"ev", "window"},
          {"sat", sat_id},
          {"idx", ev.window_idx},
          {"open", open},
          {"start", ev.window_start},
          {"end", ev.window_end}});

    std::vector<int> targeting;
    for (const auto& n : nodes_)
        if (n.has_satcomms && n.satcomms.target == sat_id) targeting.push_back(n.index);

    if (open) {
        PassStats& ps = pass_stats(sat_id, ev.window_idx);
        ps.start = ev.window_start;
        ps.end = ev.window_end;

        if (targeting.size() >= 2) {
            // Shared uplink: carve the pass into per-vehicle slots.
            std::vector<SlotDemand> demands;
            for (int idx : targeting) {
                const NodeState& v = nodes_[idx];
                demands.push_back({v.cfg.id, v.queue.stored_bytes(),
                                   v.radio ? fragment_quantum(*v.radio) : 1});
            }
            PassWindow w{ev.window_start, ev.window_end, sat_id};
            auto slots = schedule_multi_vehicle(demands, w);
            for (int idx : targeting) {
                NodeState& v = nodes_[idx];
                v.slot_restricted = true;
                v.slot_start = 0;
                v.slot_end = 0; // no slot unless assigned below
            }
            for (const auto& s : slots) {
                NodeState& v = nodes_[node_index(s.node)];
                v.slot_start = s.start;
                v.slot_end = s.end;
                ps.slots.push_back({s.node, s.start, s.end});
                emit({{"ev", "slot"},
                      {"sat", sat_id},
                      {"window", ev.window_idx},
                      {"node", s.node},
                      {"start", s.start},
                      {"end", s.end}});
                schedule_tick(v.index, std::max(now_, s.start), true);
            }
        } else {
            for (int idx : targeting) schedule_tick(idx, now_, true);
        }
    } else {
        for (int idx : targeting) {
            NodeState& v = nodes_[idx];
            v.slot_restricted = false;
            v.slot_start = 0;
            v.slot_end = std::numeric_limits<TimeMs>::max();
        }
        eviction_sweep();
    }
}

void Engine::on_enqueue(Event& ev) {
    const TrafficConfig& t = cfg_.traffic[ev.traffic];
    NodeState& n = nodes_[node_index(t.node)];

    auto stream = stream_for(cfg_.seed, "traffic:" + t.node + ":" + t.label + ":" +
                                            std::to_string(ev.traffic_n));
    std::vector<std::uint8_t> data(t.size_bytes);
    for (auto& b : data) b = static_cast<std::uint8_t>(stream.next_below(256));
    const std::string label =
        t.label.empty() ? "" : t.label + "#" + std::to_string(ev.traffic_n);
    offer_datum(n, t.kind, std::move(data), t.priority, label);

    const std::uint64_t next = ev.traffic_n + 1;
    if (t.count && next >= *t.count) return;
    Event nxt;
    nxt.time = now_ + t.period_ms;
    nxt.kind = EventKind::EnqueueDatum;
    nxt.traffic = ev.traffic;
    nxt.traffic_n = next;
    if (nxt.time <= cfg_.duration_ms) push(std::move(nxt));
}

void Engine::on_link_change(Event& ev) {
    LinkState& l = links_[ev.link];
    l.admin_up = ev.flag;
    emit({{"ev", "link_state"}, {"link", l.cfg.id}, {"up", l.admin_up}, {"cause", "scheduled"}});
    if (l.admin_up) try_flush_all();
}

void Engine::vehicle_snapshot(NodeState& n, const char* why) {
    n.last_snapshot_at = now_;
    emit({{"ev", "vehicle"},
          {"node", n.cfg.id},
          {"x", n.pos.x},
          {"y", n.pos.y},
          {"alt", n.pos.z},
          {"speed", n.vehicle.speed_mps},
          {"airborne", n.vehicle.airborne},
          {"wp", n.vehicle.current_wp},
          {"why", why}});
}

// ---------------------------------------------------------------------------
// Script actions and predicates

bool Engine::forward_path_ready(int from, const std::string& dest) const {
    std::set<int> seen{from};
    int cur = from;
    while (true) {
        if (nodes_[cur].cfg.id == dest) return true;
        auto hop = route_next_hop(nodes_[cur].routes, dest);
        if (!hop) return false;
        const int hop_idx = node_index(*hop);
        if (hop_idx < 0) return false;
        if (hop_idx != cur) {
            const int li = link_between(cur, hop_idx);
            if (li < 0 || !links_[li].admin_up) return false;
        }
        if (!nodes_[hop_idx].powered) return false;
        if (!seen.insert(hop_idx).second) return false; // loop
        cur = hop_idx;
    }
}

bool Engine::exec_action(const json& a) {
    const std::string type = a.value("type", "");
    auto node_of = [&](const char* key) -> NodeState* {
        const int idx = node_index(a.value(key, ""));
        return idx < 0 ? nullptr : &nodes_[idx];
    };
    auto link_of = [&]() -> LinkState* {
        const std::string id = a.value("link", "");
        for (auto& l : links_)
            if (l.cfg.id == id) return &l;
        return nullptr;
    };

    if (type == "noop") return true;
    if (type == "link_up" || type == "link_down") {
        LinkState* l = link_of();
        if (!l) return false;
        l->admin_up = (type == "link_up");
        emit({{"ev", "link_state"}, {"link", l->cfg.id}, {"up", l->admin_up}, {"cause", "script"}});
        if (l->admin_up) try_flush_all();
        return true;
    }
    if (type == "power_on" || type == "power_off") {
        NodeState* n = node_of("node");
        if (!n) return false;
        if (type == "power_on") {
            if (!n->powered) {
                n->powered = true;
                if (n->radio) {
                    n->energy_attached = true;
                    n->last_energy_at = now_;
                }
                if (n->cfg.kind == NodeKind::Vehicle) schedule_tick(n->index, now_, false);
            }
        } else {
            accrue_idle_to_now(*n);
            n->powered = false;
            n->energy_attached = false;
        }
        return true;
    }
    if (type == "start_node") {
        // Power-on that first checks the forward path, the way the bench
        // simulator refused to start against a dead route.
        NodeState* n = node_of("node");
        if (!n) return false;
        const std::string dest = a.value("dest", "");
        if (!forward_path_ready(n->index, dest)) return false;
        if (!n->powered) {
            n->powered = true;
            if (n->radio) {
                n->energy_attached = true;
                n->last_energy_at = now_;
            }
            if (n->cfg.kind == NodeKind::Vehicle) schedule_tick(n->index, now_, false);
        }
        return true;
    }
    if (type == "set_route") {
        NodeState* n = node_of("node");
        if (!n || !a.contains("dest") || !a.contains("next_hop")) return false;
        n->routes[a.at("dest").get<std::string>()] = a.at("next_hop").get<std::string>();
        try_flush_all();
        return true;
    }
    if (type == "remove_route") {
        NodeState* n = node_of("node");
        if (!n) return false;
        n->routes.erase(a.value("dest", ""));
        return true;
    }
    if (type == "configure_satellite") {
        NodeState* n = node_of("node");
        if (!n || !n->has_satcomms) return false;
        const std::string target = a.value("target", "");
        if (!ephemeris_of(target)) return false;
        n->satcomms.target = target;
        n->satcomms.target_configured = true;
        return true;
    }
    if (type == "set_transmit") {
        NodeState* n = node_of("node");
        if (!n || !n->has_satcomms) return false;
        n->satcomms.transmit_when_possible = a.value("enabled", true);
        schedule_tick(n->index, now_, true);
        return true;
    }
    if (type == "takeoff") {
        NodeState* n = node_of("node");
        if (!n || !n->powered) return false;
        n->vehicle.airborne = true;
        n->vehicle.airborne_since = now_;
        n->last_motion_at = now_;
        vehicle_snapshot(*n, "takeoff");
        return true;
    }
    if (type == "land") {
        NodeState* n = node_of("node");
        if (!n) return false;
        n->vehicle.airborne = false;
        n->vehicle.plan_active = false;
        vehicle_snapshot(*n, "land");
        return true;
    }
    if (type == "set_position") {
        NodeState* n = node_of("node");
        if (!n || !a.contains("position")) return false;
        const auto& p = a.at("position");
        n->pos = Vec3{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
        n->vehicle.position = n->pos;
        return true;
    }
    if (type == "upload_plan") {
        NodeState* n = node_of("node");
        if (!n || !a.contains("waypoints") || a.at("waypoints").empty()) return false;
        std::vector<Vec3> wps;
        for (const auto& w : a.at("waypoints"))
            wps.push_back(Vec3{w[0].get<double>(), w[1].get<double>(), w[2].get<double>()});
        for (const auto& w : wps)
            if (w.z > n->vehicle.limits.max_altitude_m) return false;
        n->vehicle.waypoints = std::move(wps);
        n->vehicle.current_wp = 0;
        n->vehicle.plan_uploaded = true;
        if (a.contains("speed_mps")) n->vehicle.speed_mps = a.at("speed_mps").get<double>();
        return true;
    }
    if (type == "start_plan") {
        NodeState* n = node_of("node");
        if (!n || !n->vehicle.plan_uploaded || !n->vehicle.airborne) return false;
        n->vehicle.plan_active = true;
        n->vehicle.current_wp = 0;
        n->last_motion_at = now_;
        vehicle_snapshot(*n, "plan_start");
        return true;
    }
    if (type == "enqueue") {
        NodeState* n = node_of("node");
        if (!n) return false;
        const std::size_t size = a.value("size_bytes", std::size_t{0});
        const std::string label = a.value("label", "");
        auto stream = stream_for(cfg_.seed, "script:" + n->cfg.id + ":" + label);
        std::vector<std::uint8_t> data(size);
        for (auto& b : data) b = static_cast<std::uint8_t>(stream.next_below(256));
        const Priority prio = a.value("priority", "normal") == std::string("high")
                                  ? Priority::High
                                  : Priority::Normal;
        const std::uint64_t id =
            offer_datum(*n, a.value("kind", "EstimatedState"), std::move(data), prio, label);
        return datums_[id - 1].accepted;
    }
    return false; // unknown action type
}

bool Engine::eval_predicate(const json& p) {
    const std::string type = p.value("type", "");
    auto node_of = [&](const char* key) -> NodeState* {
        const int idx = node_index(p.value(key, ""));
        return idx < 0 ? nullptr : &nodes_[idx];
    };
    auto metrics_of = [&](const char* key) -> NodeMetrics* {
        NodeState* n = node_of(key);
        return n ? &m_.node[n->cfg.id] : nullptr;
    };
    auto datum_by_label = [&](const std::string& label) -> const DatumRec* {
        for (const auto& d : datums_)
            if (d.label == label) return &d;
        return nullptr;
    };

    if (type == "link_up") {
        for (auto& l : links_)
            if (l.cfg.id == p.value("link", "")) return link_effective_up(l);
        return false;
    }
    if (type == "node_powered") {
        NodeState* n = node_of("node");
        return n && n->powered;
    }
    if (type == "node_ready") {
        NodeState* n = node_of("node");
        return n && n->powered && forward_path_ready(n->index, p.value("dest", ""));
    }
    if (type == "satcomms_active") {
        NodeState* n = node_of("node");
        return n && n->powered && n->has_satcomms;
    }
    if (type == "satcomms_configured_send_off") {
        NodeState* n = node_of("node");
        return n && n->has_satcomms && n->satcomms.target_configured &&
               !n->satcomms.transmit_when_possible;
    }
    if (type == "route_exists") {
        NodeState* n = node_of("node");
        return n && route_next_hop(n->routes, p.value("dest", "")).has_value();
    }
    if (type == "route_next_hop_is") {
        NodeState* n = node_of("node");
        if (!n) return false;
        auto hop = route_next_hop(n->routes, p.value("dest", ""));
        return hop && *hop == p.value("next_hop", "");
    }
    if (type == "reaches_via") {
        // Walk from -> dest over admin-up links; true once `via` is reached.
        NodeState* from = node_of("from");
        if (!from) return false;
        const std::string dest = p.value("dest", "");
        const std::string via = p.value("via", dest);
        std::set<int> seen{from->index};
        int cur = from->index;
        while (true) {
            if (nodes_[cur].cfg.id == via) return true;
            if (nodes_[cur].cfg.id == dest) return false;
            auto hop = route_next_hop(nodes_[cur].routes, dest);
            if (!hop) return false;
            const int hop_idx = node_index(*hop);
            if (hop_idx < 0) return false;
            if (hop_idx != cur) {
                const int li = link_between(cur, hop_idx);
                if (li < 0 || !links_[li].admin_up) return false;
            }
            if (!seen.insert(hop_idx).second) return false;
            cur = hop_idx;
        }
    }
    if (type == "copies_sent_at_least") {
        NodeMetrics* nm = metrics_of("node");
        return nm && nm->copies_sent >= p.value("n", std::uint64_t{1});
    }
    if (type == "frames_received_at_least") {
        NodeMetrics* nm = metrics_of("node");
        return nm && nm->frames_received >= p.value("n", std::uint64_t{1});
    }
    if (type == "datums_delivered_at_least") {
        NodeMetrics* nm = metrics_of("node");
        return nm && nm->datums_delivered >= p.value("n", std::uint64_t{1});
    }
    if (type == "datums_delivered_equals") {
        NodeMetrics* nm = metrics_of("node");
        return nm && nm->datums_delivered == p.value("n", std::uint64_t{0});
    }
    if (type == "datum_delivered") {
        const DatumRec* d = datum_by_label(p.value("label", ""));
        return d && d->delivered && d->delivered_ok;
    }
    if (type == "delivered_bytes_match") {
        NodeMetrics* nm = metrics_of("node");
        if (!nm || nm->datums_delivered == 0) return false;
        for (const auto& d : datums_)
            if (d.delivered && !d.delivered_ok) return false;
        return true;
    }
    if (type == "fragment_count") {
        const DatumRec* d = datum_by_label(p.value("label", ""));
        return d && d->frags == p.value("n", std::uint64_t{0});
    }
    if (type == "copies_match_redundancy") {
        NodeState* n = node_of("node");
        NodeMetrics* nm = metrics_of("node");
        if (!n || !n->radio || !nm) return false;
        return nm->frames_sent > 0 &&
               nm->copies_sent == nm->frames_sent * n->radio->redundancy;
    }
    if (type == "duplicates_match_redundancy") {
        // Receiver-side mirror of the redundancy factor: every distinct frame
        // of `source` showed up exactly once plus (redundancy - 1) duplicates.
        NodeMetrics* nm = metrics_of("node");
        NodeState* src = node_of("source");
        NodeMetrics* sm = metrics_of("source");
        if (!nm || !src || !src->radio || !sm) return false;
        return sm->frames_sent > 0 &&
               nm->duplicates == sm->frames_sent * (src->radio->redundancy - 1);
    }
    if (type == "airborne") {
        NodeState* n = node_of("node");
        return n && n->vehicle.airborne == p.value("value", true);
    }
    if (type == "plan_uploaded") {
        NodeState* n = node_of("node");
        return n && n->vehicle.plan_uploaded;
    }
    if (type == "plan_active") {
        NodeState* n = node_of("node");
        return n && n->vehicle.plan_active;
    }
    if (type == "loiter_in_window") {
        NodeState* n = node_of("node");
        if (!n || !n->vehicle.airborne || !n->vehicle.plan_complete()) return false;
        const OrbitEphemeris* eph = ephemeris_of(p.value("sat", ""));
        return eph && is_visible(*eph, now_);
    }
    if (type == "landed_safely") {
        NodeState* n = node_of("node");
        return n && !n->vehicle.airborne && !m_.endurance_violation;
    }
    if (type == "distance_within") {
        NodeState* a = node_of("a");
        NodeState* b = node_of("b");
        return a && b && distance_m(a->pos, b->pos) <= p.value("max_m", 0.0);
    }
    if (type == "queue_empty") {
        NodeState* n = node_of("node");
        return n && n->queue.empty();
    }
    if (type == "pass_raw_bytes_between") {
        const auto& windows = m_.passes[p.value("sat", "")];
        auto it = windows.find(p.value("window", std::int64_t{0}));
        if (it == windows.end()) return false;
        return it->second.bytes_raw >= p.value("min", std::uint64_t{0}) &&
               it->second.bytes_raw <= p.value("max", std::numeric_limits<std::uint64_t>::max());
    }
    if (type == "pass_goodput_spread_max") {
        const auto& windows = m_.passes[p.value("sat", "")];
        auto it = windows.find(p.value("window", std::int64_t{0}));
        if (it == windows.end() || it->second.goodput_by_source.empty()) return false;
        std::uint64_t lo = std::numeric_limits<std::uint64_t>::max(), hi = 0;
        for (const auto& [src, bytes] : it->second.goodput_by_source) {
            lo = std::min(lo, bytes);
            hi = std::max(hi, bytes);
        }
        return hi - lo <= p.value("max_bytes", std::uint64_t{0});
    }
    if (type == "slots_disjoint_contained") {
        const auto& windows = m_.passes[p.value("sat", "")];
        auto it = windows.find(p.value("window", std::int64_t{0}));
        if (it == windows.end()) return false;
        const PassStats& ps = it->second;
        TimeMs cursor = ps.start;
        for (const auto& s : ps.slots) {
            if (s.start < cursor || s.end <= s.start || s.end > ps.end) return false;
            cursor = s.end;
        }
        return !ps.slots.empty();
    }
    if (type == "all_of") {
        for (const auto& sub : p.at("preds"))
            if (!eval_predicate(sub)) return false;
        return true;
    }
    return false; // unknown predicate type
}

void Engine::finalize_step(int idx) {
    const ScriptStep& s = cfg_.script[idx];
    StepState& st = step_state_[idx];
    st.finalized = true;

    StepResult r;
    r.name = s.name;
    r.row = s.row;
    r.extension = s.extension;
    r.expected_pass = s.expect_pass;

    bool actions_ok = true;
    const std::size_t n_actions = s.actions.size();
    if (st.action_results.size() != n_actions) {
        actions_ok = n_actions == 0;
        if (!actions_ok) r.note = "step never executed";
    } else {
        for (std::size_t i = 0; i < n_actions; ++i) {
            const bool want = s.expect_action_ok ? (*s.expect_action_ok)[i] : true;
            if (st.action_results[i] != want) {
                actions_ok = false;
                r.note = "action " + std::to_string(i) + (want ? " failed" : " unexpectedly ok");
                break;
            }
        }
    }
    bool pred_ok = true;
    if (s.expect) {
        pred_ok = eval_predicate(*s.expect);
        if (!pred_ok && r.note.empty()) r.note = "predicate false";
    }
    r.outcome = actions_ok && pred_ok;
    r.passed = (r.outcome == s.expect_pass);

    emit({{"ev", "script"},
          {"step", idx},
          {"name", r.name},
          {"row", r.row},
          {"extension", r.extension},
          {"outcome", r.outcome},
          {"expected", r.expected_pass},
          {"passed", r.passed},
          {"note", r.note}});
    m_.steps.push_back(std::move(r));
}

void Engine::on_script(Event& ev) {
    const ScriptStep& s = cfg_.script[ev.step];
    StepState& st = step_state_[ev.step];
    if (!ev.flag) {
        st.action_results.clear();
        for (const auto& a : s.actions) st.action_results.push_back(exec_action(a));
        const TimeMs eval_at = std::max(s.eval_at_ms.value_or(s.t_ms), s.t_ms);
        if (eval_at == s.t_ms) finalize_step(ev.step);
    } else if (!st.finalized) {
        finalize_step(ev.step);
    }
}

// ---------------------------------------------------------------------------
// End-of-run ledger

void Engine::classify_datums() {
    // Which datums still have a presence somewhere in the network?
    std::map<std::uint64_t, bool> queued;
    for (const auto& n : nodes_) {
        // remnants in the sender queue are found via remaining fragments
        // (queue entries keep their datum id)
        // relay buffers:
        for (const auto& e : n.relay_buf)
            if (e.frame->datum_id) queued[e.frame->datum_id] = true;
    }
    // Sender queues: walk every queue by draining a copy (cheap scan).
    for (auto& n : nodes_) {
        StoreQueue scan = n.queue; // copy; run is over
        while (const QueuedDatum* d = scan.front()) {
            queued[d->datum_id] = true;
            scan.consume_front_fragment();
        }
    }

    for (auto& d : datums_) {
        std::string status, reason;
        if (!d.accepted) {
            status = "dropped";
            reason = d.reject_reason;
        } else if (d.delivered) {
            status = "delivered";
        } else {
            bool present = queued.count(d.id) || d.in_flight > 0;
            if (!present && d.src >= 0) {
                // partial reassembly buffer still holding fragments?
                auto it = active_msg_.find({d.src, d.msg_id});
                if (it != active_msg_.end() && it->second == d.id) {
                    const std::uint8_t src8 = static_cast<std::uint8_t>(d.src);
                    for (const auto& n : nodes_)
                        if (n.reasm.has(src8, d.msg_id)) present = true;
                }
            }
            if (present) {
                status = "stored";
            } else {
                status = "dropped";
                reason = d.drop_cause.empty() ? "lost" : d.drop_cause;
            }
        }
        if (status == "delivered")
            ++m_.datums_delivered;
        else if (status == "stored")
            ++m_.datums_stored_end;
        else
            ++m_.datums_dropped[reason];
        json rec{{"ev", "datum_final"},
                 {"datum", d.id},
                 {"node", d.src >= 0 ? nodes_[d.src].cfg.id : ""},
                 {"status", status}};
        if (!reason.empty()) rec["reason"] = reason;
        emit(std::move(rec));
    }
}

} // namespace

// ---------------------------------------------------------------------------

RunResult run(const ScenarioConfig& cfg, const RunOptions& opts) {
    Engine engine(cfg, opts);
    return engine.execute();
}

Metrics fold_metrics(const std::vector<std::string>& log_lines) {
    Metrics m;
    std::map<std::string, std::pair<double, double>> powers; // node -> (tx, standby)
    for (const auto& line : log_lines) {
        const json r = json::parse(line);
        const std::string ev = r.value("ev", "");
        if (ev == "node_info") {
            m.node[r.at("node").get<std::string>()];
            if (r.contains("tx_power_w"))
                powers[r.at("node").get<std::string>()] = {r.at("tx_power_w").get<double>(),
                                                           r.at("standby_power_w").get<double>()};
        } else if (ev == "datum_enq") {
            ++m.datums_offered;
            ++m.node[r.at("node").get<std::string>()].datums_enqueued;
        } else if (ev == "datum_rej") {
            ++m.datums_offered;
            ++m.node[r.at("node").get<std::string>()].drops[r.at("reason").get<std::string>()];
        } else if (ev == "copy_tx") {
            NodeMetrics& nm = m.node[r.at("node").get<std::string>()];
            ++nm.copies_sent;
            PassStats& ps = m.passes[r.at("sat").get<std::string>()]
                                    [r.at("window").get<std::int64_t>()];
            ++ps.copies;
            if (r.at("copy").get<std::uint32_t>() == 0) {
                ++nm.frames_sent;
                ++ps.frames;
            }
            ps.bytes_raw += r.at("frame_bytes").get<std::uint64_t>();
            ps.tx_ms += r.at("airtime").get<DurationMs>();
            ps.energy_j += r.at("tx_power_w").get<double>() *
                           (static_cast<double>(r.at("airtime").get<DurationMs>()) / 1000.0);
        } else if (ev == "copy_drop") {
            ++m.node[r.at("node").get<std::string>()].drops[r.at("cause").get<std::string>()];
        } else if (ev == "frame_rx") {
            NodeMetrics& nm = m.node[r.at("node").get<std::string>()];
            ++nm.frames_received;
            const std::string outcome = r.value("outcome", "");
            if (outcome == "decode_error") {
                ++nm.decode_errors;
                ++nm.drops["decode_error"];
            } else if (outcome == "duplicate" || outcome == "stored" || outcome == "completed" ||
                       outcome == "conflict") {
                PassStats& ps = m.passes[r.at("sat").get<std::string>()]
                                        [r.at("window").get<std::int64_t>()];
                if (outcome == "duplicate") {
                    ++nm.duplicates;
                    ++ps.duplicates;
                } else if (outcome == "conflict") {
                    ++nm.conflicts;
                } else {
                    const auto plen = r.at("plen").get<std::uint64_t>();
                    ps.bytes_goodput += plen;
                    ps.goodput_by_source[r.at("src_id").get<std::string>()] += plen;
                    if (outcome == "completed") {
                        ++nm.datums_delivered;
                        if (r.contains("delivered_bytes"))
                            nm.bytes_goodput += r.at("delivered_bytes").get<std::uint64_t>();
                    }
                }
            }
        } else if (ev == "forward") {
            ++m.node[r.at("node").get<std::string>()].frames_forwarded;
        } else if (ev == "relay_evict") {
            ++m.node[r.at("node").get<std::string>()].drops["relay_evicted"];
        } else if (ev == "energy") {
            const std::string id = r.at("node").get<std::string>();
            RadioProfile tmp;
            tmp.name = "fold";
            tmp.frame_bytes = 32;
            tmp.air_rate_bps = 1;
            tmp.feed_rate_bps = 1;
            tmp.tx_power_w = powers[id].first;
            tmp.standby_power_w = powers[id].second;
            accrue_energy(m.node[id].energy, tmp, r.at("tx_ms").get<DurationMs>(),
                          r.at("idle_ms").get<DurationMs>());
        } else if (ev == "window") {
            if (r.at("open").get<bool>()) {
                PassStats& ps = m.passes[r.at("sat").get<std::string>()]
                                        [r.at("idx").get<std::int64_t>()];
                ps.start = r.at("start").get<TimeMs>();
                ps.end = r.at("end").get<TimeMs>();
            }
        } else if (ev == "slot") {
            PassStats& ps =
                m.passes[r.at("sat").get<std::string>()][r.at("window").get<std::int64_t>()];
            ps.slots.push_back({r.at("node").get<std::string>(), r.at("start").get<TimeMs>(),
                                r.at("end").get<TimeMs>()});
        } else if (ev == "script") {
            StepResult s;
            s.name = r.at("name").get<std::string>();
            s.row = r.at("row").get<std::string>();
            s.extension = r.at("extension").get<bool>();
            s.outcome = r.at("outcome").get<bool>();
            s.expected_pass = r.at("expected").get<bool>();
            s.passed = r.at("passed").get<bool>();
            s.note = r.at("note").get<std::string>();
            m.steps.push_back(std::move(s));
        } else if (ev == "endurance") {
            m.endurance_violation = true;
        } else if (ev == "datum_final") {
            const std::string status = r.at("status").get<std::string>();
            if (status == "delivered")
                ++m.datums_delivered;
            else if (status == "stored")
                ++m.datums_stored_end;
            else
                ++m.datums_dropped[r.value("reason", "lost")];
        } else if (ev == "run_end") {
            m.events_executed = r.at("events").get<std::uint64_t>();
        }
    }
    return m;
}

} // namespace satdtn

#pragma once

// Store-and-forward node machinery: the two-level outbound queue kept on
// every vehicle, static routing tables, the visibility-gated transmission
// planner driven by the SatComms tick, and the multi-vehicle slot scheduler
// for passes shared by several uplinks.

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "satdtn/fragproto.hpp"
#include "satdtn/linkmodel.hpp"
#include "satdtn/orbit.hpp"
#include "satdtn/types.hpp"

namespace satdtn {

enum class NodeKind { Vehicle, Satellite, Gateway, Server, Workstation };

const char* node_kind_name(NodeKind k);
std::optional<NodeKind> node_kind_from_name(const std::string& s);

// ---------------------------------------------------------------------------
// Outbound store queue

enum class EnqueueError { KindFiltered, QueueFull };

struct QueuedDatum {
    std::uint64_t datum_id = 0;
    Priority priority = Priority::Normal;
    TimeMs enqueued_at = 0;
    std::string kind;
    std::uint64_t remaining_bytes = 0; // payload bytes not yet handed to the radio
    std::vector<Fragment> fragments;
    std::size_t next_fragment = 0;

    bool exhausted() const { return next_fragment >= fragments.size(); }
};

// FIFO per priority level; High drains before Normal. Stored bytes are the
// payload bytes still waiting to be transmitted, bounded by capacity_bytes.
class StoreQueue {
public:
    explicit StoreQueue(std::uint64_t capacity_bytes = 1 << 20)
        : capacity_bytes_(capacity_bytes) {}

    bool can_accept(std::uint64_t bytes) const {
        return stored_bytes_ + bytes <= capacity_bytes_;
    }
    void push(QueuedDatum d);

    // Entry the radio should serve next, or nullptr when empty.
    QueuedDatum* front();
    const QueuedDatum* front() const;

    // Hand the front entry's next fragment to the radio. The entry is
    // removed once its last fragment is consumed.
    Fragment consume_front_fragment();

    std::uint64_t stored_bytes() const { return stored_bytes_; }
    std::uint64_t capacity_bytes() const { return capacity_bytes_; }
    std::size_t datum_count() const { return high_.size() + normal_.size(); }
    std::size_t fragment_count() const;
    bool empty() const { return high_.empty() && normal_.empty(); }

private:
    std::deque<QueuedDatum>& lane(Priority p) { return p == Priority::High ? high_ : normal_; }

    std::uint64_t capacity_bytes_;
    std::uint64_t stored_bytes_ = 0;
    std::deque<QueuedDatum> high_;
    std::deque<QueuedDatum> normal_;
};

// ---------------------------------------------------------------------------
// SatComms task configuration and transmission planning

struct SatCommsConfig {
    bool transmit_when_possible = false;
    std::set<std::string> accepted_kinds; // empty accepts everything
    std::string target;                   // node whose ephemeris gates transmission
    std::string dest;                     // final destination for queued data
    bool target_configured = false;       // set once the orbit parameters are loaded

    bool accepts(const std::string& kind) const {
        return accepted_kinds.empty() || accepted_kinds.count(kind) != 0;
    }
};

// One over-the-air copy the radio should transmit.
struct PlannedCopy {
    Fragment fragment;
    std::uint32_t copy_index = 0; // 0 .. redundancy-1
    TimeMs start = 0;
    DurationMs airtime = 0;
};

// Everything the tick decision needs from the surrounding simulation.
struct SatCommsTickContext {
    TimeMs now = 0;
    bool visible = false;
    TimeMs window_end = 0; // end of the current pass, valid when visible
    // Assigned transmit slot within the pass; defaults to unrestricted for
    // vehicles that do not share their uplink.
    TimeMs slot_start = 0;
    TimeMs slot_end = std::numeric_limits<TimeMs>::max();
    bool uplink_up = true; // administrative state of the uplink
    DurationMs copy_airtime = 0;
    std::uint32_t redundancy = 1;
};

// Decide what the radio does at a tick. Emits the redundant copies of the
// next queued fragment, back to back, iff the task may transmit, the
// satellite is in view, the radio is idle and the whole copy train finishes
// before both the window and the assigned slot close. A fragment that does
// not fit is retained for the next pass; nothing is cut off mid-frame.
std::vector<PlannedCopy> satcomms_tick(const SatCommsConfig& cfg, StoreQueue& queue,
                                       TimeMs radio_busy_until,
                                       const SatCommsTickContext& ctx);

// ---------------------------------------------------------------------------
// Static routing

// Per-node map: final destination -> next hop.
using RoutingTable = std::map<std::string, std::string>;

// Deterministic lookup; nullopt means no route (the frame is stored).
std::optional<std::string> route_next_hop(const RoutingTable& table, const std::string& dest);

// Walk the configured tables from every (node, dest) pair and reject loops.
// Dead ends are legal (store-and-forward holds the data there).
void check_no_routing_loops(const std::map<std::string, RoutingTable>& tables);

// ---------------------------------------------------------------------------
// Multi-vehicle transmission scheduling

struct SlotDemand {
    std::string node;
    std::uint64_t queued_bytes = 0;
    DurationMs quantum_ms = 1; // airtime of one fragment incl. redundant copies
};

struct TransmitSlot {
    std::string node;
    TimeMs start = 0;
    TimeMs end = 0;
};

// Partition a shared pass into contiguous per-vehicle slots proportional to
// queued bytes, in whole fragment quanta. Leftover quanta are dealt one per
// vehicle in descending-queue order; the sub-quantum tail is appended to the
// largest queue. Vehicles with nothing queued get no slot.
std::vector<TransmitSlot> schedule_multi_vehicle(const std::vector<SlotDemand>& demands,
                                                 const PassWindow& window);

} // namespace satdtn

#include "satdtn/dtn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace satdtn {

const char* node_kind_name(NodeKind k) {
    switch (k) {
    case NodeKind::Vehicle: return "vehicle";
    case NodeKind::Satellite: return "satellite";
    case NodeKind::Gateway: return "gateway";
    case NodeKind::Server: return "server";
    case NodeKind::Workstation: return "workstation";
    }
    return "unknown";
}

std::optional<NodeKind> node_kind_from_name(const std::string& s) {
    if (s == "vehicle") return NodeKind::Vehicle;
    if (s == "satellite") return NodeKind::Satellite;
    if (s == "gateway") return NodeKind::Gateway;
    if (s == "server") return NodeKind::Server;
    if (s == "workstation") return NodeKind::Workstation;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

void StoreQueue::push(QueuedDatum d) {
    stored_bytes_ += d.remaining_bytes;
    lane(d.priority).push_back(std::move(d));
}

QueuedDatum* StoreQueue::front() {
    if (!high_.empty()) return &high_.front();
    if (!normal_.empty()) return &normal_.front();
    return nullptr;
}

const QueuedDatum* StoreQueue::front() const {
    return const_cast<StoreQueue*>(this)->front();
}

Fragment StoreQueue::consume_front_fragment() {
    QueuedDatum* d = front();
    if (!d) throw std::logic_error("StoreQueue: consume on empty queue");
    Fragment f = d->fragments[d->next_fragment++];
    stored_bytes_ -= std::min<std::uint64_t>(stored_bytes_, f.payload.size());
    d->remaining_bytes -= std::min<std::uint64_t>(d->remaining_bytes, f.payload.size());
    if (d->exhausted()) lane(d->priority).pop_front();
    return f;
}

std::size_t StoreQueue::fragment_count() const {
    std::size_t n = 0;
    for (const auto& d : high_) n += d.fragments.size() - d.next_fragment;
    for (const auto& d : normal_) n += d.fragments.size() - d.next_fragment;
    return n;
}

// ---------------------------------------------------------------------------

std::vector<PlannedCopy> satcomms_tick(const SatCommsConfig& cfg, StoreQueue& queue,
                                       TimeMs radio_busy_until,
                                       const SatCommsTickContext& ctx) {
    if (!cfg.transmit_when_possible || !cfg.target_configured) return {};
    if (ctx.now < radio_busy_until) return {};
    if (!ctx.visible || !ctx.uplink_up) return {};
    if (ctx.now < ctx.slot_start || ctx.now >= ctx.slot_end) return {};
    if (queue.empty()) return {};

    // Admit whole copy trains only: the last copy must land before both the
    // window and the slot close.
    const DurationMs train = ctx.copy_airtime * static_cast<DurationMs>(ctx.redundancy);
    const TimeMs deadline = std::min(ctx.window_end, ctx.slot_end);
    if (ctx.now + train > deadline) return {};

    Fragment f = queue.consume_front_fragment();
    std::vector<PlannedCopy> copies;
    copies.reserve(ctx.redundancy);
    for (std::uint32_t k = 0; k < ctx.redundancy; ++k) {
        copies.push_back(PlannedCopy{f, k,
                                     ctx.now + static_cast<TimeMs>(k) * ctx.copy_airtime,
                                     ctx.copy_airtime});
    }
    return copies;
}

// ---------------------------------------------------------------------------

std::optional<std::string> route_next_hop(const RoutingTable& table, const std::string& dest) {
    auto it = table.find(dest);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

void check_no_routing_loops(const std::map<std::string, RoutingTable>& tables) {
    for (const auto& [origin, table] : tables) {
        for (const auto& [dest, first_hop] : table) {
            std::set<std::string> seen{origin};
            std::string cur = first_hop;
            while (cur != dest) {
                if (!seen.insert(cur).second)
                    throw ConfigError("routes: loop detected from '" + origin + "' toward '" +
                                      dest + "' (revisits '" + cur + "')");
                auto it = tables.find(cur);
                if (it == tables.end()) break; // dead end: data is stored there
                auto hop = route_next_hop(it->second, dest);
                if (!hop) break;
                cur = *hop;
            }
        }
    }
}

// ---------------------------------------------------------------------------

std::vector<TransmitSlot> schedule_multi_vehicle(const std::vector<SlotDemand>& demands,
                                                 const PassWindow& window) {
    const DurationMs length = window.end - window.start;
    const std::uint64_t total =
        std::accumulate(demands.begin(), demands.end(), std::uint64_t{0},
                        [](std::uint64_t acc, const SlotDemand& d) { return acc + d.queued_bytes; });
    if (total == 0 || length <= 0) return {};

    // Base share: floor of the proportional slice, in whole quanta.
    std::vector<DurationMs> alloc(demands.size(), 0);
    DurationMs used = 0;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        if (demands[i].queued_bytes == 0) continue;
        const DurationMs share = static_cast<DurationMs>(
            static_cast<unsigned __int128>(length) * demands[i].queued_bytes / total);
        alloc[i] = (share / demands[i].quantum_ms) * demands[i].quantum_ms;
        used += alloc[i];
    }

    // Deal leftover whole quanta one per vehicle, biggest queue first, so no
    // vehicle ends up more than one quantum ahead of its peers.
    std::vector<std::size_t> order(demands.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return demands[a].queued_bytes > demands[b].queued_bytes;
    });
    DurationMs leftover = length - used;
    bool dealt = true;
    while (dealt) {
        dealt = false;
        for (std::size_t i : order) {
            if (demands[i].queued_bytes == 0) continue;
            if (leftover >= demands[i].quantum_ms) {
                alloc[i] += demands[i].quantum_ms;
                leftover -= demands[i].quantum_ms;
                dealt = true;
            }
        }
    }
    // The sub-quantum tail goes to the largest queue; it is too short to fit
    // another copy train so it only pads that slot.
    if (leftover > 0 && !order.empty()) {
        for (std::size_t i : order) {
            if (demands[i].queued_bytes > 0) {
                alloc[i] += leftover;
                break;
            }
        }
    }

    std::vector<TransmitSlot> slots;
    TimeMs cursor = window.start;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        if (alloc[i] <= 0) continue;
        slots.push_back(TransmitSlot{demands[i].node, cursor, cursor + alloc[i]});
        cursor += alloc[i];
    }
    return slots;
}

} // namespace satdtn

#pragma once

#include <algorithm>
#include <cstdint>
#include <variant>
#include <vector>

#include "manetsim/packet.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct PacketDelivery {
    NodeId to = 0;
    NodeId from = 0;
    Packet pkt;
};
struct TransmitComplete {
    NodeId node = 0;
};
struct FlowTick {
    std::uint32_t flow_idx = 0;
};
struct AttackerTick {
    std::uint32_t attacker_idx = 0;
};
// Continuation of an RREQ rebroadcast decision after its jitter delay; the
// self rate limiter is consulted when this fires.
struct RreqForward {
    NodeId node = 0;
    RouteRequest rreq;
};
struct RetryDiscovery {
    NodeId node = 0;
    NodeId dest = 0;
};
struct RouteSweep {};
struct BufferSweep {};
struct BlacklistSweep {};
// Removes a radio link at a scheduled time. Not reachable from scenario
// config; tests use it to exercise broken-link handling mid-run.
struct LinkDown {
    NodeId a = 0;
    NodeId b = 0;
};
struct SimEnd {};

using Event = std::variant<PacketDelivery, TransmitComplete, FlowTick, AttackerTick, RreqForward,
                           RetryDiscovery, RouteSweep, BufferSweep, BlacklistSweep, LinkDown, SimEnd>;

// Min-priority queue over (time, insertion order). The order counter makes
// equal-time pops deterministic and independent of heap internals.
class EventQueue {
public:
    struct Item {
        SimTime time;
        std::uint64_t order = 0;
        Event ev;
    };

    void schedule(SimTime t, Event ev) {
        heap_.push_back(Item{t, next_order_++, std::move(ev)});
        std::push_heap(heap_.begin(), heap_.end(), later);
    }

    bool empty() const { return heap_.empty(); }

    Item pop() {
        std::pop_heap(heap_.begin(), heap_.end(), later);
        Item item = std::move(heap_.back());
        heap_.pop_back();
        return item;
    }

    // Remaining items in no particular order; used for the end-of-run
    // in-flight scan.
    const std::vector<Item>& pending() const { return heap_; }

private:
    static bool later(const Item& a, const Item& b) {
        if (a.time != b.time) return a.time > b.time;
        return a.order > b.order;
    }

    std::vector<Item> heap_;
    std::uint64_t next_order_ = 0;
};

}  // namespace manetsim

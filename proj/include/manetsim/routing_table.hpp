#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "manetsim/packet.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct RouteEntry {
    NodeId dest = 0;
    NodeId next_hop = 0;
    std::uint32_t hop_count = 0;
    SeqNum seq;
    bool valid = false;
    SimTime expires_at;
};

// Destination-sequence-numbered distance vector table. An entry is usable
// only while valid and unexpired; expiry boundaries are closed (an entry
// whose expires_at equals now is expired).
class RoutingTable {
public:
    enum class Update : std::uint8_t {
        Installed,   // validity started (no entry, or entry was invalid)
        Improved,    // fresher seq or shorter path replaced the incumbent
        Rejected,    // incumbent kept: stale seq, or equal freshness without fewer hops
    };

    const RouteEntry* find(NodeId dest) const;
    // Entry usable for forwarding at `now`, else nullptr.
    const RouteEntry* valid_route(NodeId dest, SimTime now) const;

    // Freshness-gated install/update from a routing message advertising
    // `dest` at `hop_count` hops via `next_hop`.
    Update update_from_advertisement(NodeId dest, NodeId next_hop, std::uint32_t hop_count,
                                     SeqNum seq, SimTime lifetime, SimTime now);

    // Extends the lifetime of a valid entry that was just used.
    void refresh_on_use(NodeId dest, SimTime lifetime, SimTime now);

    // Marks the entry for dest invalid. Returns true on a valid->invalid
    // transition. When bump_seq is set the entry's sequence number is
    // incremented, poisoning re-installs from stale advertisements.
    bool invalidate(NodeId dest, bool bump_seq);

    // Raises the entry's sequence number to at least `seq` without touching
    // validity. Used when adopting the number carried by a route error.
    void adopt_seq(NodeId dest, SeqNum seq);

    // Invalid-marks every valid entry whose expires_at <= now; returns the
    // destinations that transitioned.
    std::vector<NodeId> expire_routes(SimTime now);

    // Valid destinations currently routed through `hop`, including `hop`
    // itself if an entry for it exists.
    std::vector<NodeId> valid_dests_via(NodeId hop) const;

    const std::map<NodeId, RouteEntry>& entries() const { return entries_; }

private:
    std::map<NodeId, RouteEntry> entries_;
};

}  // namespace manetsim

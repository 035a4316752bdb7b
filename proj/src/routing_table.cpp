#include "manetsim/routing_table.hpp"

namespace manetsim {

const RouteEntry* RoutingTable::find(NodeId dest) const {
    auto it = entries_.find(dest);
    return it == entries_.end() ? nullptr : &it->second;
}

const RouteEntry* RoutingTable::valid_route(NodeId dest, SimTime now) const {
    const RouteEntry* e = find(dest);
    if (e && e->valid && e->expires_at > now) return e;
    return nullptr;
}

RoutingTable::Update RoutingTable::update_from_advertisement(NodeId dest, NodeId next_hop,
                                                            std::uint32_t hop_count, SeqNum seq,
                                                            SimTime lifetime, SimTime now) {
    SimTime expires = now + lifetime;
    auto it = entries_.find(dest);
    if (it == entries_.end()) {
        entries_[dest] = RouteEntry{dest, next_hop, hop_count, seq, true, expires};
        return Update::Installed;
    }
    RouteEntry& e = it->second;
    bool usable = e.valid && e.expires_at > now;
    bool fresher = seq.fresher_than(e.seq);
    // An unusable entry may be re-installed at equal freshness, but never
    // from a stale advertisement: an error-bumped sequence number must keep
    // poisoning old paths.
    bool accept = fresher || (seq == e.seq && (!usable || hop_count < e.hop_count));
    if (accept) {
        e.next_hop = next_hop;
        e.hop_count = hop_count;
        e.seq = seq;
        e.valid = true;
        e.expires_at = expires;
        return usable ? Update::Improved : Update::Installed;
    }
    return Update::Rejected;  // stale, or equal freshness without fewer hops
}

void RoutingTable::refresh_on_use(NodeId dest, SimTime lifetime, SimTime now) {
    auto it = entries_.find(dest);
    if (it == entries_.end() || !it->second.valid) return;
    SimTime expires = now + lifetime;
    if (expires > it->second.expires_at) it->second.expires_at = expires;
}

bool RoutingTable::invalidate(NodeId dest, bool bump_seq) {
    auto it = entries_.find(dest);
    if (it == entries_.end()) return false;
    if (bump_seq) ++it->second.seq;
    if (!it->second.valid) return false;
    it->second.valid = false;
    return true;
}

void RoutingTable::adopt_seq(NodeId dest, SeqNum seq) {
    auto it = entries_.find(dest);
    if (it != entries_.end()) it->second.seq = SeqNum::max_of(seq, it->second.seq);
}

std::vector<NodeId> RoutingTable::expire_routes(SimTime now) {
    std::vector<NodeId> expired;
    for (auto& [dest, e] : entries_) {
        if (e.valid && e.expires_at <= now) {
            e.valid = false;
            expired.push_back(dest);
        }
    }
    return expired;
}

std::vector<NodeId> RoutingTable::valid_dests_via(NodeId hop) const {
    std::vector<NodeId> out;
    for (const auto& [dest, e] : entries_) {
        if (e.valid && e.next_hop == hop) out.push_back(dest);
    }
    return out;
}

}  // namespace manetsim

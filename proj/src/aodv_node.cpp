#include "manetsim/aodv_node.hpp"

namespace manetsim {

namespace {
// Sanity bounds; anything beyond them is a corrupt header, not a long path.
constexpr std::uint32_t kAbsurdHops = 512;
}

const char* drop_reason_name(DropReason r) {
    switch (r) {
        case DropReason::MacQueueOverflow: return "mac_queue_overflow";
        case DropReason::NoRoute: return "no_route";
        case DropReason::BufferFull: return "buffer_full";
        case DropReason::BufferTimeout: return "buffer_timeout";
        case DropReason::LinkBroken: return "link_broken";
        case DropReason::SelfRateLimit: return "self_rate_limit";
        case DropReason::ProtocolError: return "protocol_error";
        case DropReason::StrictBlacklist: return "strict_blacklist";
    }
    return "unknown";
}

RoutingTable::Update AodvNode::install_route(NodeId dest, NodeId next_hop, std::uint32_t hops,
                                             SeqNum seq, SimTime lifetime, SimTime now) {
    auto result = table_.update_from_advertisement(dest, next_hop, hops, seq, lifetime, now);
    if (result == RoutingTable::Update::Installed && hooks_) {
        hooks_->route_installed(id_, dest, now);
    }
    return result;
}

OriginateResult AodvNode::originate_rreq(NodeId dest, SimTime now) {
    if (!malicious_ && !limiter_.allows(now)) {
        return {std::nullopt, limiter_.next_permit_time(now)};
    }
    ++own_seq_;
    RouteRequest rreq;
    rreq.origin = id_;
    rreq.dest = dest;
    rreq.rreq_id = next_rreq_id_++;
    rreq.origin_seq = own_seq_;
    if (const RouteEntry* e = table_.find(dest)) rreq.dest_seq = e->seq;
    rreq.hop_count = 0;
    rreq.ttl = cfg_.rreq_ttl;

    // Remember our own discovery so the echo rebroadcast is a duplicate.
    rreq_seen_[{id_, rreq.rreq_id}] = now;
    if (!malicious_) limiter_.record(now);
    return {Emission{rreq, std::nullopt, false}, std::nullopt};
}

RreqResult AodvNode::process_rreq(const RouteRequest& rreq, NodeId sender, SimTime now) {
    if (rreq.dest == rreq.origin || rreq.hop_count > kAbsurdHops || rreq.ttl > kAbsurdHops) {
        if (hooks_) hooks_->packet_dropped(id_, Packet{rreq}, DropReason::ProtocolError, now);
        return {RreqAction::MalformedDropped, std::nullopt};
    }

    auto key = std::make_pair(rreq.origin, rreq.rreq_id);
    auto seen = rreq_seen_.find(key);
    if (seen != rreq_seen_.end() && now - seen->second < cfg_.dedup_horizon) {
        seen->second = now;  // duplicate: only the dedup timestamp moves
        return {RreqAction::DuplicateDropped, std::nullopt};
    }
    rreq_seen_[key] = now;

    install_route(rreq.origin, sender, rreq.hop_count + 1, rreq.origin_seq,
                  cfg_.route_lifetime, now);

    if (rreq.dest == id_) {
        if (rreq.dest_seq) own_seq_ = SeqNum::max_of(own_seq_, *rreq.dest_seq);
        RouteReply rrep;
        rrep.dest = id_;
        rrep.origin = rreq.origin;
        rrep.dest_seq = own_seq_;
        rrep.hop_count = 0;
        rrep.lifetime = cfg_.route_lifetime;
        return {RreqAction::RepliedAsDestination, Emission{rrep, sender, false}};
    }

    if (const RouteEntry* e = table_.valid_route(rreq.dest, now)) {
        bool fresh_enough = !rreq.dest_seq || !rreq.dest_seq->fresher_than(e->seq);
        if (fresh_enough) {
            RouteReply rrep;
            rrep.dest = rreq.dest;
            rrep.origin = rreq.origin;
            rrep.dest_seq = e->seq;
            rrep.hop_count = e->hop_count;
            rrep.lifetime = e->expires_at - now;
            return {RreqAction::RepliedFromCache, Emission{rrep, sender, false}};
        }
    }

    if (rreq.ttl == 0) {
        return {RreqAction::TtlExpired, std::nullopt};
    }
    RouteRequest fwd = rreq;
    fwd.hop_count += 1;
    fwd.ttl -= 1;
    return {RreqAction::Rebroadcast, Emission{fwd, std::nullopt, true}};
}

bool AodvNode::permit_rreq_forward(SimTime now) {
    if (malicious_) return true;
    if (!limiter_.allows(now)) return false;
    limiter_.record(now);
    return true;
}

RrepResult AodvNode::process_rrep(const RouteReply& rrep, NodeId sender, SimTime now) {
    install_route(rrep.dest, sender, rrep.hop_count + 1, rrep.dest_seq, rrep.lifetime, now);

    RrepResult result;
    if (rrep.origin == id_) {
        result.outcome = RrepResult::Outcome::Consumed;
        discovery_deadline_.erase(rrep.dest);
        auto buf = buffer_.find(rrep.dest);
        if (buf != buffer_.end()) {
            std::deque<Buffered> pending = std::move(buf->second);
            buffer_.erase(buf);
            for (Buffered& b : pending) {
                buffered_count_ -= 1;
                if (now - b.enqueued_at > cfg_.buffer_timeout) {
                    if (hooks_) hooks_->packet_dropped(id_, Packet{b.pkt}, DropReason::BufferTimeout, now);
                    continue;
                }
                DataResult fwd = forward_data(b.pkt, now);
                for (Emission& e : fwd.emissions) result.emissions.push_back(std::move(e));
            }
        }
        return result;
    }

    const RouteEntry* reverse = table_.valid_route(rrep.origin, now);
    if (!reverse) {
        if (hooks_) hooks_->packet_dropped(id_, Packet{rrep}, DropReason::NoRoute, now);
        result.outcome = RrepResult::Outcome::DroppedNoReverse;
        return result;
    }
    table_.refresh_on_use(rrep.origin, cfg_.route_lifetime, now);
    RouteReply fwd = rrep;
    fwd.hop_count += 1;
    result.outcome = RrepResult::Outcome::Forwarded;
    result.emissions.push_back(Emission{fwd, reverse->next_hop, false});
    return result;
}

std::optional<Emission> AodvNode::make_ack(const DataPacket& pkt, SimTime now) {
    AckPacket ack;
    ack.for_flow = pkt.flow_id;
    ack.for_seq = pkt.seq;
    ack.src = id_;
    ack.dst = pkt.src;
    ack.data_sent_at = pkt.sent_at;
    const RouteEntry* e = table_.valid_route(ack.dst, now);
    if (!e) {
        if (hooks_) hooks_->packet_dropped(id_, Packet{ack}, DropReason::NoRoute, now);
        return std::nullopt;
    }
    table_.refresh_on_use(ack.dst, cfg_.route_lifetime, now);
    return Emission{ack, e->next_hop, false};
}

OriginateResult AodvNode::start_discovery(NodeId dest, SimTime now) {
    OriginateResult result = originate_rreq(dest, now);
    if (result.rreq) {
        discovery_deadline_[dest] = now + cfg_.discovery_retry_wait;
    } else if (result.retry_at) {
        discovery_deadline_[dest] = *result.retry_at;
    }
    return result;
}

DataResult AodvNode::forward_data(const DataPacket& pkt, SimTime now) {
    DataResult result;
    if (pkt.dst == id_) {
        result.action = ForwardAction::Delivered;
        if (auto ack = make_ack(pkt, now)) result.emissions.push_back(std::move(*ack));
        return result;
    }

    if (const RouteEntry* e = table_.valid_route(pkt.dst, now)) {
        table_.refresh_on_use(pkt.dst, cfg_.route_lifetime, now);
        table_.refresh_on_use(e->next_hop, cfg_.route_lifetime, now);
        result.action = ForwardAction::Forwarded;
        result.emissions.push_back(Emission{pkt, e->next_hop, false});
        return result;
    }

    if (pkt.src != id_) {
        if (hooks_) hooks_->packet_dropped(id_, Packet{pkt}, DropReason::NoRoute, now);
        result.action = ForwardAction::DroppedNoRoute;
        return result;
    }

    if (buffered_count_ >= cfg_.buffer_capacity) {
        if (hooks_) hooks_->packet_dropped(id_, Packet{pkt}, DropReason::BufferFull, now);
        result.action = ForwardAction::DroppedBufferFull;
        return result;
    }
    buffer_[pkt.dst].push_back(Buffered{pkt, now});
    buffered_count_ += 1;
    result.action = ForwardAction::Buffered;

    auto deadline = discovery_deadline_.find(pkt.dst);
    if (deadline == discovery_deadline_.end() || now >= deadline->second) {
        OriginateResult disc = start_discovery(pkt.dst, now);
        if (disc.rreq) result.emissions.push_back(std::move(*disc.rreq));
        result.retry_at = disc.retry_at;
    }
    return result;
}

AckResult AodvNode::handle_ack(const AckPacket& ack, SimTime now) {
    if (ack.dst == id_) return {true, std::nullopt};
    const RouteEntry* e = table_.valid_route(ack.dst, now);
    if (!e) {
        if (hooks_) hooks_->packet_dropped(id_, Packet{ack}, DropReason::NoRoute, now);
        return {false, std::nullopt};
    }
    table_.refresh_on_use(ack.dst, cfg_.route_lifetime, now);
    return {false, Emission{ack, e->next_hop, false}};
}

RerrResult AodvNode::process_rerr(const RouteError& rerr, NodeId, SimTime now) {
    RerrResult result;
    RouteError fwd;
    for (const auto& u : rerr.unreachable) {
        if (!rerr_seen_.insert({u.dest, u.seq.value}).second) continue;
        fwd.unreachable.push_back(u);
        const RouteEntry* e = table_.find(u.dest);
        if (e && !e->seq.fresher_than(u.seq)) {
            bool transitioned = table_.invalidate(u.dest, false);
            table_.adopt_seq(u.dest, u.seq);
            if (transitioned) {
                result.invalidated.push_back(u.dest);
                if (hooks_) hooks_->route_invalidated(id_, u.dest, now);
            }
        }
    }
    if (!fwd.unreachable.empty()) {
        result.broadcast = Emission{fwd, std::nullopt, false};
    }
    return result;
}

RerrResult AodvNode::emit_and_process_rerr(NodeId broken_next_hop, SimTime now) {
    RerrResult result;
    RouteError rerr;
    for (NodeId dest : table_.valid_dests_via(broken_next_hop)) {
        table_.invalidate(dest, true);  // bump poisons stale re-installs
        const RouteEntry* e = table_.find(dest);
        rerr.unreachable.push_back({dest, e->seq});
        rerr_seen_.insert({dest, e->seq.value});
        result.invalidated.push_back(dest);
        if (hooks_) hooks_->route_invalidated(id_, dest, now);
    }
    if (!rerr.unreachable.empty()) {
        result.broadcast = Emission{rerr, std::nullopt, false};
    }
    return result;
}

OriginateResult AodvNode::retry_discovery(NodeId dest, SimTime now) {
    auto buf = buffer_.find(dest);
    bool waiting = buf != buffer_.end() && !buf->second.empty();
    if (!waiting || table_.valid_route(dest, now)) return {};
    return start_discovery(dest, now);
}

std::vector<NodeId> AodvNode::expire_routes(SimTime now) {
    std::vector<NodeId> expired = table_.expire_routes(now);
    if (hooks_) {
        for (NodeId dest : expired) hooks_->route_invalidated(id_, dest, now);
    }
    return expired;
}

std::uint32_t AodvNode::sweep_buffers(SimTime now) {
    std::uint32_t dropped = 0;
    for (auto it = buffer_.begin(); it != buffer_.end();) {
        std::deque<Buffered>& q = it->second;
        while (!q.empty() && now - q.front().enqueued_at > cfg_.buffer_timeout) {
            if (hooks_) hooks_->packet_dropped(id_, Packet{q.front().pkt}, DropReason::BufferTimeout, now);
            q.pop_front();
            buffered_count_ -= 1;
            dropped += 1;
        }
        it = q.empty() ? buffer_.erase(it) : std::next(it);
    }
    return dropped;
}

void AodvNode::sweep_rreq_seen(SimTime now) {
    for (auto it = rreq_seen_.begin(); it != rreq_seen_.end();) {
        it = (now - it->second >= cfg_.dedup_horizon) ? rreq_seen_.erase(it) : std::next(it);
    }
}

std::map<std::uint32_t, std::uint64_t> AodvNode::buffered_by_flow() const {
    std::map<std::uint32_t, std::uint64_t> out;
    for (const auto& [dest, q] : buffer_) {
        for (const Buffered& b : q) out[b.pkt.flow_id] += 1;
    }
    return out;
}

}  // namespace manetsim

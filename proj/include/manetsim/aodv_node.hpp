#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "manetsim/packet.hpp"
#include "manetsim/routing_table.hpp"
#include "manetsim/self_rate_limiter.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

enum class DropReason : std::uint8_t {
    MacQueueOverflow,
    NoRoute,
    BufferFull,
    BufferTimeout,
    LinkBroken,
    SelfRateLimit,
    ProtocolError,
    StrictBlacklist,
};

const char* drop_reason_name(DropReason r);

// Protocol constants shared by every node in a run.
struct AodvConfig {
    SimTime route_lifetime = SimTime::seconds(3.0);
    SimTime dedup_horizon = SimTime::seconds(3.0);
    std::uint32_t buffer_capacity = 64;  // data packets buffered per node
    SimTime buffer_timeout = SimTime::seconds(1.5);
    std::uint32_t self_rreq_limit = 10;  // RREQ_RATELIMIT, originations + forwards
    std::uint32_t rreq_ttl = 16;
    SimTime discovery_retry_wait = SimTime::seconds(1.0);
    // Deterministic per-forward delay spread for RREQ rebroadcasts, as the
    // reference implementations apply to broadcasts. Keeps independent
    // forward streams from locking into exact phase.
    SimTime rreq_forward_jitter = SimTime::seconds(0.010);
};

// A packet this node wants on the air. Without unicast_to it is a broadcast.
// jittered_rreq_forward marks an RREQ rebroadcast, which the kernel delays
// by a small deterministic jitter and gates through the self rate limiter at
// emission time.
struct Emission {
    Packet pkt;
    std::optional<NodeId> unicast_to;
    bool jittered_rreq_forward = false;
};

// Kernel-side observer for state transitions the metrics engine cares
// about. Unit tests may run a node without one.
struct NodeHooks {
    virtual void route_installed(NodeId node, NodeId dest, SimTime now) = 0;
    virtual void route_invalidated(NodeId node, NodeId dest, SimTime now) = 0;
    virtual void packet_dropped(NodeId node, const Packet& pkt, DropReason reason, SimTime now) = 0;
    virtual ~NodeHooks() = default;
};

enum class RreqAction : std::uint8_t {
    DuplicateDropped,
    RepliedAsDestination,
    RepliedFromCache,
    Rebroadcast,
    TtlExpired,
    MalformedDropped,
};

enum class ForwardAction : std::uint8_t {
    Delivered,
    Forwarded,
    Buffered,
    DroppedNoRoute,
    DroppedBufferTimeout,
    DroppedBufferFull,
};

struct OriginateResult {
    std::optional<Emission> rreq;
    std::optional<SimTime> retry_at;  // set when the rate limiter deferred the discovery
};

struct RreqResult {
    RreqAction action = RreqAction::DuplicateDropped;
    std::optional<Emission> emission;
};

struct RrepResult {
    enum class Outcome : std::uint8_t { Consumed, Forwarded, DroppedNoReverse };
    Outcome outcome = Outcome::Consumed;
    std::vector<Emission> emissions;  // forwarded reply, or data flushed at the origin
};

struct DataResult {
    ForwardAction action = ForwardAction::Delivered;
    std::vector<Emission> emissions;
    std::optional<SimTime> retry_at;  // deferred discovery, see OriginateResult
};

struct AckResult {
    bool consumed = false;
    std::optional<Emission> forward;
};

struct RerrResult {
    std::optional<Emission> broadcast;
    std::vector<NodeId> invalidated;
};

// One node's AODV state machine. Pure protocol logic: receives packets,
// returns emissions and verdicts; radio, queues, timing, and the flood
// screen live in the kernel.
class AodvNode {
public:
    AodvNode(NodeId id, const AodvConfig& cfg, bool malicious, NodeHooks* hooks)
        : id_(id), cfg_(cfg), malicious_(malicious), limiter_(cfg.self_rreq_limit), hooks_(hooks) {}

    NodeId id() const { return id_; }
    bool malicious() const { return malicious_; }

    // Starts a route discovery toward dest. A genuine node that is over its
    // RREQ budget emits nothing and reports when to retry.
    OriginateResult originate_rreq(NodeId dest, SimTime now);

    RreqResult process_rreq(const RouteRequest& rreq, NodeId sender, SimTime now);

    // Gate an RREQ rebroadcast through the self rate limiter at its actual
    // emission time. Records the emission when permitted.
    bool permit_rreq_forward(SimTime now);

    RrepResult process_rrep(const RouteReply& rrep, NodeId sender, SimTime now);

    DataResult forward_data(const DataPacket& pkt, SimTime now);

    AckResult handle_ack(const AckPacket& ack, SimTime now);

    RerrResult process_rerr(const RouteError& rerr, NodeId sender, SimTime now);

    // Invalidates every route through broken_next_hop (sequence numbers
    // bumped) and builds the corresponding error broadcast.
    RerrResult emit_and_process_rerr(NodeId broken_next_hop, SimTime now);

    // Called when a deferred discovery's retry time arrives.
    OriginateResult retry_discovery(NodeId dest, SimTime now);

    // Periodic maintenance. Each returns what it removed or dropped.
    std::vector<NodeId> expire_routes(SimTime now);
    std::uint32_t sweep_buffers(SimTime now);
    void sweep_rreq_seen(SimTime now);

    const RoutingTable& table() const { return table_; }
    const SelfRateLimiter& limiter() const { return limiter_; }
    std::uint32_t buffered_count() const { return buffered_count_; }
    std::size_t rreq_seen_size() const { return rreq_seen_.size(); }

    // Buffered data packets per flow id; the end-of-run in-flight scan
    // counts them toward conservation.
    std::map<std::uint32_t, std::uint64_t> buffered_by_flow() const;

private:
    RoutingTable::Update install_route(NodeId dest, NodeId next_hop, std::uint32_t hops,
                                       SeqNum seq, SimTime lifetime, SimTime now);
    std::optional<Emission> make_ack(const DataPacket& pkt, SimTime now);
    OriginateResult start_discovery(NodeId dest, SimTime now);

    NodeId id_;
    AodvConfig cfg_;
    bool malicious_;
    RoutingTable table_;
    SelfRateLimiter limiter_;
    SeqNum own_seq_;
    std::uint32_t next_rreq_id_ = 0;

    std::map<std::pair<NodeId, std::uint32_t>, SimTime> rreq_seen_;
    std::set<std::pair<NodeId, std::uint32_t>> rerr_seen_;  // (dest, seq.value)

    struct Buffered {
        DataPacket pkt;
        SimTime enqueued_at;
    };
    std::map<NodeId, std::deque<Buffered>> buffer_;  // per destination, FIFO
    std::uint32_t buffered_count_ = 0;
    std::map<NodeId, SimTime> discovery_deadline_;  // no new discovery for dest before this

    NodeHooks* hooks_;
};

}  // namespace manetsim

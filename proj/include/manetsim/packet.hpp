#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "manetsim/sim_time.hpp"

namespace manetsim {

using NodeId = std::uint32_t;

// AODV destination sequence number with circular freshness comparison
// (signed 32-bit rollover arithmetic).
struct SeqNum {
    std::uint32_t value = 0;

    SeqNum& operator++() { ++value; return *this; }
    friend bool operator==(SeqNum, SeqNum) = default;

    // True when this number is strictly fresher than other.
    bool fresher_than(SeqNum other) const {
        return static_cast<std::int32_t>(value - other.value) > 0;
    }

    static SeqNum max_of(SeqNum a, SeqNum b) { return a.fresher_than(b) ? a : b; }
};

struct RouteRequest {
    NodeId origin = 0;
    NodeId dest = 0;
    std::uint32_t rreq_id = 0;
    SeqNum origin_seq;
    std::optional<SeqNum> dest_seq;  // absent when the origin has never heard of dest
    std::uint32_t hop_count = 0;     // hops traversed so far
    std::uint32_t ttl = 0;
};

struct RouteReply {
    NodeId dest = 0;   // node the route leads to
    NodeId origin = 0; // node that asked
    SeqNum dest_seq;
    std::uint32_t hop_count = 0;  // hops from the replier to dest, so far
    SimTime lifetime;
};

struct RouteError {
    struct Unreachable {
        NodeId dest = 0;
        SeqNum seq;
        friend bool operator==(const Unreachable&, const Unreachable&) = default;
    };
    std::vector<Unreachable> unreachable;
};

struct DataPacket {
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t flow_id = 0;
    std::uint64_t seq = 0;
    std::uint32_t size_bytes = 0;
    SimTime sent_at;
};

// Application-level acknowledgement for a delivered data packet; carries the
// original send time so the source can sample round-trip time.
struct AckPacket {
    std::uint32_t for_flow = 0;
    std::uint64_t for_seq = 0;
    NodeId src = 0;  // data destination, where the ack originates
    NodeId dst = 0;  // data source, where the ack terminates
    SimTime data_sent_at;
};

using Packet = std::variant<RouteRequest, RouteReply, RouteError, DataPacket, AckPacket>;

inline bool is_data(const Packet& p) { return std::holds_alternative<DataPacket>(p); }

}  // namespace manetsim

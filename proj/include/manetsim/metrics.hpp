#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "manetsim/aodv_node.hpp"
#include "manetsim/floodguard.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

enum class MetricKind : std::uint8_t {
    Sent,        // data packet created at its source
    Received,    // data packet arrived at a node (delivery when node == dst)
    Forwarded,   // data packet transmission completed at a node
    Dropped,
    AckReceived,  // ack arrived back at the data source
    ScreenDecisionMade,
    RouteInstalled,
    RouteInvalidated,
};

enum class PacketKind : std::uint8_t { Data, Ack, Rreq, Rrep, Rerr };

const char* packet_kind_name(PacketKind k);
PacketKind packet_kind_of(const Packet& p);

// Flat trace record, one per observable event. Fields beyond (kind, time,
// node) are meaningful only for the kinds that set them.
struct MetricEvent {
    MetricKind kind = MetricKind::Sent;
    SimTime time;
    NodeId node = 0;

    PacketKind pkt = PacketKind::Data;
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t flow_id = 0;
    std::uint64_t seq = 0;
    std::uint32_t size_bytes = 0;
    SimTime sent_at;

    DropReason reason = DropReason::NoRoute;

    NodeId neighbor = 0;
    ScreenVerdict verdict = ScreenVerdict::Accept;
    std::uint32_t offense = 0;
    SimTime until;

    NodeId route_dest = 0;
};

struct BlacklistEvent {
    SimTime time;
    NodeId observer = 0;
    NodeId neighbor = 0;
    std::uint32_t offense = 0;
    SimTime until;
};

struct UnblockEvent {
    SimTime time;
    NodeId observer = 0;
    NodeId neighbor = 0;
};

struct FlowStats {
    std::uint32_t flow_id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    double sent = 0;
    double delivered = 0;
    double dropped = 0;
    double in_flight = 0;
};

struct PairDelay {
    NodeId src = 0;
    NodeId dst = 0;
    double packets = 0;
    double avg_delay_s = 0;
};

struct RouteValidity {
    NodeId node = 0;
    NodeId dest = 0;
    double seconds = 0;
};

// Eight per-second throughput counters plus the cumulative drop curve, all
// covering ceil(duration) intervals [k, k+1).
struct SeriesSet {
    std::vector<double> generated_packets, generated_bits;
    std::vector<double> sent_packets, sent_bits;
    std::vector<double> forwarded_packets, forwarded_bits;
    std::vector<double> received_packets, received_bits;
    std::vector<double> dropped_cumulative;
};

struct MetricsReport {
    std::string schema = "manetsim.report/1";
    std::string mode;  // "original" or "proposed"
    std::vector<std::uint64_t> seeds;
    std::string scenario_fingerprint;
    double duration_s = 0;

    std::optional<double> avg_end_to_end_delay_s;
    std::optional<double> avg_rtt_s;
    std::optional<double> avg_processing_time_s;
    std::optional<double> avg_nodes_receiving;
    std::optional<double> avg_nodes_forwarding;

    double sent_total = 0;
    double delivered_total = 0;
    double acked_total = 0;
    double processing_samples = 0;
    double intermediate_receive_events = 0;
    double intermediate_forward_events = 0;

    // Every recorded drop, data and control alike; always the sum of the two
    // breakdown maps below.
    double dropped_total = 0;
    std::map<std::string, double> dropped_by_reason;          // data packets, by reason
    std::map<std::string, double> control_dropped_by_reason;  // "<kind>/<reason>"

    SeriesSet series;
    std::vector<PairDelay> pairwise;
    std::vector<RouteValidity> route_validity;
    std::vector<FlowStats> flows;

    std::map<std::string, double> screen_counts;
    std::vector<BlacklistEvent> blacklists;  // per-seed reports only
    std::vector<UnblockEvent> unblocks;
};

// Consumes the kernel's event stream in timestamp order and reduces it to a
// report. With retain_log the raw stream is kept so a test can recount every
// scalar by brute force.
class MetricsCollector {
public:
    explicit MetricsCollector(SimTime duration, bool retain_log = false);

    void record(const MetricEvent& e);
    void note_unblock(SimTime t, NodeId observer, NodeId neighbor);
    void note_in_flight(std::uint32_t flow_id, std::uint64_t count);

    MetricsReport finalize(const ScenarioConfig& cfg);

    const std::vector<MetricEvent>& log() const { return log_; }

private:
    SimTime duration_;
    bool retain_log_;
    std::vector<MetricEvent> log_;
    SimTime last_time_ = SimTime::microseconds(INT64_MIN);

    struct PairAcc {
        std::int64_t delay_us_sum = 0;
        std::uint64_t count = 0;
    };
    std::map<std::pair<NodeId, NodeId>, PairAcc> pairwise_;

    std::int64_t rtt_us_sum_ = 0;
    std::uint64_t acked_ = 0;
    std::int64_t processing_us_sum_ = 0;
    std::uint64_t processing_samples_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t sent_ = 0;
    std::uint64_t recv_intermediate_ = 0;
    std::uint64_t fwd_intermediate_ = 0;

    std::uint64_t dropped_data_ = 0;
    std::map<DropReason, std::uint64_t> dropped_data_by_reason_;
    std::map<std::pair<PacketKind, DropReason>, std::uint64_t> dropped_control_;

    struct IntervalAcc {
        std::uint64_t gen_p = 0, gen_b = 0;
        std::uint64_t sent_p = 0, sent_b = 0;
        std::uint64_t fwd_p = 0, fwd_b = 0;
        std::uint64_t recv_p = 0, recv_b = 0;
        std::uint64_t drop_p = 0;
    };
    std::vector<IntervalAcc> intervals_;

    std::map<std::tuple<NodeId, std::uint32_t, std::uint64_t>, SimTime> pending_processing_;

    struct ValidityAcc {
        std::int64_t total_us = 0;
        std::optional<SimTime> open_since;
    };
    std::map<std::pair<NodeId, NodeId>, ValidityAcc> validity_;

    struct FlowAcc {
        NodeId src = 0, dst = 0;
        std::uint64_t sent = 0, delivered = 0, dropped = 0, in_flight = 0;
    };
    std::map<std::uint32_t, FlowAcc> flows_;

    std::map<ScreenVerdict, std::uint64_t> screen_counts_;
    std::vector<BlacklistEvent> blacklists_;
    std::vector<UnblockEvent> unblocks_;

    IntervalAcc& interval_for(SimTime t);
};

// Arithmetic mean of per-seed reports from the same experiment. Event lists
// (blacklists, unblocks) do not average and stay empty in the result.
MetricsReport mean_report(const std::vector<MetricsReport>& per_seed);

const char* screen_verdict_name(ScreenVerdict v);

}  // namespace manetsim

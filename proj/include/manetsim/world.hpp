#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "manetsim/aodv_node.hpp"
#include "manetsim/event_queue.hpp"
#include "manetsim/floodguard.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/scenario.hpp"

namespace manetsim {

// One entry per RREQ put on the air (origination or rebroadcast). Kept for
// the whole run; tests replay it against the rate-limit invariants.
struct ControlRecord {
    SimTime time;
    NodeId node = 0;
    NodeId origin = 0;
    std::uint32_t rreq_id = 0;
};

// Owns the full simulation state for one run: nodes, radio adjacency,
// per-node transmit queues, screening ledgers, the event queue, and the
// metrics collector. Collector events are produced here, not in the nodes.
class World final : public NodeHooks {
public:
    explicit World(const ScenarioConfig& cfg, bool retain_metric_log = false);
    ~World() override;

    World(const World&) = delete;
    World& operator=(const World&) = delete;

    // Runs the event loop to completion and finalizes the report. May be
    // called once per World.
    MetricsReport run();

    const ScenarioConfig& config() const { return cfg_; }
    const std::vector<NodeId>& neighbors_of(NodeId n) const { return adjacency_.at(n); }
    const std::vector<std::pair<double, double>>& positions() const { return positions_; }
    const AodvNode& node(NodeId n) const { return *nodes_.at(n); }
    const NeighborLedger& ledger(NodeId n) const { return ledgers_.at(n); }
    const std::vector<ControlRecord>& control_log() const { return control_log_; }
    // Retained per-event metric log; empty unless constructed with
    // retain_metric_log = true.
    const std::vector<MetricEvent>& metric_log() const { return collector_.log(); }

    // Removes the radio link between a and b in both directions. Test hook
    // for exercising link-failure handling.
    void sever_link(NodeId a, NodeId b);

    // Schedules sever_link(a, b) at time t during the run. Call before run().
    void schedule_link_down(SimTime t, NodeId a, NodeId b);

    // NodeHooks
    void route_installed(NodeId at, NodeId dest, SimTime now) override;
    void route_invalidated(NodeId at, NodeId dest, SimTime now) override;
    void packet_dropped(NodeId at, const Packet& pkt, DropReason reason, SimTime now) override;

private:
    struct TxItem {
        Packet pkt;
        std::optional<NodeId> unicast_to;  // empty = broadcast
    };
    struct TxQueue {
        std::deque<TxItem> items;  // front is in service while busy
        bool busy = false;
    };

    void build();
    void place_nodes();
    void compute_adjacency();
    void seed_initial_events();

    void handle(const PacketDelivery& ev);
    void handle(const TransmitComplete& ev);
    void handle(const FlowTick& ev);
    void handle(const AttackerTick& ev);
    void handle(const RreqForward& ev);
    void handle(const RetryDiscovery& ev);
    void handle(const RouteSweep& ev);
    void handle(const BufferSweep& ev);
    void handle(const BlacklistSweep& ev);
    void handle(const LinkDown& ev);
    void handle(const SimEnd& ev);

    void deliver_rreq(NodeId to, NodeId from, const RouteRequest& rreq);
    void deliver_data(NodeId to, const DataPacket& pkt);
    void handle_data_result(NodeId at, const DataResult& res, NodeId flow_dst);
    void dispatch_emission(NodeId at, const Emission& em);
    void dispatch_emissions(NodeId at, const std::vector<Emission>& emissions);
    void enqueue_tx(NodeId at, TxItem item);
    bool is_neighbor(NodeId a, NodeId b) const;
    void record_drop(NodeId at, const Packet& pkt, DropReason reason, SimTime now);
    void log_rreq_tx(NodeId at, const RouteRequest& rreq);
    SimTime forward_jitter(NodeId at, const RouteRequest& rreq) const;
    NodeId pick_attack_target(const AttackerProfile& profile);
    double uniform01(std::mt19937_64& eng) const;
    void note_in_flight_packets();

    ScenarioConfig cfg_;  // background flows expanded into cfg_.flows at build
    std::string fingerprint_;  // of the config as declared, before expansion
    SimTime duration_;
    SimTime service_interval_;
    SimTime now_ = SimTime::zero();
    bool ran_ = false;

    std::vector<std::pair<double, double>> positions_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::unique_ptr<AodvNode>> nodes_;
    std::vector<NeighborLedger> ledgers_;
    std::vector<TxQueue> tx_;
    std::vector<std::uint32_t> flow_next_seq_;
    std::uint32_t next_fake_dest_ = 0;
    std::mt19937_64 attack_rng_;

    EventQueue queue_;
    MetricsCollector collector_;
    std::vector<ControlRecord> control_log_;
};

}  // namespace manetsim

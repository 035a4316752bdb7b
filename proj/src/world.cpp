#include "manetsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace manetsim {

namespace {

constexpr SimTime kSweepInterval = SimTime::microseconds(100000);

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

World::World(const ScenarioConfig& cfg, bool retain_metric_log)
    : cfg_(cfg),
      duration_(cfg.sim_duration),
      service_interval_(rate_interval(cfg.queue.service_rate_pps)),
      attack_rng_(splitmix64(cfg.seed ^ 0x61747461636bULL)),
      collector_(cfg.sim_duration, retain_metric_log) {
    cfg_.validate();
    fingerprint_ = cfg_.fingerprint();
    build();
}

World::~World() = default;

void World::build() {
    if (cfg_.background_flows > 0) {
        if (cfg_.node_count < 2) {
            throw std::invalid_argument("background_flows: requires at least two nodes");
        }
        std::mt19937_64 eng(splitmix64(cfg_.seed ^ 0x666c6f7773ULL));
        auto draw = [&](std::uint32_t n) {
            auto idx = static_cast<std::uint32_t>(uniform01(eng) * n);
            return std::min(idx, n - 1);
        };
        for (std::uint32_t i = 0; i < cfg_.background_flows; ++i) {
            TrafficFlow f;
            f.src = draw(cfg_.node_count);
            f.dst = draw(cfg_.node_count - 1);
            if (f.dst >= f.src) ++f.dst;
            f.start = SimTime::zero();
            f.end = duration_;
            cfg_.flows.push_back(f);
        }
    }

    place_nodes();
    compute_adjacency();

    std::vector<bool> malicious(cfg_.node_count, false);
    for (const AttackerProfile& a : cfg_.attackers) malicious[a.node] = true;

    nodes_.reserve(cfg_.node_count);
    for (NodeId i = 0; i < cfg_.node_count; ++i) {
        nodes_.push_back(std::make_unique<AodvNode>(i, cfg_.protocol, malicious[i], this));
    }
    ledgers_.resize(cfg_.node_count);
    tx_.resize(cfg_.node_count);
    flow_next_seq_.assign(cfg_.flows.size(), 0);

    seed_initial_events();
}

void World::place_nodes() {
    if (cfg_.placement.mode == PlacementMode::Explicit) {
        positions_ = cfg_.placement.positions;
        return;
    }
    positions_.resize(cfg_.node_count);
    std::mt19937_64 eng(cfg_.seed);
    for (auto& p : positions_) {
        p.first = uniform01(eng) * cfg_.field.width_m;
        p.second = uniform01(eng) * cfg_.field.height_m;
    }
}

void World::compute_adjacency() {
    adjacency_.assign(cfg_.node_count, {});
    const double range2 = cfg_.radio_range_m * cfg_.radio_range_m;
    for (NodeId i = 0; i < cfg_.node_count; ++i) {
        for (NodeId j = i + 1; j < cfg_.node_count; ++j) {
            const double dx = positions_[i].first - positions_[j].first;
            const double dy = positions_[i].second - positions_[j].second;
            if (dx * dx + dy * dy <= range2) {
                adjacency_[i].push_back(j);
                adjacency_[j].push_back(i);
            }
        }
    }
}

void World::seed_initial_events() {
    // SimEnd first: at equal times insertion order breaks ties, so nothing
    // scheduled for t = duration ever runs.
    queue_.schedule(duration_, SimEnd{});
    queue_.schedule(kSweepInterval, RouteSweep{});
    queue_.schedule(kSweepInterval, BufferSweep{});
    queue_.schedule(kSweepInterval, BlacklistSweep{});
    for (std::uint32_t i = 0; i < cfg_.flows.size(); ++i) {
        queue_.schedule(cfg_.flows[i].start, FlowTick{i});
    }
    for (std::uint32_t i = 0; i < cfg_.attackers.size(); ++i) {
        queue_.schedule(cfg_.attackers[i].start, AttackerTick{i});
    }
}

void World::sever_link(NodeId a, NodeId b) {
    std::erase(adjacency_.at(a), b);
    std::erase(adjacency_.at(b), a);
}

void World::schedule_link_down(SimTime t, NodeId a, NodeId b) {
    queue_.schedule(t, LinkDown{a, b});
}

void World::handle(const LinkDown& ev) { sever_link(ev.a, ev.b); }

bool World::is_neighbor(NodeId a, NodeId b) const {
    const auto& nb = adjacency_[a];
    return std::find(nb.begin(), nb.end(), b) != nb.end();
}

double World::uniform01(std::mt19937_64& eng) const {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

MetricsReport World::run() {
    if (ran_) throw std::logic_error("World::run may only be called once");
    ran_ = true;
    while (!queue_.empty()) {
        EventQueue::Item item = queue_.pop();
        if (std::holds_alternative<SimEnd>(item.ev)) break;
        now_ = item.time;
        std::visit([this](const auto& ev) { handle(ev); }, item.ev);
    }
    now_ = duration_;
    note_in_flight_packets();
    MetricsReport report = collector_.finalize(cfg_);
    report.mode = cfg_.defense.enabled ? "proposed" : "original";
    report.seeds = {cfg_.seed};
    report.scenario_fingerprint = fingerprint_;
    return report;
}

void World::handle(const SimEnd&) {}

void World::handle(const PacketDelivery& ev) {
    const bool carries_rreq = std::holds_alternative<RouteRequest>(ev.pkt);
    if (cfg_.defense.enabled && cfg_.defense.strict_mode && !carries_rreq &&
        ledgers_[ev.to].is_blacklisted(ev.from, now_)) {
        record_drop(ev.to, ev.pkt, DropReason::StrictBlacklist, now_);
        return;
    }

    if (carries_rreq) {
        deliver_rreq(ev.to, ev.from, std::get<RouteRequest>(ev.pkt));
    } else if (const auto* data = std::get_if<DataPacket>(&ev.pkt)) {
        deliver_data(ev.to, *data);
    } else if (const auto* rrep = std::get_if<RouteReply>(&ev.pkt)) {
        RrepResult res = nodes_[ev.to]->process_rrep(*rrep, ev.from, now_);
        dispatch_emissions(ev.to, res.emissions);
    } else if (const auto* ack = std::get_if<AckPacket>(&ev.pkt)) {
        AckResult res = nodes_[ev.to]->handle_ack(*ack, now_);
        if (res.consumed) {
            MetricEvent e;
            e.kind = MetricKind::AckReceived;
            e.time = now_;
            e.node = ev.to;
            e.pkt = PacketKind::Ack;
            e.src = ack->src;
            e.dst = ack->dst;
            e.flow_id = ack->for_flow;
            e.seq = ack->for_seq;
            e.sent_at = ack->data_sent_at;
            collector_.record(e);
        }
        if (res.forward) dispatch_emission(ev.to, *res.forward);
    } else if (const auto* rerr = std::get_if<RouteError>(&ev.pkt)) {
        RerrResult res = nodes_[ev.to]->process_rerr(*rerr, ev.from, now_);
        if (res.broadcast) dispatch_emission(ev.to, *res.broadcast);
    }
}

void World::deliver_rreq(NodeId to, NodeId from, const RouteRequest& rreq) {
    if (cfg_.defense.enabled) {
        ScreenDecision d = ledgers_[to].screen_rreq(from, now_, cfg_.defense);
        MetricEvent e;
        e.kind = MetricKind::ScreenDecisionMade;
        e.time = now_;
        e.node = to;
        e.pkt = PacketKind::Rreq;
        e.src = rreq.origin;
        e.dst = rreq.dest;
        e.seq = rreq.rreq_id;
        e.neighbor = from;
        e.verdict = d.verdict;
        e.offense = d.offense;
        e.until = d.blacklisted_until;
        collector_.record(e);
        if (d.verdict != ScreenVerdict::Accept) return;
    }
    RreqResult res = nodes_[to]->process_rreq(rreq, from, now_);
    if (res.emission) dispatch_emission(to, *res.emission);
}

void World::deliver_data(NodeId to, const DataPacket& pkt) {
    MetricEvent e;
    e.kind = MetricKind::Received;
    e.time = now_;
    e.node = to;
    e.pkt = PacketKind::Data;
    e.src = pkt.src;
    e.dst = pkt.dst;
    e.flow_id = pkt.flow_id;
    e.seq = pkt.seq;
    e.size_bytes = pkt.size_bytes;
    e.sent_at = pkt.sent_at;
    collector_.record(e);

    DataResult res = nodes_[to]->forward_data(pkt, now_);
    handle_data_result(to, res, pkt.dst);
}

void World::handle_data_result(NodeId at, const DataResult& res, NodeId flow_dst) {
    dispatch_emissions(at, res.emissions);
    if (res.retry_at) queue_.schedule(*res.retry_at, RetryDiscovery{at, flow_dst});
}

void World::handle(const TransmitComplete& ev) {
    TxQueue& q = tx_[ev.node];
    TxItem item = std::move(q.items.front());
    q.items.pop_front();

    bool handed_off = false;
    if (item.unicast_to) {
        if (is_neighbor(ev.node, *item.unicast_to)) {
            queue_.schedule(now_ + cfg_.queue.per_hop_latency,
                            PacketDelivery{*item.unicast_to, ev.node, item.pkt});
            handed_off = true;
        }
    } else {
        for (NodeId nb : adjacency_[ev.node]) {
            queue_.schedule(now_ + cfg_.queue.per_hop_latency, PacketDelivery{nb, ev.node, item.pkt});
        }
        handed_off = true;
    }

    if (handed_off) {
        if (const auto* data = std::get_if<DataPacket>(&item.pkt)) {
            MetricEvent e;
            e.kind = MetricKind::Forwarded;
            e.time = now_;
            e.node = ev.node;
            e.pkt = PacketKind::Data;
            e.src = data->src;
            e.dst = data->dst;
            e.flow_id = data->flow_id;
            e.seq = data->seq;
            e.size_bytes = data->size_bytes;
            e.sent_at = data->sent_at;
            collector_.record(e);
        }
    } else {
        // The target drifted out of the neighbor set while the packet sat in
        // the queue. Drop, then advertise the breakage.
        record_drop(ev.node, item.pkt, DropReason::LinkBroken, now_);
        RerrResult res = nodes_[ev.node]->emit_and_process_rerr(*item.unicast_to, now_);
        if (res.broadcast) dispatch_emission(ev.node, *res.broadcast);
    }

    if (!q.items.empty()) {
        queue_.schedule(now_ + service_interval_, TransmitComplete{ev.node});
    } else {
        q.busy = false;
    }
}

void World::handle(const FlowTick& ev) {
    const TrafficFlow& f = cfg_.flows[ev.flow_idx];
    if (now_ >= f.end) return;

    DataPacket pkt;
    pkt.src = f.src;
    pkt.dst = f.dst;
    pkt.flow_id = ev.flow_idx;
    pkt.seq = flow_next_seq_[ev.flow_idx]++;
    pkt.size_bytes = f.packet_size_bytes;
    pkt.sent_at = now_;

    MetricEvent e;
    e.kind = MetricKind::Sent;
    e.time = now_;
    e.node = f.src;
    e.pkt = PacketKind::Data;
    e.src = f.src;
    e.dst = f.dst;
    e.flow_id = ev.flow_idx;
    e.seq = pkt.seq;
    e.size_bytes = pkt.size_bytes;
    e.sent_at = now_;
    collector_.record(e);

    DataResult res = nodes_[f.src]->forward_data(pkt, now_);
    handle_data_result(f.src, res, f.dst);

    queue_.schedule(now_ + rate_interval(f.rate_pps), FlowTick{ev.flow_idx});
}

void World::handle(const AttackerTick& ev) {
    const AttackerProfile& a = cfg_.attackers[ev.attacker_idx];
    if (now_ >= a.end) return;
    NodeId dest = pick_attack_target(a);
    OriginateResult res = nodes_[a.node]->originate_rreq(dest, now_);
    if (res.rreq) dispatch_emission(a.node, *res.rreq);
    queue_.schedule(now_ + rate_interval(a.flood_rate_pps), AttackerTick{ev.attacker_idx});
}

void World::handle(const RreqForward& ev) {
    if (nodes_[ev.node]->permit_rreq_forward(now_)) {
        log_rreq_tx(ev.node, ev.rreq);
        enqueue_tx(ev.node, TxItem{Packet{ev.rreq}, std::nullopt});
    } else {
        record_drop(ev.node, Packet{ev.rreq}, DropReason::SelfRateLimit, now_);
    }
}

void World::handle(const RetryDiscovery& ev) {
    OriginateResult res = nodes_[ev.node]->retry_discovery(ev.dest, now_);
    if (res.rreq) {
        dispatch_emission(ev.node, *res.rreq);
    } else if (res.retry_at) {
        queue_.schedule(*res.retry_at, RetryDiscovery{ev.node, ev.dest});
    }
}

void World::handle(const RouteSweep&) {
    for (auto& n : nodes_) {
        n->expire_routes(now_);
        n->sweep_rreq_seen(now_);
    }
    queue_.schedule(now_ + kSweepInterval, RouteSweep{});
}

void World::handle(const BufferSweep&) {
    for (auto& n : nodes_) n->sweep_buffers(now_);
    queue_.schedule(now_ + kSweepInterval, BufferSweep{});
}

void World::handle(const BlacklistSweep&) {
    for (NodeId i = 0; i < ledgers_.size(); ++i) {
        for (NodeId nb : ledgers_[i].tick_blacklists(now_)) {
            collector_.note_unblock(now_, i, nb);
        }
        ledgers_[i].prune_ledger(now_, cfg_.defense);
    }
    queue_.schedule(now_ + kSweepInterval, BlacklistSweep{});
}

void World::dispatch_emission(NodeId at, const Emission& em) {
    if (em.jittered_rreq_forward) {
        const RouteRequest& fwd = std::get<RouteRequest>(em.pkt);
        queue_.schedule(now_ + forward_jitter(at, fwd), RreqForward{at, fwd});
        return;
    }
    if (const auto* rreq = std::get_if<RouteRequest>(&em.pkt)) log_rreq_tx(at, *rreq);
    enqueue_tx(at, TxItem{em.pkt, em.unicast_to});
}

void World::dispatch_emissions(NodeId at, const std::vector<Emission>& emissions) {
    for (const Emission& em : emissions) dispatch_emission(at, em);
}

void World::enqueue_tx(NodeId at, TxItem item) {
    TxQueue& q = tx_[at];
    if (q.items.size() >= cfg_.queue.capacity_packets) {
        record_drop(at, item.pkt, DropReason::MacQueueOverflow, now_);
        return;
    }
    q.items.push_back(std::move(item));
    if (!q.busy) {
        q.busy = true;
        queue_.schedule(now_ + service_interval_, TransmitComplete{at});
    }
}

void World::record_drop(NodeId at, const Packet& pkt, DropReason reason, SimTime now) {
    MetricEvent e;
    e.kind = MetricKind::Dropped;
    e.time = now;
    e.node = at;
    e.pkt = packet_kind_of(pkt);
    e.reason = reason;
    if (const auto* data = std::get_if<DataPacket>(&pkt)) {
        e.src = data->src;
        e.dst = data->dst;
        e.flow_id = data->flow_id;
        e.seq = data->seq;
        e.size_bytes = data->size_bytes;
        e.sent_at = data->sent_at;
    }
    collector_.record(e);
}

void World::log_rreq_tx(NodeId at, const RouteRequest& rreq) {
    control_log_.push_back(ControlRecord{now_, at, rreq.origin, rreq.rreq_id});
}

SimTime World::forward_jitter(NodeId at, const RouteRequest& rreq) const {
    const std::int64_t max_us = cfg_.protocol.rreq_forward_jitter.us;
    if (max_us <= 0) return SimTime::zero();
    std::uint64_t h = cfg_.seed;
    h = splitmix64(h ^ at);
    h = splitmix64(h ^ rreq.origin);
    h = splitmix64(h ^ rreq.rreq_id);
    return SimTime::microseconds(
        static_cast<std::int64_t>(h % static_cast<std::uint64_t>(max_us + 1)));
}

NodeId World::pick_attack_target(const AttackerProfile& profile) {
    if (profile.target_mode == AttackTargetMode::NonexistentDestinations || cfg_.node_count < 2) {
        return cfg_.node_count + next_fake_dest_++;
    }
    auto idx = static_cast<NodeId>(uniform01(attack_rng_) * (cfg_.node_count - 1));
    idx = std::min(idx, cfg_.node_count - 2);
    if (idx >= profile.node) ++idx;
    return idx;
}

void World::note_in_flight_packets() {
    std::map<std::uint32_t, std::uint64_t> counts;
    for (const auto& n : nodes_) {
        for (const auto& [flow, cnt] : n->buffered_by_flow()) counts[flow] += cnt;
    }
    for (const TxQueue& q : tx_) {
        for (const TxItem& item : q.items) {
            if (const auto* data = std::get_if<DataPacket>(&item.pkt)) counts[data->flow_id] += 1;
        }
    }
    for (const EventQueue::Item& item : queue_.pending()) {
        if (const auto* pd = std::get_if<PacketDelivery>(&item.ev)) {
            if (const auto* data = std::get_if<DataPacket>(&pd->pkt)) counts[data->flow_id] += 1;
        }
    }
    for (const auto& [flow, cnt] : counts) collector_.note_in_flight(flow, cnt);
}

void World::route_installed(NodeId at, NodeId dest, SimTime now) {
    MetricEvent e;
    e.kind = MetricKind::RouteInstalled;
    e.time = now;
    e.node = at;
    e.route_dest = dest;
    collector_.record(e);
}

void World::route_invalidated(NodeId at, NodeId dest, SimTime now) {
    MetricEvent e;
    e.kind = MetricKind::RouteInvalidated;
    e.time = now;
    e.node = at;
    e.route_dest = dest;
    collector_.record(e);
}

void World::packet_dropped(NodeId at, const Packet& pkt, DropReason reason, SimTime now) {
    record_drop(at, pkt, reason, now);
}

}  // namespace manetsim

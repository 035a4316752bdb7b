#include "manetsim/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace manetsim {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

std::string at_index(const char* list, std::size_t i, const char* field) {
    std::ostringstream os;
    os << list << "[" << i << "]." << field;
    return os.str();
}

}  // namespace

void ScenarioConfig::validate() const {
    require(node_count > 0, "node_count must be positive");
    require(field.width_m > 0 && field.height_m > 0, "field dimensions must be positive");
    require(radio_range_m > 0, "radio_range_m must be positive");
    require(sim_duration > SimTime::zero(), "sim_duration_s must be positive");
    require(queue.service_rate_pps > 0, "queue.service_rate_pps must be positive");
    require(queue.capacity_packets > 0, "queue.capacity_packets must be positive");
    require(queue.per_hop_latency >= SimTime::zero(), "queue.per_hop_latency_s must not be negative");
    require(protocol.route_lifetime > SimTime::zero(), "protocol.route_lifetime_s must be positive");
    require(protocol.dedup_horizon > SimTime::zero(), "protocol.dedup_horizon_s must be positive");
    require(protocol.buffer_capacity > 0, "protocol.buffer_capacity_packets must be positive");
    require(protocol.buffer_timeout > SimTime::zero(), "protocol.buffer_timeout_s must be positive");
    require(protocol.self_rreq_limit > 0, "protocol.self_rreq_limit_per_s must be positive");
    require(protocol.rreq_ttl > 0, "protocol.rreq_ttl must be positive");
    require(protocol.discovery_retry_wait > SimTime::zero(), "protocol.discovery_retry_wait_s must be positive");
    require(protocol.rreq_forward_jitter >= SimTime::zero(), "protocol.rreq_forward_jitter_s must not be negative");
    defense.validate();

    for (std::size_t i = 0; i < flows.size(); ++i) {
        const TrafficFlow& f = flows[i];
        require(f.src < node_count, at_index("flows", i, "src is not a node id"));
        require(f.dst < node_count, at_index("flows", i, "dst is not a node id"));
        require(f.src != f.dst, at_index("flows", i, "src and dst must differ"));
        require(f.start >= SimTime::zero(), at_index("flows", i, "start_s must not be negative"));
        require(f.start < f.end, at_index("flows", i, "start_s must precede end_s"));
        require(f.end <= sim_duration, at_index("flows", i, "end_s exceeds sim_duration_s"));
        require(f.rate_pps > 0, at_index("flows", i, "rate_pps must be positive"));
        require(f.packet_size_bytes > 0, at_index("flows", i, "packet_size_bytes must be positive"));
    }
    for (std::size_t i = 0; i < attackers.size(); ++i) {
        const AttackerProfile& a = attackers[i];
        require(a.node < node_count, at_index("attackers", i, "node is not a node id"));
        require(a.flood_rate_pps > 0, at_index("attackers", i, "flood_rate_pps must be positive"));
        require(a.start >= SimTime::zero(), at_index("attackers", i, "start_s must not be negative"));
        require(a.start < a.end, at_index("attackers", i, "start_s must precede end_s"));
        require(a.end <= sim_duration, at_index("attackers", i, "end_s exceeds sim_duration_s"));
        for (std::size_t j = 0; j < i; ++j) {
            require(attackers[j].node != a.node, at_index("attackers", i, "node appears twice"));
        }
    }
    if (placement.mode == PlacementMode::Explicit) {
        require(placement.positions.size() == node_count,
                "placement.positions must list exactly node_count coordinates");
        for (std::size_t i = 0; i < placement.positions.size(); ++i) {
            auto [x, y] = placement.positions[i];
            require(x >= 0 && x <= field.width_m && y >= 0 && y <= field.height_m,
                    at_index("placement.positions", i, "outside the field"));
        }
    } else {
        require(placement.positions.empty(),
                "placement.positions is only valid with placement.mode = explicit");
    }
}

namespace {

// FNV-1a over a canonical rendering; stable across runs and platforms.
struct Fnv {
    std::uint64_t h = 1469598103934665603ULL;
    void feed(const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    }
    void feed_num(double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        feed(os.str());
    }
    void feed_num(std::int64_t v) { feed(std::to_string(v)); }
    void feed_num(std::uint64_t v) { feed(std::to_string(v)); }
};

}  // namespace

std::string ScenarioConfig::fingerprint() const {
    Fnv f;
    f.feed_num(field.width_m);
    f.feed_num(field.height_m);
    f.feed_num(std::uint64_t{node_count});
    f.feed_num(radio_range_m);
    f.feed_num(sim_duration.us);
    f.feed_num(std::uint64_t{background_flows});
    f.feed_num(std::uint64_t{defense.accept_limit});
    f.feed_num(std::uint64_t{defense.blacklist_limit});
    f.feed_num(defense.base_blacklist_timeout.us);
    f.feed_num(queue.service_rate_pps);
    f.feed_num(std::uint64_t{queue.capacity_packets});
    f.feed_num(queue.per_hop_latency.us);
    f.feed_num(protocol.route_lifetime.us);
    f.feed_num(protocol.dedup_horizon.us);
    f.feed_num(std::uint64_t{protocol.buffer_capacity});
    f.feed_num(protocol.buffer_timeout.us);
    f.feed_num(std::uint64_t{protocol.self_rreq_limit});
    f.feed_num(std::uint64_t{protocol.rreq_ttl});
    f.feed_num(protocol.discovery_retry_wait.us);
    f.feed_num(protocol.rreq_forward_jitter.us);
    for (const TrafficFlow& fl : flows) {
        f.feed_num(std::uint64_t{fl.src});
        f.feed_num(std::uint64_t{fl.dst});
        f.feed_num(fl.start.us);
        f.feed_num(fl.end.us);
        f.feed_num(fl.rate_pps);
        f.feed_num(std::uint64_t{fl.packet_size_bytes});
    }
    for (const AttackerProfile& a : attackers) {
        f.feed_num(std::uint64_t{a.node});
        f.feed_num(a.flood_rate_pps);
        f.feed_num(a.start.us);
        f.feed_num(a.end.us);
        f.feed_num(std::uint64_t{static_cast<unsigned>(a.target_mode)});
    }
    f.feed_num(std::uint64_t{static_cast<unsigned>(placement.mode)});
    for (auto [x, y] : placement.positions) {
        f.feed_num(x);
        f.feed_num(y);
    }
    std::ostringstream os;
    os << std::hex << f.h;
    return os.str();
}

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    cfg.flows = {
        {48, 20, SimTime::seconds(11.0), SimTime::seconds(16.0), 4.0, 512},
        {18, 27, SimTime::seconds(5.0), SimTime::seconds(12.0), 4.0, 512},
        {31, 66, SimTime::seconds(6.0), SimTime::seconds(11.0), 4.0, 512},
        {45, 16, SimTime::seconds(9.0), SimTime::seconds(12.0), 4.0, 512},
    };
    cfg.attackers = {AttackerProfile{}};
    return cfg;
}

}  // namespace manetsim

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "manetsim/aodv_node.hpp"
#include "manetsim/floodguard.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct FieldSize {
    double width_m = 2000.0;
    double height_m = 2000.0;
};

struct TrafficFlow {
    NodeId src = 0;
    NodeId dst = 0;
    SimTime start;
    SimTime end;
    double rate_pps = 4.0;
    std::uint32_t packet_size_bytes = 512;
};

enum class AttackTargetMode : std::uint8_t {
    NonexistentDestinations,  // addresses outside the node id space; no RREP can exist
    RandomExisting,
};

struct AttackerProfile {
    NodeId node = 0;
    double flood_rate_pps = 10.0;
    SimTime start = SimTime::seconds(1.0);
    SimTime end = SimTime::seconds(17.0);
    AttackTargetMode target_mode = AttackTargetMode::NonexistentDestinations;
};

// Deterministic single-server transmit queue standing in for the MAC layer.
struct QueueParams {
    double service_rate_pps = 200.0;
    std::uint32_t capacity_packets = 50;
    SimTime per_hop_latency = SimTime::seconds(0.002);
};

enum class PlacementMode : std::uint8_t { SeededUniform, Explicit };

struct Placement {
    PlacementMode mode = PlacementMode::SeededUniform;
    std::vector<std::pair<double, double>> positions;  // explicit mode only
};

struct ScenarioConfig {
    FieldSize field;
    std::uint32_t node_count = 69;
    double radio_range_m = 250.0;
    SimTime sim_duration = SimTime::seconds(17.2);
    std::uint64_t seed = 1;
    std::uint32_t background_flows = 0;
    DefenseParams defense;
    QueueParams queue;
    AodvConfig protocol;
    std::vector<TrafficFlow> flows;
    std::vector<AttackerProfile> attackers;
    Placement placement;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    // Stable identity of everything that shapes a run except the defense
    // on/off/strict toggle and the seed; lets compare() reject reports that
    // came from different experiments.
    std::string fingerprint() const;
};

// The default scenario: 69 nodes uniform in a 2000 m square, 250 m radio
// range, 17.2 s horizon, four CBR flows, and node 0 flooding route requests
// at 10/s from t=1 s to t=17 s toward destinations that do not exist.
ScenarioConfig default_scenario();

}  // namespace manetsim

#include "manetsim/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace manetsim {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& msg) {
    throw std::runtime_error(source + ": " + where + ": " + msg);
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

// Every key must be one we know. Typos surface here instead of silently
// running the default value.
void check_keys(const json& j, const std::string& source, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end()) {
            fail(source, where.empty() ? "top level" : where, "unknown key \"" + item.key() + "\"");
        }
    }
}

const json* field_of(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& source, const std::string& where) {
    if (!j.is_number()) fail(source, where, "expected a number");
    return j.get<double>();
}

bool as_bool(const json& j, const std::string& source, const std::string& where) {
    if (!j.is_boolean()) fail(source, where, "expected true or false");
    return j.get<bool>();
}

std::uint64_t as_uint(const json& j, const std::string& source, const std::string& where,
                      std::uint64_t max) {
    // The parser stores any non-negative integer literal as unsigned.
    if (!j.is_number_unsigned()) fail(source, where, "expected a non-negative integer");
    auto v = j.get<std::uint64_t>();
    if (v > max) fail(source, where, "value out of range");
    return v;
}

std::string as_string(const json& j, const std::string& source, const std::string& where) {
    if (!j.is_string()) fail(source, where, "expected a string");
    return j.get<std::string>();
}

SimTime as_seconds(const json& j, const std::string& source, const std::string& where) {
    return SimTime::seconds(as_number(j, source, where));
}

void read_defense(const json& j, const std::string& source, const std::string& where,
                  DefenseParams& out) {
    if (!j.is_object()) fail(source, where, "expected an object");
    check_keys(j, source, where,
               {"enabled", "accept_limit_per_s", "blacklist_limit_per_s",
                "base_blacklist_timeout_s", "strict_mode"});
    if (const json* f = field_of(j, "enabled")) out.enabled = as_bool(*f, source, join_path(where, "enabled"));
    if (const json* f = field_of(j, "accept_limit_per_s")) {
        out.accept_limit = static_cast<std::uint32_t>(
            as_uint(*f, source, join_path(where, "accept_limit_per_s"), UINT32_MAX));
    }
    if (const json* f = field_of(j, "blacklist_limit_per_s")) {
        out.blacklist_limit = static_cast<std::uint32_t>(
            as_uint(*f, source, join_path(where, "blacklist_limit_per_s"), UINT32_MAX));
    }
    if (const json* f = field_of(j, "base_blacklist_timeout_s")) {
        out.base_blacklist_timeout = as_seconds(*f, source, join_path(where, "base_blacklist_timeout_s"));
    }
    if (const json* f = field_of(j, "strict_mode")) {
        out.strict_mode = as_bool(*f, source, join_path(where, "strict_mode"));
    }
}

void read_queue(const json& j, const std::string& source, const std::string& where,
                QueueParams& out) {
    if (!j.is_object()) fail(source, where, "expected an object");
    check_keys(j, source, where, {"service_rate_pps", "capacity_packets", "per_hop_latency_s"});
    if (const json* f = field_of(j, "service_rate_pps")) {
        out.service_rate_pps = as_number(*f, source, join_path(where, "service_rate_pps"));
    }
    if (const json* f = field_of(j, "capacity_packets")) {
        out.capacity_packets = static_cast<std::uint32_t>(
            as_uint(*f, source, join_path(where, "capacity_packets"), UINT32_MAX));
    }
    if (const json* f = field_of(j, "per_hop_latency_s")) {
        out.per_hop_latency = as_seconds(*f, source, join_path(where, "per_hop_latency_s"));
    }
}

void read_protocol(const json& j, const std::string& source, const std::string& where,
                   AodvConfig& out) {
    if (!j.is_object()) fail(source, where, "expected an object");
    check_keys(j, source, where,
               {"route_lifetime_s", "dedup_horizon_s", "buffer_capacity_packets",
                "buffer_timeout_s", "self_rreq_limit_per_s", "rreq_ttl",
                "discovery_retry_wait_s", "rreq_forward_jitter_s"});
    if (const json* f = field_of(j, "route_lifetime_s")) {
        out.route_lifetime = as_seconds(*f, source, join_path(where, "route_lifetime_s"));
    }
    if (const json* f = field_of(j, "dedup_horizon_s")) {
        out.dedup_horizon = as_seconds(*f, source, join_path(where, "dedup_horizon_s"));
    }
    if (const json* f = field_of(j, "buffer_capacity_packets")) {
        out.buffer_capacity = static_cast<std::uint32_t>(
            as_uint(*f, source, join_path(where, "buffer_capacity_packets"), UINT32_MAX));
    }
    if (const json* f = field_of(j, "buffer_timeout_s")) {
        out.buffer_timeout = as_seconds(*f, source, join_path(where, "buffer_timeout_s"));
    }
    if (const json* f = field_of(j, "self_rreq_limit_per_s")) {
        out.self_rreq_limit = static_cast<std::uint32_t>(
            as_uint(*f, source, join_path(where, "self_rreq_limit_per_s"), UINT32_MAX));
    }
    if (const json* f = field_of(j, "rreq_ttl")) {
        out.rreq_ttl = static_cast<std::uint32_t>(
            as_uint(*f, source, join_path(where, "rreq_ttl"), UINT32_MAX));
    }
    if (const json* f = field_of(j, "discovery_retry_wait_s")) {
        out.discovery_retry_wait = as_seconds(*f, source, join_path(where, "discovery_retry_wait_s"));
    }
    if (const json* f = field_of(j, "rreq_forward_jitter_s")) {
        out.rreq_forward_jitter = as_seconds(*f, source, join_path(where, "rreq_forward_jitter_s"));
    }
}

std::vector<TrafficFlow> read_flows(const json& j, const std::string& source,
                                    const std::string& where) {
    if (!j.is_array()) fail(source, where, "expected an array");
    std::vector<TrafficFlow> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::ostringstream w;
        w << where << "[" << i << "]";
        const json& e = j[i];
        if (!e.is_object()) fail(source, w.str(), "expected an object");
        check_keys(e, source, w.str(),
                   {"src", "dst", "start_s", "end_s", "rate_pps", "packet_size_bytes"});
        TrafficFlow f;
        const json* src = field_of(e, "src");
        const json* dst = field_of(e, "dst");
        const json* start = field_of(e, "start_s");
        const json* end = field_of(e, "end_s");
        if (!src || !dst || !start || !end) {
            fail(source, w.str(), "src, dst, start_s, and end_s are required");
        }
        f.src = static_cast<NodeId>(as_uint(*src, source, join_path(w.str(), "src"), UINT32_MAX));
        f.dst = static_cast<NodeId>(as_uint(*dst, source, join_path(w.str(), "dst"), UINT32_MAX));
        f.start = as_seconds(*start, source, join_path(w.str(), "start_s"));
        f.end = as_seconds(*end, source, join_path(w.str(), "end_s"));
        if (const json* v = field_of(e, "rate_pps")) {
            f.rate_pps = as_number(*v, source, join_path(w.str(), "rate_pps"));
        }
        if (const json* v = field_of(e, "packet_size_bytes")) {
            f.packet_size_bytes = static_cast<std::uint32_t>(
                as_uint(*v, source, join_path(w.str(), "packet_size_bytes"), UINT32_MAX));
        }
        out.push_back(f);
    }
    return out;
}

std::vector<AttackerProfile> read_attackers(const json& j, const std::string& source,
                                            const std::string& where) {
    if (!j.is_array()) fail(source, where, "expected an array");
    std::vector<AttackerProfile> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::ostringstream w;
        w << where << "[" << i << "]";
        const json& e = j[i];
        if (!e.is_object()) fail(source, w.str(), "expected an object");
        check_keys(e, source, w.str(),
                   {"node", "flood_rate_pps", "start_s", "end_s", "target_mode"});
        AttackerProfile a;
        const json* node = field_of(e, "node");
        if (!node) fail(source, w.str(), "node is required");
        a.node = static_cast<NodeId>(as_uint(*node, source, join_path(w.str(), "node"), UINT32_MAX));
        if (const json* v = field_of(e, "flood_rate_pps")) {
            a.flood_rate_pps = as_number(*v, source, join_path(w.str(), "flood_rate_pps"));
        }
        if (const json* v = field_of(e, "start_s")) {
            a.start = as_seconds(*v, source, join_path(w.str(), "start_s"));
        }
        if (const json* v = field_of(e, "end_s")) {
            a.end = as_seconds(*v, source, join_path(w.str(), "end_s"));
        }
        if (const json* v = field_of(e, "target_mode")) {
            std::string mode = as_string(*v, source, join_path(w.str(), "target_mode"));
            if (mode == "nonexistent_destinations") {
                a.target_mode = AttackTargetMode::NonexistentDestinations;
            } else if (mode == "random_existing") {
                a.target_mode = AttackTargetMode::RandomExisting;
            } else {
                fail(source, join_path(w.str(), "target_mode"),
                     "expected \"nonexistent_destinations\" or \"random_existing\"");
            }
        }
        out.push_back(a);
    }
    return out;
}

void read_placement(const json& j, const std::string& source, const std::string& where,
                    Placement& out) {
    if (!j.is_object()) fail(source, where, "expected an object");
    check_keys(j, source, where, {"mode", "positions"});
    if (const json* f = field_of(j, "mode")) {
        std::string mode = as_string(*f, source, join_path(where, "mode"));
        if (mode == "seeded_uniform") {
            out.mode = PlacementMode::SeededUniform;
        } else if (mode == "explicit") {
            out.mode = PlacementMode::Explicit;
        } else {
            fail(source, join_path(where, "mode"), "expected \"seeded_uniform\" or \"explicit\"");
        }
    }
    if (const json* f = field_of(j, "positions")) {
        if (!f->is_array()) fail(source, join_path(where, "positions"), "expected an array");
        out.positions.clear();
        for (std::size_t i = 0; i < f->size(); ++i) {
            std::ostringstream w;
            w << where << ".positions[" << i << "]";
            const json& p = (*f)[i];
            if (!p.is_array() || p.size() != 2) fail(source, w.str(), "expected [x, y]");
            out.positions.emplace_back(as_number(p[0], source, w.str() + "[0]"),
                                       as_number(p[1], source, w.str() + "[1]"));
        }
    }
}

bool whitespace_only(const std::string& text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text, const std::string& source_name) {
    ScenarioConfig cfg = default_scenario();
    if (whitespace_only(text)) {
        cfg.validate();
        return cfg;
    }

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << "line " << line_of_byte(text, e.byte) << ": malformed JSON (" << e.what() << ")";
        fail(source_name, os.str(), "cannot parse");
    }
    if (!j.is_object()) fail(source_name, "top level", "expected a JSON object");

    check_keys(j, source_name, "",
               {"field", "node_count", "radio_range_m", "sim_duration_s", "seed",
                "background_flows", "defense", "queue", "protocol", "flows", "attackers",
                "placement"});

    if (const json* f = field_of(j, "field")) {
        if (!f->is_object()) fail(source_name, "field", "expected an object");
        check_keys(*f, source_name, "field", {"width_m", "height_m"});
        if (const json* v = field_of(*f, "width_m")) {
            cfg.field.width_m = as_number(*v, source_name, "field.width_m");
        }
        if (const json* v = field_of(*f, "height_m")) {
            cfg.field.height_m = as_number(*v, source_name, "field.height_m");
        }
    }
    if (const json* f = field_of(j, "node_count")) {
        cfg.node_count = static_cast<std::uint32_t>(
            as_uint(*f, source_name, "node_count", UINT32_MAX));
    }
    if (const json* f = field_of(j, "radio_range_m")) {
        cfg.radio_range_m = as_number(*f, source_name, "radio_range_m");
    }
    if (const json* f = field_of(j, "sim_duration_s")) {
        cfg.sim_duration = as_seconds(*f, source_name, "sim_duration_s");
    }
    if (const json* f = field_of(j, "seed")) {
        cfg.seed = as_uint(*f, source_name, "seed", UINT64_MAX);
    }
    if (const json* f = field_of(j, "background_flows")) {
        cfg.background_flows = static_cast<std::uint32_t>(
            as_uint(*f, source_name, "background_flows", UINT32_MAX));
    }
    if (const json* f = field_of(j, "defense")) read_defense(*f, source_name, "defense", cfg.defense);
    if (const json* f = field_of(j, "queue")) read_queue(*f, source_name, "queue", cfg.queue);
    if (const json* f = field_of(j, "protocol")) {
        read_protocol(*f, source_name, "protocol", cfg.protocol);
    }
    if (const json* f = field_of(j, "flows")) cfg.flows = read_flows(*f, source_name, "flows");
    if (const json* f = field_of(j, "attackers")) {
        cfg.attackers = read_attackers(*f, source_name, "attackers");
    }
    if (const json* f = field_of(j, "placement")) {
        read_placement(*f, source_name, "placement", cfg.placement);
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(source_name + ": " + e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str(), path);
}

std::string normalized_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["field"] = {{"width_m", cfg.field.width_m}, {"height_m", cfg.field.height_m}};
    j["node_count"] = cfg.node_count;
    j["radio_range_m"] = cfg.radio_range_m;
    j["sim_duration_s"] = cfg.sim_duration.to_seconds();
    j["seed"] = cfg.seed;
    j["background_flows"] = cfg.background_flows;
    j["defense"] = {{"enabled", cfg.defense.enabled},
                    {"accept_limit_per_s", cfg.defense.accept_limit},
                    {"blacklist_limit_per_s", cfg.defense.blacklist_limit},
                    {"base_blacklist_timeout_s", cfg.defense.base_blacklist_timeout.to_seconds()},
                    {"strict_mode", cfg.defense.strict_mode}};
    j["queue"] = {{"service_rate_pps", cfg.queue.service_rate_pps},
                  {"capacity_packets", cfg.queue.capacity_packets},
                  {"per_hop_latency_s", cfg.queue.per_hop_latency.to_seconds()}};
    j["protocol"] = {{"route_lifetime_s", cfg.protocol.route_lifetime.to_seconds()},
                     {"dedup_horizon_s", cfg.protocol.dedup_horizon.to_seconds()},
                     {"buffer_capacity_packets", cfg.protocol.buffer_capacity},
                     {"buffer_timeout_s", cfg.protocol.buffer_timeout.to_seconds()},
                     {"self_rreq_limit_per_s", cfg.protocol.self_rreq_limit},
                     {"rreq_ttl", cfg.protocol.rreq_ttl},
                     {"discovery_retry_wait_s", cfg.protocol.discovery_retry_wait.to_seconds()},
                     {"rreq_forward_jitter_s", cfg.protocol.rreq_forward_jitter.to_seconds()}};
    j["flows"] = ordered_json::array();
    for (const TrafficFlow& f : cfg.flows) {
        j["flows"].push_back({{"src", f.src},
                              {"dst", f.dst},
                              {"start_s", f.start.to_seconds()},
                              {"end_s", f.end.to_seconds()},
                              {"rate_pps", f.rate_pps},
                              {"packet_size_bytes", f.packet_size_bytes}});
    }
    j["attackers"] = ordered_json::array();
    for (const AttackerProfile& a : cfg.attackers) {
        j["attackers"].push_back(
            {{"node", a.node},
             {"flood_rate_pps", a.flood_rate_pps},
             {"start_s", a.start.to_seconds()},
             {"end_s", a.end.to_seconds()},
             {"target_mode", a.target_mode == AttackTargetMode::NonexistentDestinations
                                 ? "nonexistent_destinations"
                                 : "random_existing"}});
    }
    j["placement"] = ordered_json::object();
    j["placement"]["mode"] =
        cfg.placement.mode == PlacementMode::SeededUniform ? "seeded_uniform" : "explicit";
    j["placement"]["positions"] = ordered_json::array();
    for (auto [x, y] : cfg.placement.positions) {
        j["placement"]["positions"].push_back({x, y});
    }
    return j.dump(2) + "\n";
}

}  // namespace manetsim

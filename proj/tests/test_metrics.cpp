#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "manetsim/metrics.hpp"
#include "manetsim/report_io.hpp"
#include "manetsim/scenario.hpp"

using namespace manetsim;

namespace {

SimTime at(double seconds) { return SimTime::seconds(seconds); }

ScenarioConfig cfg_with_flows(std::vector<TrafficFlow> flows) {
    ScenarioConfig cfg;
    cfg.node_count = 10;
    cfg.flows = std::move(flows);
    return cfg;
}

MetricEvent ev_sent(double t, NodeId src, NodeId dst, std::uint32_t flow, std::uint64_t seq) {
    MetricEvent e;
    e.kind = MetricKind::Sent;
    e.time = at(t);
    e.node = src;
    e.pkt = PacketKind::Data;
    e.src = src;
    e.dst = dst;
    e.flow_id = flow;
    e.seq = seq;
    e.size_bytes = 512;
    e.sent_at = at(t);
    return e;
}

MetricEvent ev_received(double t, NodeId node, NodeId src, NodeId dst, std::uint32_t flow,
                        std::uint64_t seq, double sent_at) {
    MetricEvent e;
    e.kind = MetricKind::Received;
    e.time = at(t);
    e.node = node;
    e.pkt = PacketKind::Data;
    e.src = src;
    e.dst = dst;
    e.flow_id = flow;
    e.seq = seq;
    e.size_bytes = 512;
    e.sent_at = at(sent_at);
    return e;
}

MetricEvent ev_forwarded(double t, NodeId node, NodeId src, NodeId dst, std::uint32_t flow,
                         std::uint64_t seq) {
    MetricEvent e;
    e.kind = MetricKind::Forwarded;
    e.time = at(t);
    e.node = node;
    e.pkt = PacketKind::Data;
    e.src = src;
    e.dst = dst;
    e.flow_id = flow;
    e.seq = seq;
    e.size_bytes = 512;
    return e;
}

MetricEvent ev_ack(double t, NodeId node, std::uint32_t flow, std::uint64_t seq, double sent_at) {
    MetricEvent e;
    e.kind = MetricKind::AckReceived;
    e.time = at(t);
    e.node = node;
    e.pkt = PacketKind::Ack;
    e.flow_id = flow;
    e.seq = seq;
    e.sent_at = at(sent_at);
    return e;
}

MetricEvent ev_dropped(double t, NodeId node, PacketKind pkt, DropReason reason,
                       std::uint32_t flow = 0) {
    MetricEvent e;
    e.kind = MetricKind::Dropped;
    e.time = at(t);
    e.node = node;
    e.pkt = pkt;
    e.reason = reason;
    e.flow_id = flow;
    e.size_bytes = 512;
    return e;
}

}  // namespace

TEST_CASE("one delivery yields its delay, rtt, and pair entry") {
    MetricsCollector c(at(10.0));
    c.record(ev_sent(1.0, 0, 2, 0, 0));
    c.record(ev_received(1.5, 2, 0, 2, 0, 0, 1.0));
    c.record(ev_ack(2.0, 0, 0, 0, 1.0));

    MetricsReport r = c.finalize(cfg_with_flows({TrafficFlow{0, 2, at(0.0), at(5.0), 4.0, 512}}));
    CHECK(r.sent_total == 1.0);
    CHECK(r.delivered_total == 1.0);
    CHECK(r.acked_total == 1.0);
    REQUIRE(r.avg_end_to_end_delay_s.has_value());
    CHECK(*r.avg_end_to_end_delay_s == 0.5);
    REQUIRE(r.avg_rtt_s.has_value());
    CHECK(*r.avg_rtt_s == 1.0);

    REQUIRE(r.pairwise.size() == 1);
    CHECK(r.pairwise[0].src == 0);
    CHECK(r.pairwise[0].dst == 2);
    CHECK(r.pairwise[0].packets == 1.0);
    CHECK(r.pairwise[0].avg_delay_s == 0.5);

    REQUIRE(r.flows.size() == 1);
    CHECK(r.flows[0].sent == 1.0);
    CHECK(r.flows[0].delivered == 1.0);
}

TEST_CASE("delays average with the pinned integer microsecond formula") {
    MetricsCollector c(at(10.0));
    c.record(ev_sent(1.0, 0, 2, 0, 0));
    c.record(ev_sent(1.1, 0, 2, 0, 1));
    c.record(ev_received(1.2, 2, 0, 2, 0, 0, 1.0));  // 0.2 s
    c.record(ev_received(1.5, 2, 0, 2, 0, 1, 1.1));  // 0.4 s
    MetricsReport r = c.finalize(cfg_with_flows({}));
    REQUIRE(r.avg_end_to_end_delay_s.has_value());
    CHECK(*r.avg_end_to_end_delay_s ==
          static_cast<double>(200000 + 400000) / 2.0 * 1e-6);
}

TEST_CASE("intermediate hops drive the receiving and forwarding averages") {
    // Two packets over src 0 -> 1 -> 2 -> dst 3.
    MetricsCollector c(at(10.0));
    for (std::uint64_t seq = 0; seq < 2; ++seq) {
        double base = 1.0 + static_cast<double>(seq);
        c.record(ev_sent(base, 0, 3, 0, seq));
        c.record(ev_forwarded(base + 0.005, 0, 0, 3, 0, seq));  // source tx
        c.record(ev_received(base + 0.007, 1, 0, 3, 0, seq, base));
        c.record(ev_forwarded(base + 0.012, 1, 0, 3, 0, seq));
        c.record(ev_received(base + 0.014, 2, 0, 3, 0, seq, base));
        c.record(ev_forwarded(base + 0.019, 2, 0, 3, 0, seq));
        c.record(ev_received(base + 0.021, 3, 0, 3, 0, seq, base));
    }
    MetricsReport r = c.finalize(cfg_with_flows({}));
    CHECK(r.delivered_total == 2.0);
    REQUIRE(r.avg_nodes_receiving.has_value());
    CHECK(*r.avg_nodes_receiving == 2.0);
    CHECK(*r.avg_nodes_forwarding == 2.0);
    CHECK(r.intermediate_receive_events == 4.0);
    CHECK(r.intermediate_forward_events == 4.0);
    CHECK(r.processing_samples == 4.0);
    // Each relay held its packet for exactly 5 ms.
    CHECK(*r.avg_processing_time_s == static_cast<double>(4 * 5000) / 4.0 * 1e-6);

    // Source transmissions land in the sent series, relays in forwarded.
    CHECK(r.series.sent_packets[1] == 1.0);
    CHECK(r.series.forwarded_packets[1] == 2.0);
    CHECK(r.series.received_packets[1] == 1.0);  // deliveries only
}

TEST_CASE("a forward without a matching receive produces no processing sample") {
    MetricsCollector c(at(10.0));
    c.record(ev_forwarded(1.0, 4, 0, 3, 0, 0));
    MetricsReport r = c.finalize(cfg_with_flows({}));
    CHECK(r.intermediate_forward_events == 1.0);
    CHECK(r.processing_samples == 0.0);
    CHECK_FALSE(r.avg_processing_time_s.has_value());
}

TEST_CASE("a receive at the source is not an intermediate hop") {
    MetricsCollector c(at(10.0));
    c.record(ev_received(1.0, 0, 0, 3, 0, 0, 0.9));
    MetricsReport r = c.finalize(cfg_with_flows({}));
    CHECK(r.intermediate_receive_events == 0.0);
    CHECK(r.delivered_total == 0.0);
}

TEST_CASE("data and control drops are booked separately") {
    MetricsCollector c(at(10.0));
    c.record(ev_sent(1.0, 0, 2, 0, 0));
    c.record(ev_dropped(1.4, 0, PacketKind::Data, DropReason::BufferTimeout, 0));
    c.record(ev_dropped(2.0, 3, PacketKind::Rreq, DropReason::SelfRateLimit));
    c.record(ev_dropped(2.1, 3, PacketKind::Rreq, DropReason::SelfRateLimit));
    c.record(ev_dropped(2.2, 3, PacketKind::Rrep, DropReason::NoRoute));

    MetricsReport r = c.finalize(cfg_with_flows({}));
    CHECK(r.dropped_by_reason.at("buffer_timeout") == 1.0);
    CHECK(r.control_dropped_by_reason.at("rreq/self_rate_limit") == 2.0);
    CHECK(r.control_dropped_by_reason.at("rrep/no_route") == 1.0);

    // The headline total spans both books; per-flow stats stay data-only.
    CHECK(r.dropped_total == 4.0);
    CHECK(r.flows.at(0).dropped == 1.0);

    // The cumulative curve counts every drop: the data drop lands in the
    // second interval, the three control drops in the third.
    std::vector<double> want{0.0, 1.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0};
    CHECK(r.series.dropped_cumulative == want);
}

TEST_CASE("screen decisions tally by verdict and blacklists are extracted") {
    MetricsCollector c(at(10.0));
    auto screen = [&](double t, ScreenVerdict v, std::uint32_t offense, double until) {
        MetricEvent e;
        e.kind = MetricKind::ScreenDecisionMade;
        e.time = at(t);
        e.node = 5;
        e.pkt = PacketKind::Rreq;
        e.neighbor = 9;
        e.verdict = v;
        e.offense = offense;
        e.until = at(until);
        c.record(e);
    };
    screen(1.0, ScreenVerdict::Accept, 0, 0.0);
    screen(1.1, ScreenVerdict::Accept, 0, 0.0);
    screen(1.2, ScreenVerdict::DropOverAcceptLimit, 0, 0.0);
    screen(1.3, ScreenVerdict::DropAndBlacklist, 1, 6.3);
    screen(1.4, ScreenVerdict::DropBlacklisted, 0, 0.0);

    MetricsReport r = c.finalize(cfg_with_flows({}));
    CHECK(r.screen_counts.at("accept") == 2.0);
    CHECK(r.screen_counts.at("drop_over_accept_limit") == 1.0);
    CHECK(r.screen_counts.at("drop_and_blacklist") == 1.0);
    CHECK(r.screen_counts.at("drop_blacklisted") == 1.0);

    REQUIRE(r.blacklists.size() == 1);
    CHECK(r.blacklists[0].time == at(1.3));
    CHECK(r.blacklists[0].observer == 5);
    CHECK(r.blacklists[0].neighbor == 9);
    CHECK(r.blacklists[0].offense == 1);
    CHECK(r.blacklists[0].until == at(6.3));
}

TEST_CASE("events must arrive in timestamp order") {
    MetricsCollector c(at(10.0));
    c.record(ev_sent(2.0, 0, 2, 0, 0));
    c.record(ev_sent(2.0, 0, 2, 0, 1));  // equal times are fine
    CHECK_THROWS_AS(c.record(ev_sent(1.9, 0, 2, 0, 2)), std::logic_error);
}

TEST_CASE("no deliveries leave the averages absent") {
    MetricsCollector c(at(5.0));
    MetricsReport r = c.finalize(cfg_with_flows({TrafficFlow{1, 2, at(0.0), at(5.0), 4.0, 512}}));
    CHECK_FALSE(r.avg_end_to_end_delay_s.has_value());
    CHECK_FALSE(r.avg_rtt_s.has_value());
    CHECK_FALSE(r.avg_processing_time_s.has_value());
    CHECK_FALSE(r.avg_nodes_receiving.has_value());
    CHECK_FALSE(r.avg_nodes_forwarding.has_value());
    CHECK(r.sent_total == 0.0);
    // Configured flows appear even without traffic.
    REQUIRE(r.flows.size() == 1);
    CHECK(r.flows[0].src == 1);
    CHECK(r.flows[0].dst == 2);
    CHECK(r.flows[0].sent == 0.0);
    CHECK(r.series.generated_packets == std::vector<double>(5, 0.0));
}

TEST_CASE("route validity sums disjoint intervals and closes at the horizon") {
    MetricsCollector c(at(10.0));
    auto route = [&](MetricKind kind, double t, NodeId node, NodeId dest) {
        MetricEvent e;
        e.kind = kind;
        e.time = at(t);
        e.node = node;
        e.route_dest = dest;
        c.record(e);
    };
    route(MetricKind::RouteInstalled, 1.0, 1, 2);
    route(MetricKind::RouteInvalidated, 3.0, 1, 2);
    route(MetricKind::RouteInstalled, 4.0, 1, 2);
    // A repeated install while the interval is open must not reset it.
    route(MetricKind::RouteInstalled, 5.0, 1, 2);
    // An invalidation with no open interval is ignored.
    route(MetricKind::RouteInvalidated, 6.0, 7, 8);

    MetricsReport r = c.finalize(cfg_with_flows({}));
    REQUIRE(r.route_validity.size() == 1);
    CHECK(r.route_validity[0].node == 1);
    CHECK(r.route_validity[0].dest == 2);
    // [1, 3] plus [4, horizon 10] = 8 seconds.
    CHECK(r.route_validity[0].seconds == static_cast<double>(8000000) * 1e-6);
}

TEST_CASE("series bucket by second and clamp at the horizon") {
    MetricsCollector c(at(2.5));
    c.record(ev_sent(0.999999, 0, 2, 0, 0));
    c.record(ev_sent(1.0, 0, 2, 0, 1));
    c.record(ev_received(2.499999, 2, 0, 2, 0, 0, 0.999999));
    c.record(ev_dropped(2.5, 0, PacketKind::Data, DropReason::BufferTimeout, 0));

    MetricsReport r = c.finalize(cfg_with_flows({}));
    REQUIRE(r.series.generated_packets.size() == 3);
    CHECK(r.series.generated_packets == std::vector<double>{1.0, 1.0, 0.0});
    CHECK(r.series.generated_bits == std::vector<double>{4096.0, 4096.0, 0.0});
    CHECK(r.series.received_packets == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(r.series.received_bits == std::vector<double>{0.0, 0.0, 4096.0});
    CHECK(r.series.dropped_cumulative == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("pairwise averages weighted by packets reproduce the global mean") {
    MetricsCollector c(at(10.0));
    c.record(ev_received(1.1, 2, 0, 2, 0, 0, 1.0));  // 0.1 s
    c.record(ev_received(2.3, 2, 0, 2, 0, 1, 2.0));  // 0.3 s
    c.record(ev_received(3.5, 3, 1, 3, 1, 0, 3.0));  // 0.5 s
    MetricsReport r = c.finalize(cfg_with_flows({}));

    REQUIRE(r.pairwise.size() == 2);
    CHECK(r.pairwise[0].avg_delay_s == static_cast<double>(400000) / 2.0 * 1e-6);
    CHECK(r.pairwise[1].avg_delay_s == static_cast<double>(500000) / 1.0 * 1e-6);
    CHECK(*r.avg_end_to_end_delay_s == static_cast<double>(900000) / 3.0 * 1e-6);

    double weighted_us = 0.0;
    double packets = 0.0;
    for (const PairDelay& p : r.pairwise) {
        weighted_us += p.avg_delay_s * 1e6 * p.packets;
        packets += p.packets;
    }
    CHECK(weighted_us / packets * 1e-6 == doctest::Approx(*r.avg_end_to_end_delay_s).epsilon(1e-12));
}

TEST_CASE("the collector retains its log only on request") {
    MetricsCollector quiet(at(5.0));
    quiet.record(ev_sent(1.0, 0, 2, 0, 0));
    CHECK(quiet.log().empty());

    MetricsCollector keeper(at(5.0), true);
    keeper.record(ev_sent(1.0, 0, 2, 0, 0));
    keeper.record(ev_received(1.1, 2, 0, 2, 0, 0, 1.0));
    CHECK(keeper.log().size() == 2);
    CHECK(keeper.log()[0].kind == MetricKind::Sent);
    CHECK(keeper.log()[1].kind == MetricKind::Received);
}

TEST_CASE("in flight counts reach the flow rows") {
    MetricsCollector c(at(5.0));
    c.record(ev_sent(1.0, 0, 2, 0, 0));
    c.note_in_flight(0, 1);
    MetricsReport r = c.finalize(cfg_with_flows({}));
    REQUIRE(r.flows.size() == 1);
    CHECK(r.flows[0].in_flight == 1.0);
    CHECK(r.flows[0].sent == r.flows[0].delivered + r.flows[0].dropped + r.flows[0].in_flight);
}

namespace {

MetricsReport stub_report(const std::string& mode, std::uint64_t seed) {
    MetricsReport r;
    r.mode = mode;
    r.seeds = {seed};
    r.scenario_fingerprint = "abc123";
    r.duration_s = 17.2;
    return r;
}

}  // namespace

TEST_CASE("mean report averages scalars and concatenates seeds") {
    MetricsReport r1 = stub_report("proposed", 1);
    r1.avg_end_to_end_delay_s = 0.2;
    r1.sent_total = 10.0;
    r1.dropped_by_reason["no_route"] = 4.0;
    r1.series.generated_packets = {1.0, 3.0};
    r1.pairwise = {{0, 2, 4.0, 0.2}};
    r1.route_validity = {{1, 2, 3.0}};
    r1.flows = {{0, 0, 2, 10.0, 8.0, 2.0, 0.0}};

    MetricsReport r2 = stub_report("proposed", 2);
    r2.avg_end_to_end_delay_s = 0.4;
    r2.sent_total = 20.0;
    r2.dropped_by_reason["no_route"] = 2.0;
    r2.series.generated_packets = {3.0, 5.0};
    r2.pairwise = {{0, 2, 6.0, 0.4}};
    r2.route_validity = {{1, 2, 5.0}};
    r2.flows = {{0, 0, 2, 20.0, 16.0, 4.0, 0.0}};

    r1.blacklists = {{at(2.0), 4, 9, 1, at(7.0)}};
    r2.blacklists = {{at(2.5), 6, 9, 1, at(7.5)}};
    r2.unblocks = {{at(7.5), 6, 9}};

    MetricsReport m = mean_report({r1, r2});
    CHECK(m.mode == "proposed");
    CHECK(m.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(m.scenario_fingerprint == "abc123");
    CHECK(*m.avg_end_to_end_delay_s == (0.2 + 0.4) / 2.0);
    CHECK(m.sent_total == 15.0);
    CHECK(m.dropped_by_reason.at("no_route") == 3.0);
    CHECK(m.series.generated_packets == std::vector<double>{2.0, 4.0});
    REQUIRE(m.pairwise.size() == 1);
    CHECK(m.pairwise[0].packets == 5.0);
    CHECK(m.pairwise[0].avg_delay_s == (0.2 + 0.4) / 2.0);
    REQUIRE(m.route_validity.size() == 1);
    CHECK(m.route_validity[0].seconds == 4.0);
    REQUIRE(m.flows.size() == 1);
    CHECK(m.flows[0].sent == 15.0);
    CHECK(m.flows[0].delivered == 12.0);

    // Discrete events concatenate in seed order instead of averaging.
    REQUIRE(m.blacklists.size() == 2);
    CHECK(m.blacklists[0].observer == 4);
    CHECK(m.blacklists[1].observer == 6);
    REQUIRE(m.unblocks.size() == 1);
    CHECK(m.unblocks[0].observer == 6);
}

TEST_CASE("mean report averages optionals over the seeds that have them") {
    MetricsReport r1 = stub_report("original", 1);
    r1.avg_rtt_s = 0.6;
    MetricsReport r2 = stub_report("original", 2);  // no rtt samples this seed
    MetricsReport m = mean_report({r1, r2});
    REQUIRE(m.avg_rtt_s.has_value());
    CHECK(*m.avg_rtt_s == 0.6);
    CHECK_FALSE(m.avg_end_to_end_delay_s.has_value());
}

TEST_CASE("mean report rejects mixed experiments") {
    MetricsReport r1 = stub_report("proposed", 1);
    MetricsReport r2 = stub_report("proposed", 2);
    r2.scenario_fingerprint = "zzz999";
    CHECK_THROWS_AS(mean_report({r1, r2}), std::invalid_argument);

    MetricsReport r3 = stub_report("original", 2);
    CHECK_THROWS_AS(mean_report({r1, r3}), std::invalid_argument);
    CHECK_THROWS_AS(mean_report({}), std::invalid_argument);
}

namespace {

const ComparisonRow& find_row(const Comparison& c, const std::string& name) {
    for (const ComparisonRow& r : c.scalars) {
        if (r.name == name) return r;
    }
    throw std::runtime_error("row not found: " + name);
}

}  // namespace

TEST_CASE("comparing a report with itself yields zero deltas") {
    MetricsReport r = stub_report("original", 1);
    r.avg_end_to_end_delay_s = 0.25;
    r.sent_total = 80.0;
    r.series.received_packets = {1.0, 2.0};
    MetricsReport p = r;
    p.mode = "proposed";

    Comparison c = compare_reports(r, p);
    CHECK(*find_row(c, "avg_end_to_end_delay_s").delta == 0.0);
    CHECK(*find_row(c, "sent_total").delta == 0.0);
    for (double d : c.series_delta.at("received_packets")) CHECK(d == 0.0);
}

TEST_CASE("comparison deltas reproduce the reference improvement figures") {
    MetricsReport original = stub_report("original", 1);
    MetricsReport proposed = stub_report("proposed", 1);
    original.avg_end_to_end_delay_s = 0.32539;
    proposed.avg_end_to_end_delay_s = 0.27576;
    original.avg_rtt_s = 0.58819;
    proposed.avg_rtt_s = 0.45346;
    original.avg_nodes_receiving = 0.4356328083;
    proposed.avg_nodes_receiving = 0.3580786026;
    original.avg_nodes_forwarding = 0.4285714286;
    proposed.avg_nodes_forwarding = 0.3499688085;

    Comparison c = compare_reports(original, proposed);
    CHECK(*find_row(c, "avg_end_to_end_delay_s").delta == 0.27576 - 0.32539);
    CHECK(*find_row(c, "avg_end_to_end_delay_s").delta ==
          doctest::Approx(-0.04963).epsilon(1e-9));
    CHECK(*find_row(c, "avg_rtt_s").delta == doctest::Approx(-0.13473).epsilon(1e-9));
    CHECK(*find_row(c, "avg_nodes_receiving").delta < 0.0);
    CHECK(*find_row(c, "avg_nodes_forwarding").delta < 0.0);

    std::string table = comparison_table(c);
    CHECK(table.find("avg_end_to_end_delay_s") != std::string::npos);
    CHECK(table.find("-0.049630") != std::string::npos);
    CHECK(table.find("-0.134730") != std::string::npos);

    nlohmann::json j = nlohmann::json::parse(comparison_json(c));
    CHECK(j.at("schema") == "manetsim.comparison/1");
    CHECK(j.at("scalars").at(0).at("name") == "avg_end_to_end_delay_s");
}

TEST_CASE("comparison refuses reports from different experiments") {
    MetricsReport a = stub_report("original", 1);
    MetricsReport b = stub_report("proposed", 1);
    b.scenario_fingerprint = "zzz999";
    CHECK_THROWS_AS(compare_reports(a, b), std::invalid_argument);

    MetricsReport c = stub_report("proposed", 2);
    CHECK_THROWS_AS(compare_reports(a, c), std::invalid_argument);
}

TEST_CASE("an absent side leaves the delta empty") {
    MetricsReport a = stub_report("original", 1);
    MetricsReport b = stub_report("proposed", 1);
    a.avg_rtt_s = 0.5;  // proposed delivered nothing, so no rtt there
    Comparison c = compare_reports(a, b);
    const ComparisonRow& r = find_row(c, "avg_rtt_s");
    CHECK(r.original == 0.5);
    CHECK_FALSE(r.proposed.has_value());
    CHECK_FALSE(r.delta.has_value());
    CHECK(comparison_table(c).find("-") != std::string::npos);
}

TEST_CASE("series csv files carry one row per interval") {
    SeriesSet s;
    s.generated_packets = {1.0, 2.5, 0.0};
    auto files = series_csv_files(s);
    CHECK(files.size() == 9);
    CHECK(files.at("generated_packets.csv") ==
          "interval_start,value\n0,1\n1,2.5\n2,0\n");
    CHECK(files.at("received_packets.csv") == "interval_start,value\n");
}

TEST_CASE("report json renders per seed reports when given") {
    MetricsReport summary = stub_report("proposed", 1);
    summary.seeds = {1, 2};
    MetricsReport s1 = stub_report("proposed", 1);
    MetricsReport s2 = stub_report("proposed", 2);

    nlohmann::json alone = nlohmann::json::parse(render_report_json(summary, {}));
    CHECK_FALSE(alone.contains("per_seed"));
    CHECK(alone.at("schema") == "manetsim.report/1");
    CHECK(alone.at("averages").at("end_to_end_delay_s").is_null());

    nlohmann::json nested = nlohmann::json::parse(render_report_json(summary, {s1, s2}));
    REQUIRE(nested.contains("per_seed"));
    CHECK(nested.at("per_seed").size() == 2);
    CHECK(nested.at("per_seed").at(1).at("seeds").at(0) == 2);
}

#include "manetsim/report_io.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace manetsim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string shortest_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ordered_json optional_number(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

ordered_json report_to_json(const MetricsReport& r) {
    ordered_json j;
    j["schema"] = r.schema;
    j["mode"] = r.mode;
    j["seeds"] = r.seeds;
    j["scenario_fingerprint"] = r.scenario_fingerprint;
    j["duration_s"] = r.duration_s;

    j["averages"] = {{"end_to_end_delay_s", optional_number(r.avg_end_to_end_delay_s)},
                     {"rtt_s", optional_number(r.avg_rtt_s)},
                     {"processing_time_s", optional_number(r.avg_processing_time_s)},
                     {"nodes_receiving", optional_number(r.avg_nodes_receiving)},
                     {"nodes_forwarding", optional_number(r.avg_nodes_forwarding)}};

    j["counts"] = {{"sent", r.sent_total},
                   {"delivered", r.delivered_total},
                   {"acked", r.acked_total},
                   {"processing_samples", r.processing_samples},
                   {"intermediate_receive_events", r.intermediate_receive_events},
                   {"intermediate_forward_events", r.intermediate_forward_events}};

    j["drops"] = ordered_json::object();
    j["drops"]["total"] = r.dropped_total;
    j["drops"]["data_by_reason"] = ordered_json::object();
    for (const auto& [reason, count] : r.dropped_by_reason) {
        j["drops"]["data_by_reason"][reason] = count;
    }
    j["drops"]["control_by_reason"] = ordered_json::object();
    for (const auto& [reason, count] : r.control_dropped_by_reason) {
        j["drops"]["control_by_reason"][reason] = count;
    }

    j["series"] = {{"generated_packets", r.series.generated_packets},
                   {"generated_bits", r.series.generated_bits},
                   {"sent_packets", r.series.sent_packets},
                   {"sent_bits", r.series.sent_bits},
                   {"forwarded_packets", r.series.forwarded_packets},
                   {"forwarded_bits", r.series.forwarded_bits},
                   {"received_packets", r.series.received_packets},
                   {"received_bits", r.series.received_bits},
                   {"dropped_cumulative", r.series.dropped_cumulative}};

    j["pairwise_delays"] = ordered_json::array();
    for (const PairDelay& p : r.pairwise) {
        j["pairwise_delays"].push_back({{"src", p.src},
                                        {"dst", p.dst},
                                        {"packets", p.packets},
                                        {"avg_delay_s", p.avg_delay_s}});
    }

    j["route_validity"] = ordered_json::array();
    for (const RouteValidity& v : r.route_validity) {
        j["route_validity"].push_back({{"node", v.node}, {"dest", v.dest}, {"seconds", v.seconds}});
    }

    j["flows"] = ordered_json::array();
    for (const FlowStats& f : r.flows) {
        j["flows"].push_back({{"flow_id", f.flow_id},
                              {"src", f.src},
                              {"dst", f.dst},
                              {"sent", f.sent},
                              {"delivered", f.delivered},
                              {"dropped", f.dropped},
                              {"in_flight", f.in_flight}});
    }

    j["screening"] = ordered_json::object();
    j["screening"]["counts"] = ordered_json::object();
    for (const auto& [verdict, count] : r.screen_counts) {
        j["screening"]["counts"][verdict] = count;
    }
    j["screening"]["blacklists"] = ordered_json::array();
    for (const BlacklistEvent& b : r.blacklists) {
        j["screening"]["blacklists"].push_back({{"time_s", b.time.to_seconds()},
                                                {"observer", b.observer},
                                                {"neighbor", b.neighbor},
                                                {"offense", b.offense},
                                                {"until_s", b.until.to_seconds()}});
    }
    j["screening"]["unblocks"] = ordered_json::array();
    for (const UnblockEvent& u : r.unblocks) {
        j["screening"]["unblocks"].push_back(
            {{"time_s", u.time.to_seconds()}, {"observer", u.observer}, {"neighbor", u.neighbor}});
    }
    return j;
}

void row(std::ostringstream& os, const std::string& name, const std::optional<double>& a,
         const std::optional<double>& b, const std::optional<double>& d) {
    auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string("-");
        std::ostringstream c;
        c << std::fixed << std::setprecision(6) << *v;
        return c.str();
    };
    os << std::left << std::setw(34) << name << std::right << std::setw(16) << cell(a)
       << std::setw(16) << cell(b) << std::setw(16) << cell(d) << "\n";
}

}  // namespace

std::string render_report_json(const MetricsReport& summary,
                               const std::vector<MetricsReport>& per_seed) {
    ordered_json j = report_to_json(summary);
    if (!per_seed.empty()) {
        j["per_seed"] = ordered_json::array();
        for (const MetricsReport& r : per_seed) j["per_seed"].push_back(report_to_json(r));
    }
    return j.dump(2) + "\n";
}

std::map<std::string, std::string> series_csv_files(const SeriesSet& series) {
    std::map<std::string, std::string> out;
    auto emit = [&](const char* name, const std::vector<double>& values) {
        std::string body = "interval_start,value\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            body += std::to_string(i);
            body += ',';
            body += shortest_double(values[i]);
            body += '\n';
        }
        out[std::string(name) + ".csv"] = std::move(body);
    };
    emit("generated_packets", series.generated_packets);
    emit("generated_bits", series.generated_bits);
    emit("sent_packets", series.sent_packets);
    emit("sent_bits", series.sent_bits);
    emit("forwarded_packets", series.forwarded_packets);
    emit("forwarded_bits", series.forwarded_bits);
    emit("received_packets", series.received_packets);
    emit("received_bits", series.received_bits);
    emit("dropped_cumulative", series.dropped_cumulative);
    return out;
}

Comparison compare_reports(const MetricsReport& original, const MetricsReport& proposed) {
    if (original.scenario_fingerprint != proposed.scenario_fingerprint) {
        throw std::invalid_argument("compare: reports come from different scenarios");
    }
    if (original.seeds != proposed.seeds) {
        throw std::invalid_argument("compare: reports come from different seed lists");
    }

    Comparison c;
    auto opt_row = [&](const char* name, const std::optional<double>& a,
                       const std::optional<double>& b) {
        ComparisonRow r;
        r.name = name;
        r.original = a;
        r.proposed = b;
        if (a && b) r.delta = *b - *a;
        c.scalars.push_back(std::move(r));
    };
    auto num_row = [&](const char* name, double a, double b) {
        opt_row(name, a, b);
    };

    opt_row("avg_end_to_end_delay_s", original.avg_end_to_end_delay_s, proposed.avg_end_to_end_delay_s);
    opt_row("avg_rtt_s", original.avg_rtt_s, proposed.avg_rtt_s);
    opt_row("avg_processing_time_s", original.avg_processing_time_s, proposed.avg_processing_time_s);
    opt_row("avg_nodes_receiving", original.avg_nodes_receiving, proposed.avg_nodes_receiving);
    opt_row("avg_nodes_forwarding", original.avg_nodes_forwarding, proposed.avg_nodes_forwarding);
    num_row("sent_total", original.sent_total, proposed.sent_total);
    num_row("delivered_total", original.delivered_total, proposed.delivered_total);
    num_row("acked_total", original.acked_total, proposed.acked_total);
    num_row("dropped_total", original.dropped_total, proposed.dropped_total);

    auto series_row = [&](const char* name, const std::vector<double>& a,
                          const std::vector<double>& b) {
        std::vector<double> d(std::max(a.size(), b.size()), 0.0);
        for (std::size_t i = 0; i < d.size(); ++i) {
            double av = i < a.size() ? a[i] : 0.0;
            double bv = i < b.size() ? b[i] : 0.0;
            d[i] = bv - av;
        }
        c.series_delta[name] = std::move(d);
    };
    series_row("generated_packets", original.series.generated_packets, proposed.series.generated_packets);
    series_row("generated_bits", original.series.generated_bits, proposed.series.generated_bits);
    series_row("sent_packets", original.series.sent_packets, proposed.series.sent_packets);
    series_row("sent_bits", original.series.sent_bits, proposed.series.sent_bits);
    series_row("forwarded_packets", original.series.forwarded_packets, proposed.series.forwarded_packets);
    series_row("forwarded_bits", original.series.forwarded_bits, proposed.series.forwarded_bits);
    series_row("received_packets", original.series.received_packets, proposed.series.received_packets);
    series_row("received_bits", original.series.received_bits, proposed.series.received_bits);
    series_row("dropped_cumulative", original.series.dropped_cumulative, proposed.series.dropped_cumulative);
    return c;
}

std::string comparison_table(const Comparison& c) {
    std::ostringstream os;
    os << std::left << std::setw(34) << "metric" << std::right << std::setw(16) << "original"
       << std::setw(16) << "proposed" << std::setw(16) << "delta" << "\n";
    os << std::string(34 + 16 * 3, '-') << "\n";
    for (const ComparisonRow& r : c.scalars) {
        row(os, r.name, r.original, r.proposed, r.delta);
    }
    return os.str();
}

std::string comparison_json(const Comparison& c) {
    ordered_json j;
    j["schema"] = "manetsim.comparison/1";
    j["scalars"] = ordered_json::array();
    for (const ComparisonRow& r : c.scalars) {
        j["scalars"].push_back({{"name", r.name},
                                {"original", optional_number(r.original)},
                                {"proposed", optional_number(r.proposed)},
                                {"delta", optional_number(r.delta)}});
    }
    j["series_delta"] = ordered_json::object();
    for (const auto& [name, values] : c.series_delta) {
        j["series_delta"][name] = values;
    }
    return j.dump(2) + "\n";
}

}  // namespace manetsim

#include "manetsim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace manetsim {

const char* packet_kind_name(PacketKind k) {
    switch (k) {
        case PacketKind::Data: return "data";
        case PacketKind::Ack: return "ack";
        case PacketKind::Rreq: return "rreq";
        case PacketKind::Rrep: return "rrep";
        case PacketKind::Rerr: return "rerr";
    }
    return "unknown";
}

PacketKind packet_kind_of(const Packet& p) {
    if (std::holds_alternative<DataPacket>(p)) return PacketKind::Data;
    if (std::holds_alternative<AckPacket>(p)) return PacketKind::Ack;
    if (std::holds_alternative<RouteRequest>(p)) return PacketKind::Rreq;
    if (std::holds_alternative<RouteReply>(p)) return PacketKind::Rrep;
    return PacketKind::Rerr;
}

const char* screen_verdict_name(ScreenVerdict v) {
    switch (v) {
        case ScreenVerdict::Accept: return "accept";
        case ScreenVerdict::DropOverAcceptLimit: return "drop_over_accept_limit";
        case ScreenVerdict::DropAndBlacklist: return "drop_and_blacklist";
        case ScreenVerdict::DropBlacklisted: return "drop_blacklisted";
    }
    return "unknown";
}

MetricsCollector::MetricsCollector(SimTime duration, bool retain_log)
    : duration_(duration), retain_log_(retain_log) {
    std::int64_t n = (duration.us + kOneSecond.us - 1) / kOneSecond.us;
    intervals_.resize(static_cast<std::size_t>(std::max<std::int64_t>(n, 1)));
}

MetricsCollector::IntervalAcc& MetricsCollector::interval_for(SimTime t) {
    std::int64_t idx = t.us / kOneSecond.us;
    idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(intervals_.size()) - 1);
    return intervals_[static_cast<std::size_t>(idx)];
}

void MetricsCollector::record(const MetricEvent& e) {
    if (e.time < last_time_) {
        throw std::logic_error("metric events must arrive in timestamp order");
    }
    last_time_ = e.time;
    if (retain_log_) log_.push_back(e);

    switch (e.kind) {
        case MetricKind::Sent: {
            sent_ += 1;
            FlowAcc& f = flows_[e.flow_id];
            f.src = e.src;
            f.dst = e.dst;
            f.sent += 1;
            IntervalAcc& iv = interval_for(e.time);
            iv.gen_p += 1;
            iv.gen_b += std::uint64_t{e.size_bytes} * 8;
            break;
        }
        case MetricKind::Received: {
            if (e.node == e.dst) {
                delivered_ += 1;
                flows_[e.flow_id].delivered += 1;
                PairAcc& p = pairwise_[{e.src, e.dst}];
                p.delay_us_sum += (e.time - e.sent_at).us;
                p.count += 1;
                IntervalAcc& iv = interval_for(e.time);
                iv.recv_p += 1;
                iv.recv_b += std::uint64_t{e.size_bytes} * 8;
            } else if (e.node != e.src) {
                recv_intermediate_ += 1;
                pending_processing_[{e.node, e.flow_id, e.seq}] = e.time;
            }
            break;
        }
        case MetricKind::Forwarded: {
            IntervalAcc& iv = interval_for(e.time);
            if (e.node == e.src) {
                iv.sent_p += 1;
                iv.sent_b += std::uint64_t{e.size_bytes} * 8;
            } else {
                fwd_intermediate_ += 1;
                iv.fwd_p += 1;
                iv.fwd_b += std::uint64_t{e.size_bytes} * 8;
                auto it = pending_processing_.find({e.node, e.flow_id, e.seq});
                if (it != pending_processing_.end()) {
                    processing_us_sum_ += (e.time - it->second).us;
                    processing_samples_ += 1;
                    pending_processing_.erase(it);
                }
            }
            break;
        }
        case MetricKind::Dropped: {
            if (e.pkt == PacketKind::Data) {
                dropped_data_ += 1;
                dropped_data_by_reason_[e.reason] += 1;
                flows_[e.flow_id].dropped += 1;
            } else {
                dropped_control_[{e.pkt, e.reason}] += 1;
            }
            interval_for(e.time).drop_p += 1;
            break;
        }
        case MetricKind::AckReceived: {
            acked_ += 1;
            rtt_us_sum_ += (e.time - e.sent_at).us;
            break;
        }
        case MetricKind::ScreenDecisionMade: {
            screen_counts_[e.verdict] += 1;
            if (e.verdict == ScreenVerdict::DropAndBlacklist) {
                blacklists_.push_back({e.time, e.node, e.neighbor, e.offense, e.until});
            }
            break;
        }
        case MetricKind::RouteInstalled: {
            ValidityAcc& v = validity_[{e.node, e.route_dest}];
            if (!v.open_since) v.open_since = e.time;
            break;
        }
        case MetricKind::RouteInvalidated: {
            ValidityAcc& v = validity_[{e.node, e.route_dest}];
            if (v.open_since) {
                v.total_us += (e.time - *v.open_since).us;
                v.open_since.reset();
            }
            break;
        }
    }
}

void MetricsCollector::note_unblock(SimTime t, NodeId observer, NodeId neighbor) {
    unblocks_.push_back({t, observer, neighbor});
}

void MetricsCollector::note_in_flight(std::uint32_t flow_id, std::uint64_t count) {
    flows_[flow_id].in_flight = count;
}

MetricsReport MetricsCollector::finalize(const ScenarioConfig& cfg) {
    MetricsReport r;
    r.duration_s = duration_.to_seconds();

    // Per-pair sums also produce the global delay average, giving exact
    // agreement between the two however the additions are grouped: the sums
    // are integer microseconds.
    std::int64_t delay_sum = 0;
    std::uint64_t delay_count = 0;
    for (const auto& [key, acc] : pairwise_) {
        delay_sum += acc.delay_us_sum;
        delay_count += acc.count;
        r.pairwise.push_back({key.first, key.second, static_cast<double>(acc.count),
                              static_cast<double>(acc.delay_us_sum) / static_cast<double>(acc.count) * 1e-6});
    }
    if (delay_count > 0) {
        r.avg_end_to_end_delay_s =
            static_cast<double>(delay_sum) / static_cast<double>(delay_count) * 1e-6;
    }
    if (acked_ > 0) {
        r.avg_rtt_s = static_cast<double>(rtt_us_sum_) / static_cast<double>(acked_) * 1e-6;
    }
    if (processing_samples_ > 0) {
        r.avg_processing_time_s =
            static_cast<double>(processing_us_sum_) / static_cast<double>(processing_samples_) * 1e-6;
    }
    if (delivered_ > 0) {
        r.avg_nodes_receiving =
            static_cast<double>(recv_intermediate_) / static_cast<double>(delivered_);
        r.avg_nodes_forwarding =
            static_cast<double>(fwd_intermediate_) / static_cast<double>(delivered_);
    }

    r.sent_total = static_cast<double>(sent_);
    r.delivered_total = static_cast<double>(delivered_);
    r.acked_total = static_cast<double>(acked_);
    r.processing_samples = static_cast<double>(processing_samples_);
    r.intermediate_receive_events = static_cast<double>(recv_intermediate_);
    r.intermediate_forward_events = static_cast<double>(fwd_intermediate_);

    std::uint64_t dropped_all = dropped_data_;
    for (const auto& [reason, n] : dropped_data_by_reason_) {
        r.dropped_by_reason[drop_reason_name(reason)] = static_cast<double>(n);
    }
    for (const auto& [key, n] : dropped_control_) {
        std::string name = std::string(packet_kind_name(key.first)) + "/" + drop_reason_name(key.second);
        r.control_dropped_by_reason[name] = static_cast<double>(n);
        dropped_all += n;
    }
    r.dropped_total = static_cast<double>(dropped_all);

    std::uint64_t running_drops = 0;
    for (const IntervalAcc& iv : intervals_) {
        r.series.generated_packets.push_back(static_cast<double>(iv.gen_p));
        r.series.generated_bits.push_back(static_cast<double>(iv.gen_b));
        r.series.sent_packets.push_back(static_cast<double>(iv.sent_p));
        r.series.sent_bits.push_back(static_cast<double>(iv.sent_b));
        r.series.forwarded_packets.push_back(static_cast<double>(iv.fwd_p));
        r.series.forwarded_bits.push_back(static_cast<double>(iv.fwd_b));
        r.series.received_packets.push_back(static_cast<double>(iv.recv_p));
        r.series.received_bits.push_back(static_cast<double>(iv.recv_b));
        running_drops += iv.drop_p;
        r.series.dropped_cumulative.push_back(static_cast<double>(running_drops));
    }

    for (auto& [key, v] : validity_) {
        if (v.open_since) {
            v.total_us += (duration_ - *v.open_since).us;
            v.open_since.reset();
        }
        if (v.total_us > 0) {
            r.route_validity.push_back(
                {key.first, key.second, static_cast<double>(v.total_us) * 1e-6});
        }
    }

    // Every configured flow appears, sending or not.
    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
        FlowAcc& f = flows_[static_cast<std::uint32_t>(i)];
        f.src = cfg.flows[i].src;
        f.dst = cfg.flows[i].dst;
    }
    for (const auto& [id, f] : flows_) {
        r.flows.push_back({id, f.src, f.dst, static_cast<double>(f.sent),
                           static_cast<double>(f.delivered), static_cast<double>(f.dropped),
                           static_cast<double>(f.in_flight)});
    }

    for (const auto& [verdict, n] : screen_counts_) {
        r.screen_counts[screen_verdict_name(verdict)] = static_cast<double>(n);
    }
    r.blacklists = blacklists_;
    r.unblocks = unblocks_;
    return r;
}

namespace {

std::optional<double> mean_optional(const std::vector<MetricsReport>& rs,
                                    std::optional<double> MetricsReport::* field) {
    double sum = 0;
    std::size_t n = 0;
    for (const MetricsReport& r : rs) {
        if (r.*field) {
            sum += *(r.*field);
            n += 1;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

double mean_scalar(const std::vector<MetricsReport>& rs, double MetricsReport::* field) {
    double sum = 0;
    for (const MetricsReport& r : rs) sum += r.*field;
    return sum / static_cast<double>(rs.size());
}

std::vector<double> mean_series(const std::vector<MetricsReport>& rs,
                                std::vector<double> SeriesSet::* field) {
    std::size_t len = 0;
    for (const MetricsReport& r : rs) len = std::max(len, (r.series.*field).size());
    std::vector<double> out(len, 0.0);
    for (const MetricsReport& r : rs) {
        const std::vector<double>& s = r.series.*field;
        for (std::size_t i = 0; i < s.size(); ++i) out[i] += s[i];
    }
    for (double& v : out) v /= static_cast<double>(rs.size());
    return out;
}

std::map<std::string, double> mean_map(const std::vector<MetricsReport>& rs,
                                       std::map<std::string, double> MetricsReport::* field) {
    std::map<std::string, double> out;
    for (const MetricsReport& r : rs) {
        for (const auto& [k, v] : r.*field) out[k] += v;
    }
    for (auto& [k, v] : out) v /= static_cast<double>(rs.size());
    return out;
}

}  // namespace

MetricsReport mean_report(const std::vector<MetricsReport>& per_seed) {
    if (per_seed.empty()) throw std::invalid_argument("mean_report needs at least one report");
    for (const MetricsReport& r : per_seed) {
        if (r.scenario_fingerprint != per_seed.front().scenario_fingerprint ||
            r.mode != per_seed.front().mode) {
            throw std::invalid_argument("mean_report arguments come from different experiments");
        }
    }

    MetricsReport m;
    m.mode = per_seed.front().mode;
    m.scenario_fingerprint = per_seed.front().scenario_fingerprint;
    m.duration_s = per_seed.front().duration_s;
    for (const MetricsReport& r : per_seed) {
        for (std::uint64_t s : r.seeds) m.seeds.push_back(s);
    }

    m.avg_end_to_end_delay_s = mean_optional(per_seed, &MetricsReport::avg_end_to_end_delay_s);
    m.avg_rtt_s = mean_optional(per_seed, &MetricsReport::avg_rtt_s);
    m.avg_processing_time_s = mean_optional(per_seed, &MetricsReport::avg_processing_time_s);
    m.avg_nodes_receiving = mean_optional(per_seed, &MetricsReport::avg_nodes_receiving);
    m.avg_nodes_forwarding = mean_optional(per_seed, &MetricsReport::avg_nodes_forwarding);

    m.sent_total = mean_scalar(per_seed, &MetricsReport::sent_total);
    m.delivered_total = mean_scalar(per_seed, &MetricsReport::delivered_total);
    m.acked_total = mean_scalar(per_seed, &MetricsReport::acked_total);
    m.processing_samples = mean_scalar(per_seed, &MetricsReport::processing_samples);
    m.intermediate_receive_events = mean_scalar(per_seed, &MetricsReport::intermediate_receive_events);
    m.intermediate_forward_events = mean_scalar(per_seed, &MetricsReport::intermediate_forward_events);
    m.dropped_total = mean_scalar(per_seed, &MetricsReport::dropped_total);
    m.dropped_by_reason = mean_map(per_seed, &MetricsReport::dropped_by_reason);
    m.control_dropped_by_reason = mean_map(per_seed, &MetricsReport::control_dropped_by_reason);
    m.screen_counts = mean_map(per_seed, &MetricsReport::screen_counts);

    m.series.generated_packets = mean_series(per_seed, &SeriesSet::generated_packets);
    m.series.generated_bits = mean_series(per_seed, &SeriesSet::generated_bits);
    m.series.sent_packets = mean_series(per_seed, &SeriesSet::sent_packets);
    m.series.sent_bits = mean_series(per_seed, &SeriesSet::sent_bits);
    m.series.forwarded_packets = mean_series(per_seed, &SeriesSet::forwarded_packets);
    m.series.forwarded_bits = mean_series(per_seed, &SeriesSet::forwarded_bits);
    m.series.received_packets = mean_series(per_seed, &SeriesSet::received_packets);
    m.series.received_bits = mean_series(per_seed, &SeriesSet::received_bits);
    m.series.dropped_cumulative = mean_series(per_seed, &SeriesSet::dropped_cumulative);

    std::map<std::pair<NodeId, NodeId>, std::pair<double, double>> pair_sums;  // packets, weighted delay
    for (const MetricsReport& r : per_seed) {
        for (const PairDelay& p : r.pairwise) {
            auto& acc = pair_sums[{p.src, p.dst}];
            acc.first += p.packets;
            acc.second += p.avg_delay_s;
        }
    }
    for (const auto& [key, acc] : pair_sums) {
        double n = static_cast<double>(per_seed.size());
        m.pairwise.push_back({key.first, key.second, acc.first / n, acc.second / n});
    }

    std::map<std::pair<NodeId, NodeId>, double> validity_sums;
    for (const MetricsReport& r : per_seed) {
        for (const RouteValidity& v : r.route_validity) {
            validity_sums[{v.node, v.dest}] += v.seconds;
        }
    }
    for (const auto& [key, sum] : validity_sums) {
        m.route_validity.push_back({key.first, key.second,
                                    sum / static_cast<double>(per_seed.size())});
    }

    std::map<std::uint32_t, FlowStats> flow_sums;
    for (const MetricsReport& r : per_seed) {
        for (const FlowStats& f : r.flows) {
            FlowStats& acc = flow_sums[f.flow_id];
            acc.flow_id = f.flow_id;
            acc.src = f.src;
            acc.dst = f.dst;
            acc.sent += f.sent;
            acc.delivered += f.delivered;
            acc.dropped += f.dropped;
            acc.in_flight += f.in_flight;
        }
    }
    for (auto& [id, f] : flow_sums) {
        double n = static_cast<double>(per_seed.size());
        f.sent /= n;
        f.delivered /= n;
        f.dropped /= n;
        f.in_flight /= n;
        m.flows.push_back(f);
    }

    // Discrete events are concatenated in seed order, not averaged.
    for (const MetricsReport& r : per_seed) {
        m.blacklists.insert(m.blacklists.end(), r.blacklists.begin(), r.blacklists.end());
        m.unblocks.insert(m.unblocks.end(), r.unblocks.begin(), r.unblocks.end());
    }
    return m;
}

}  // namespace manetsim

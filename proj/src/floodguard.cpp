#include "manetsim/floodguard.hpp"

#include <stdexcept>

namespace manetsim {

void DefenseParams::validate() const {
    if (accept_limit == 0) throw std::invalid_argument("defense.accept_limit_per_s must be positive");
    if (blacklist_limit == 0) throw std::invalid_argument("defense.blacklist_limit_per_s must be positive");
    if (accept_limit >= blacklist_limit) {
        throw std::invalid_argument("defense.accept_limit_per_s must be below defense.blacklist_limit_per_s");
    }
    if (base_blacklist_timeout <= SimTime::zero()) {
        throw std::invalid_argument("defense.base_blacklist_timeout_s must be positive");
    }
}

SimTime offense_timeout(std::uint32_t offense, const DefenseParams& params) {
    if (offense == 0) throw std::invalid_argument("offense count starts at 1");
    return params.base_blacklist_timeout.doubled(offense - 1);
}

namespace {

void prune_window(std::deque<SimTime>& q, SimTime now) {
    SimTime cutoff = now - DefenseParams::window;
    while (!q.empty() && q.front() < cutoff) q.pop_front();
}

}  // namespace

ScreenDecision NeighborLedger::screen_rreq(NodeId neighbor, SimTime now, const DefenseParams& params) {
    Entry& e = entries_[neighbor];
    e.arrivals.push_back(now);
    prune_window(e.arrivals, now);
    prune_window(e.accepted, now);

    if (e.blacklisted_until && *e.blacklisted_until > now) {
        return {ScreenVerdict::DropBlacklisted, 0, SimTime::zero()};
    }

    // Window count over all arrivals, accepted or dropped. A neighbor that
    // keeps flooding while blacklisted re-offends on its first arrival after
    // the timeout runs out, with a doubled sentence.
    if (e.arrivals.size() > params.blacklist_limit) {
        SimTime until = now + params.base_blacklist_timeout.doubled(e.offense_count);
        e.offense_count += 1;
        e.blacklisted_until = until;
        return {ScreenVerdict::DropAndBlacklist, e.offense_count, until};
    }

    if (e.accepted.size() >= params.accept_limit) {
        return {ScreenVerdict::DropOverAcceptLimit, 0, SimTime::zero()};
    }

    e.accepted.push_back(now);
    return {ScreenVerdict::Accept, 0, SimTime::zero()};
}

bool NeighborLedger::is_blacklisted(NodeId neighbor, SimTime now) const {
    auto it = entries_.find(neighbor);
    return it != entries_.end() && it->second.blacklisted_until &&
           *it->second.blacklisted_until > now;
}

std::vector<NodeId> NeighborLedger::tick_blacklists(SimTime now) {
    std::vector<NodeId> unblocked;
    for (auto& [id, e] : entries_) {
        if (e.blacklisted_until && *e.blacklisted_until <= now) {
            e.blacklisted_until.reset();
            unblocked.push_back(id);
        }
    }
    return unblocked;
}

void NeighborLedger::prune_ledger(SimTime now, const DefenseParams&) {
    for (auto& [id, e] : entries_) {
        prune_window(e.arrivals, now);
        prune_window(e.accepted, now);
    }
}

const NeighborLedger::Entry* NeighborLedger::find(NodeId neighbor) const {
    auto it = entries_.find(neighbor);
    return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace manetsim

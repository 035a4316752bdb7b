#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "manetsim/packet.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

// Parameters of the per-neighbor RREQ screening defense.
struct DefenseParams {
    bool enabled = false;
    std::uint32_t accept_limit = 3;     // RREQs accepted from one neighbor per window
    std::uint32_t blacklist_limit = 10; // arrivals (accepted or not) that trigger blacklisting
    SimTime base_blacklist_timeout = SimTime::seconds(5.0);
    bool strict_mode = false;  // when set, every packet from a blacklisted neighbor is ignored
    static constexpr SimTime window = kOneSecond;  // fixed

    void validate() const;
};

enum class ScreenVerdict : std::uint8_t {
    Accept,
    DropOverAcceptLimit,
    DropAndBlacklist,
    DropBlacklisted,
};

struct ScreenDecision {
    ScreenVerdict verdict = ScreenVerdict::Accept;
    // Set only for DropAndBlacklist.
    std::uint32_t offense = 0;
    SimTime blacklisted_until;
};

// One node's observation state about the RREQ behavior of each of its
// neighbors. Strictly local: no information is shared between observers.
class NeighborLedger {
public:
    struct Entry {
        std::deque<SimTime> arrivals;  // every RREQ arrival, accepted or not
        std::deque<SimTime> accepted;
        std::uint32_t offense_count = 0;  // never decays
        std::optional<SimTime> blacklisted_until;
    };

    // Screens one RREQ arriving from `neighbor`. The arrival timestamp is
    // recorded unconditionally, before any verdict is reached; dropped RREQs
    // count toward the blacklist threshold just like accepted ones.
    ScreenDecision screen_rreq(NodeId neighbor, SimTime now, const DefenseParams& params);

    bool is_blacklisted(NodeId neighbor, SimTime now) const;

    // Clears blacklist entries whose timeout has passed (until <= now) and
    // returns the neighbors that were unblocked.
    std::vector<NodeId> tick_blacklists(SimTime now);

    // Drops timestamps that can no longer influence any window ending at or
    // after `now`.
    void prune_ledger(SimTime now, const DefenseParams& params);

    const Entry* find(NodeId neighbor) const;

private:
    std::map<NodeId, Entry> entries_;
};

// Blacklist duration for the k-th offense: base * 2^(k-1). offense must be
// at least 1.
SimTime offense_timeout(std::uint32_t offense, const DefenseParams& params);

}  // namespace manetsim

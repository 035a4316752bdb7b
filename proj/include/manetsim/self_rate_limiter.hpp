#pragma once

#include <cstdint>
#include <deque>

#include "manetsim/sim_time.hpp"

namespace manetsim {

// Sliding-window cap on RREQs a node may put on the air (originations and
// forwards share the budget). Windows are closed: an emission at t counts
// against every query in [t, t + 1s]. A node flagged malicious bypasses this
// entirely; that bypass lives with the caller, not here.
class SelfRateLimiter {
public:
    explicit SelfRateLimiter(std::uint32_t limit_per_second) : limit_(limit_per_second) {}

    // True when one more emission at `now` keeps every sliding 1-second
    // window at or under the limit.
    bool allows(SimTime now) const {
        return count_in_window(now) < limit_;
    }

    void record(SimTime now) {
        window_.push_back(now);
    }

    std::uint32_t count_in_window(SimTime now) const {
        prune(now);
        return static_cast<std::uint32_t>(window_.size());
    }

    // Earliest time at or after `now` when an emission becomes permitted,
    // assuming no further emissions happen in between.
    SimTime next_permit_time(SimTime now) const {
        prune(now);
        if (window_.size() < limit_) return now;
        // The (limit)-th newest timestamp must fall out of the closed window.
        SimTime blocker = window_[window_.size() - limit_];
        return blocker + kOneSecond + SimTime::microseconds(1);
    }

private:
    void prune(SimTime now) const {
        SimTime cutoff = now - kOneSecond;
        while (!window_.empty() && window_.front() < cutoff) window_.pop_front();
    }

    std::uint32_t limit_;
    mutable std::deque<SimTime> window_;
};

}  // namespace manetsim

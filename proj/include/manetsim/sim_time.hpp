#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace manetsim {

// Simulation clock value, also used for durations. Integer microseconds so
// that boundary comparisons and accumulated sums are exact; doubles only
// appear when a value is rendered for a report.
struct SimTime {
    std::int64_t us = 0;

    static constexpr SimTime zero() { return SimTime{0}; }
    static constexpr SimTime microseconds(std::int64_t v) { return SimTime{v}; }

    static SimTime seconds(double s) {
        return SimTime{static_cast<std::int64_t>(std::llround(s * 1e6))};
    }

    double to_seconds() const { return static_cast<double>(us) * 1e-6; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;
    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us + b.us}; }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us - b.us}; }
    SimTime& operator+=(SimTime o) { us += o.us; return *this; }

    // Duration scaled by a power of two, saturating. Used for the blacklist
    // doubling law; saturation keeps pathological offense counts finite.
    SimTime doubled(unsigned times) const {
        std::int64_t v = us;
        for (unsigned i = 0; i < times; ++i) {
            if (v > std::numeric_limits<std::int64_t>::max() / 2) {
                return SimTime{std::numeric_limits<std::int64_t>::max()};
            }
            v *= 2;
        }
        return SimTime{v};
    }
};

// Interval between successive emissions of a per-second rate.
inline SimTime rate_interval(double per_second) {
    return SimTime::seconds(1.0 / per_second);
}

constexpr SimTime kOneSecond{1000000};

}  // namespace manetsim

template <>
struct std::hash<manetsim::SimTime> {
    std::size_t operator()(manetsim::SimTime t) const noexcept {
        return std::hash<std::int64_t>{}(t.us);
    }
};

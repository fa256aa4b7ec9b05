#pragma once

// Brute-force reference for directional-change dissection. From each
// confirmed event it rescans the segment to recompute the running extreme
// for every candidate tick, instead of carrying state forward.

#include "itime/intrinsic.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

namespace itime::testing {

struct OracleEvent
{
    std::size_t index;
    DcEvent event;
};

inline std::optional<OracleEvent> oracle_first_event(std::span<const Tick> t, double delta)
{
    for (std::size_t k = 1; k < t.size(); ++k) {
        double lo = t[0].price, hi = t[0].price;
        for (std::size_t i = 0; i <= k; ++i) {
            lo = std::min(lo, t[i].price);
            hi = std::max(hi, t[i].price);
        }
        const double p = t[k].price;
        if ((p - lo) / lo >= delta) return OracleEvent{k, {Direction::up, t[k].time, p, lo, std::nullopt}};
        if ((hi - p) / hi >= delta) return OracleEvent{k, {Direction::down, t[k].time, p, hi, std::nullopt}};
    }
    return std::nullopt;
}

inline std::optional<OracleEvent> oracle_next_event(std::span<const Tick> t, const OracleEvent& from, double delta)
{
    const std::size_t j = from.index;
    const double start = t[j].price;
    const bool rising = from.event.direction == Direction::up;
    for (std::size_t k = j + 1; k < t.size(); ++k) {
        // Extreme of the segment seen before tick k.
        const auto seg = t.subspan(j, k - j);
        const auto cmp = [](const Tick& a, const Tick& b) { return a.price < b.price; };
        const double ext = rising ? std::max_element(seg.begin(), seg.end(), cmp)->price
                                  : std::min_element(seg.begin(), seg.end(), cmp)->price;
        const double p = t[k].price;
        if (rising) {
            if (p <= ext && (ext - p) / ext >= delta) {
                return OracleEvent{k, {Direction::down, t[k].time, p, ext, (ext - start) / start}};
            }
        } else {
            if (p >= ext && (p - ext) / ext >= delta) {
                return OracleEvent{k, {Direction::up, t[k].time, p, ext, (start - ext) / start}};
            }
        }
    }
    return std::nullopt;
}

inline std::vector<DcEvent> oracle_dissect(std::span<const Tick> t, double delta)
{
    std::vector<DcEvent> out;
    auto ev = oracle_first_event(t, delta);
    while (ev) {
        out.push_back(ev->event);
        ev = oracle_next_event(t, *ev, delta);
    }
    return out;
}

} // namespace itime::testing

#pragma once

#include "itime/series.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace itime {

enum class Direction { up, down };

[[nodiscard]] std::string_view to_string(Direction d) noexcept;

struct DcConfig
{
    double delta = 0.01; // relative threshold, 0 < delta < 1
};

void validate(const DcConfig& config);

/// A confirmed directional change.
///
/// `prev_overshoot` is the overshoot of the segment this event closes:
/// (extreme - last DC price) / last DC price, taken with the sign that makes
/// it non-negative. It is absent for the first event of a stream.
struct DcEvent
{
    Direction direction;
    double confirm_time;
    double confirm_price;
    double prev_extreme_price;
    std::optional<double> prev_overshoot;

    bool operator==(const DcEvent&) const = default;
};

/// Streaming directional-change detector for one threshold.
///
/// Moves are relative, (P - ext) / ext, and the trigger is inclusive (>= delta).
/// Extremes move only on strict improvement. At most one event per tick.
class DcClock
{
public:
    enum class Mode { unseeded, up, down };

    explicit DcClock(DcConfig config);

    /// Feed one tick. Throws if tick.time is earlier than the previous tick.
    std::optional<DcEvent> step(const Tick& tick);

    [[nodiscard]] double delta() const noexcept { return m_delta; }
    [[nodiscard]] Mode mode() const noexcept { return m_mode; }
    [[nodiscard]] bool seeded() const noexcept { return m_seeded; }
    [[nodiscard]] double ext_max() const noexcept { return m_ext_max; }
    [[nodiscard]] double ext_min() const noexcept { return m_ext_min; }
    [[nodiscard]] std::optional<double> last_dc_price() const noexcept;
    [[nodiscard]] std::optional<double> last_dc_time() const noexcept;

private:
    DcEvent fire(Direction dir, const Tick& tick, double prev_extreme, std::optional<double> overshoot);

    double m_delta;
    Mode m_mode = Mode::unseeded;
    bool m_seeded = false;
    bool m_has_dc = false;
    double m_ext_max = 0.0;
    double m_ext_min = 0.0;
    double m_last_dc_price = 0.0;
    double m_last_dc_time = 0.0;
    double m_last_time = 0.0;
};

struct Dissection
{
    double delta = 0.0;
    std::vector<DcEvent> events;
    std::vector<double> overshoots; // one per completed segment, in event order
    std::size_t n_dc = 0;
};

[[nodiscard]] Dissection dissect(const PriceSeries& series, double delta);
[[nodiscard]] Dissection dissect(std::span<const Tick> ticks, double delta);

/// Event count only, without materialising the event list.
[[nodiscard]] std::size_t count_directional_changes(std::span<const Tick> ticks, double delta);

struct OvershootStats
{
    std::optional<double> mean_os; // <omega>
    std::optional<double> var_os;  // <omega - delta>_2, offset by delta rather than the sample mean
    std::size_t n_dc = 0;
};

[[nodiscard]] OvershootStats overshoot_stats(const Dissection& d);

struct ExpCheck
{
    double ks_distance = 0.0;
    std::size_t n = 0;
};

/// Kolmogorov-Smirnov distance between `samples` and an exponential law with the given mean.
[[nodiscard]] double ks_distance_exponential(std::span<const double> samples, double mean);

inline constexpr std::size_t kMinOvershootsForExpCheck = 100;

/// KS distance of the overshoots against Exp(mean delta). Needs at least 100 overshoots.
[[nodiscard]] ExpCheck overshoot_exp_check(const Dissection& d);

/// Event log CSV: confirm_time,direction,confirm_price,prev_extreme_price,prev_overshoot.
/// The first event's prev_overshoot is written as an empty field.
void write_event_log(std::ostream& out, const Dissection& d, std::span<const std::string> comments = {});

/// Rebuilds a Dissection from an event log written by write_event_log.
[[nodiscard]] Dissection read_event_log(std::istream& in, double delta);

} // namespace itime

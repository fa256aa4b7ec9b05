#include "itime/intrinsic.hpp"

#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace itime {

std::string_view to_string(Direction d) noexcept
{
    return d == Direction::up ? "up" : "down";
}

void validate(const DcConfig& config)
{
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw Error("delta must satisfy 0 < delta < 1, got " + detail::format_double(config.delta));
    }
}

DcClock::DcClock(DcConfig config) : m_delta{config.delta}
{
    validate(config);
}

std::optional<double> DcClock::last_dc_price() const noexcept
{
    return m_has_dc ? std::optional<double>{m_last_dc_price} : std::nullopt;
}

std::optional<double> DcClock::last_dc_time() const noexcept
{
    return m_has_dc ? std::optional<double>{m_last_dc_time} : std::nullopt;
}

DcEvent DcClock::fire(Direction dir, const Tick& tick, double prev_extreme, std::optional<double> overshoot)
{
    m_mode = dir == Direction::up ? Mode::up : Mode::down;
    m_ext_max = tick.price;
    m_ext_min = tick.price;
    m_last_dc_price = tick.price;
    m_last_dc_time = tick.time;
    m_has_dc = true;
    return DcEvent{dir, tick.time, tick.price, prev_extreme, overshoot};
}

std::optional<DcEvent> DcClock::step(const Tick& tick)
{
    if (!m_seeded) {
        m_seeded = true;
        m_ext_max = m_ext_min = tick.price;
        m_last_time = tick.time;
        return std::nullopt;
    }
    if (tick.time < m_last_time) {
        throw Error("tick time " + detail::format_double(tick.time) + " precedes previous tick " +
                    detail::format_double(m_last_time));
    }
    m_last_time = tick.time;
    const double p = tick.price;

    switch (m_mode) {
    case Mode::unseeded:
        if (p > m_ext_max) m_ext_max = p;
        if (p < m_ext_min) m_ext_min = p;
        if ((p - m_ext_min) / m_ext_min >= m_delta) return fire(Direction::up, tick, m_ext_min, std::nullopt);
        if ((m_ext_max - p) / m_ext_max >= m_delta) return fire(Direction::down, tick, m_ext_max, std::nullopt);
        return std::nullopt;

    case Mode::up:
        if (p > m_ext_max) {
            m_ext_max = p;
        } else if ((m_ext_max - p) / m_ext_max >= m_delta) {
            const double extreme = m_ext_max;
            return fire(Direction::down, tick, extreme, (extreme - m_last_dc_price) / m_last_dc_price);
        }
        return std::nullopt;

    case Mode::down:
        if (p < m_ext_min) {
            m_ext_min = p;
        } else if ((p - m_ext_min) / m_ext_min >= m_delta) {
            const double extreme = m_ext_min;
            return fire(Direction::up, tick, extreme, (m_last_dc_price - extreme) / m_last_dc_price);
        }
        return std::nullopt;
    }
    return std::nullopt;
}

Dissection dissect(std::span<const Tick> ticks, double delta)
{
    DcClock clock(DcConfig{delta});
    Dissection d;
    d.delta = delta;
    for (const Tick& t : ticks) {
        if (auto ev = clock.step(t)) {
            if (ev->prev_overshoot) d.overshoots.push_back(*ev->prev_overshoot);
            d.events.push_back(*ev);
        }
    }
    d.n_dc = d.events.size();
    return d;
}

Dissection dissect(const PriceSeries& series, double delta)
{
    return dissect(series.ticks(), delta);
}

std::size_t count_directional_changes(std::span<const Tick> ticks, double delta)
{
    DcClock clock(DcConfig{delta});
    std::size_t n = 0;
    for (const Tick& t : ticks) n += clock.step(t).has_value();
    return n;
}

OvershootStats overshoot_stats(const Dissection& d)
{
    OvershootStats s;
    s.n_dc = d.n_dc;
    if (d.overshoots.empty()) return s;
    double sum = 0.0, sum_sq = 0.0;
    for (double w : d.overshoots) {
        sum += w;
        sum_sq += (w - d.delta) * (w - d.delta);
    }
    const double n = static_cast<double>(d.overshoots.size());
    s.mean_os = sum / n;
    s.var_os = sum_sq / n;
    return s;
}

double ks_distance_exponential(std::span<const double> samples, double mean)
{
    if (samples.empty()) throw Error("KS distance needs at least one sample");
    if (!(mean > 0.0)) throw Error("exponential mean must be positive");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double cdf = x[i] <= 0.0 ? 0.0 : -std::expm1(-x[i] / mean);
        const double above = static_cast<double>(i + 1) / n - cdf;
        const double below = cdf - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    return d;
}

ExpCheck overshoot_exp_check(const Dissection& d)
{
    if (d.overshoots.size() < kMinOvershootsForExpCheck) {
        throw Error("exponential check needs at least " + std::to_string(kMinOvershootsForExpCheck) +
                    " overshoots, got " + std::to_string(d.overshoots.size()));
    }
    return {ks_distance_exponential(d.overshoots, d.delta), d.overshoots.size()};
}

void write_event_log(std::ostream& out, const Dissection& d, std::span<const std::string> comments)
{
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "confirm_time,direction,confirm_price,prev_extreme_price,prev_overshoot\n";
    for (const DcEvent& e : d.events) {
        out << detail::format_double(e.confirm_time) << ',' << to_string(e.direction) << ','
            << detail::format_double(e.confirm_price) << ',' << detail::format_double(e.prev_extreme_price) << ',';
        if (e.prev_overshoot) out << detail::format_double(*e.prev_overshoot);
        out << '\n';
    }
}

Dissection read_event_log(std::istream& in, double delta)
{
    validate(DcConfig{delta});
    Dissection d;
    d.delta = delta;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto fields = detail::split(line, ',');
        if (!header_seen) {
            header_seen = true;
            if (!fields.empty() && fields[0] == "confirm_time") continue;
        }
        if (fields.size() != 5) throw ParseError(line_no, "event row needs 5 columns");
        DcEvent e{};
        if (fields[1] == "up") {
            e.direction = Direction::up;
        } else if (fields[1] == "down") {
            e.direction = Direction::down;
        } else {
            throw ParseError(line_no, "direction must be 'up' or 'down'");
        }
        const auto num = [&](std::string_view f, const char* what) {
            const auto v = detail::to_double(f);
            if (!v) throw ParseError(line_no, std::string("unparseable ") + what);
            return *v;
        };
        e.confirm_time = num(fields[0], "confirm_time");
        e.confirm_price = num(fields[2], "confirm_price");
        e.prev_extreme_price = num(fields[3], "prev_extreme_price");
        if (!fields[4].empty()) {
            e.prev_overshoot = num(fields[4], "prev_overshoot");
            if (*e.prev_overshoot < 0.0) throw ParseError(line_no, "negative overshoot");
            d.overshoots.push_back(*e.prev_overshoot);
        }
        if (!d.events.empty() && d.events.back().direction == e.direction) {
            throw ParseError(line_no, "event directions must alternate");
        }
        d.events.push_back(e);
    }
    d.n_dc = d.events.size();
    return d;
}

} // namespace itime

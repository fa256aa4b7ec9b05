#include "itime/physical.hpp"

#include "text.hpp"

#include <cmath>

namespace itime {

namespace {

// Largest K with K*dt <= T, guarding against rounding in T/dt.
std::size_t window_count(double span, double dt)
{
    auto k = static_cast<std::size_t>(std::floor(span / dt));
    while (static_cast<double>(k + 1) * dt <= span) ++k;
    while (k > 0 && static_cast<double>(k) * dt > span) --k;
    return k;
}

} // namespace

ReturnSample sample_returns(const PriceSeries& series, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("dt must be positive, got " + detail::format_double(dt));
    const double span = series.span();
    if (span < dt) {
        throw Error("series span " + detail::format_double(span) + " s is shorter than dt " +
                    detail::format_double(dt) + " s");
    }
    const auto ticks = series.ticks();
    const double t0 = ticks.front().time;
    const std::size_t windows = window_count(span, dt);

    ReturnSample out;
    out.dt = dt;
    out.returns.reserve(windows);

    std::size_t cursor = 0;
    const auto price_at = [&](double t) {
        while (cursor + 1 < ticks.size() && ticks[cursor + 1].time <= t) ++cursor;
        return ticks[cursor].price;
    };

    double prev = price_at(t0);
    for (std::size_t k = 1; k <= windows; ++k) {
        const double next = price_at(t0 + static_cast<double>(k) * dt);
        out.returns.push_back((next - prev) / prev);
        prev = next;
    }
    out.n_windows = out.returns.size();
    return out;
}

double squared_return_mean(const ReturnSample& sample)
{
    if (sample.returns.empty()) throw Error("return sample is empty");
    double sum = 0.0;
    for (double r : sample.returns) sum += r * r;
    return sum / static_cast<double>(sample.returns.size());
}

} // namespace itime
